#include "arc/bounds.hpp"

#include <cmath>

namespace arc {

namespace {

double chained_core(const FunctionClassSpec& cls, double b, double eps, std::size_t n) {
    double l = static_cast<double>(cls.depth());
    double lip = std::pow(cls.activation.lipschitz(), l - 1.0);
    return (b + eps) * lip * std::sqrt(cls.sum_hh() * std::log(3.0 * l)) *
           cls.budget_product() / std::sqrt(static_cast<double>(n));
}

void check_bound_inputs(const FunctionClassSpec& cls, double b, double eps, double p,
                        std::size_t n) {
    cls.validate();
    require(b >= 0.0 && eps >= 0.0, "bound: b and eps must be >= 0");
    require(p >= 1.0, "bound: p must be >= 1");
    require(n >= 1, "bound: n must be >= 1");
}

}  // namespace

double thm1_bound(const FunctionClassSpec& cls, double b, double eps, double p, std::size_t n) {
    check_bound_inputs(cls, b, eps, p, n);
    require(cls.norm_kind == NormKind::Frobenius, "thm1_bound: Frobenius budgets required");
    return 24.0 * dual_dimension_factor(cls.input_dim(), 2.0, p) * chained_core(cls, b, eps, n);
}

double thm2_bound(const FunctionClassSpec& cls, double b, double eps, double p, std::size_t n) {
    check_bound_inputs(cls, b, eps, p, n);
    require(cls.norm_kind == NormKind::GroupOneInf, "thm2_bound: (1,inf) budgets required");
    return 24.0 * chained_core(cls, b, eps, n);
}

double thm3_lower_bound(const FunctionClassSpec& cls, double b, double eps, double p,
                        std::size_t n, const LowerBoundConfig& cfg) {
    check_bound_inputs(cls, b, eps, p, n);
    require(cfg.khintchine_c > 0.0 && cfg.khintchine_c <= 1.0,
            "thm3_lower_bound: khintchine constant must be in (0, 1]");
    double c = cfg.khintchine_c;
    return c / (1.0 + 2.0 * c) * dual_dimension_factor(cls.input_dim(), cfg.r, p) * (b + eps) *
           cls.budget_product() / std::sqrt(static_cast<double>(n));
}

double thm4_multiclass_bound(const FunctionClassSpec& cls, double b, double eps, double p,
                             std::size_t n, double gamma, std::size_t k) {
    check_bound_inputs(cls, b, eps, p, n);
    require(gamma > 0.0, "thm4_multiclass_bound: gamma must be positive");
    require(k >= 2, "thm4_multiclass_bound: K must be >= 2");
    return 48.0 * static_cast<double>(k) / gamma *
           dual_dimension_factor(cls.input_dim(), 2.0, p) * chained_core(cls, b, eps, n);
}

std::map<std::string, double> comparison_bounds(const FunctionClassSpec& cls,
                                                const MLP* weights_actual, double b, double eps,
                                                std::size_t n) {
    cls.validate();
    require(n >= 1, "comparison_bounds: n must be >= 1");
    const double l = static_cast<double>(cls.depth());
    const double rootn = std::sqrt(static_cast<double>(n));
    const double lip = std::pow(cls.activation.lipschitz(), l - 1.0);

    std::map<std::string, double> out;

    if (weights_actual != nullptr) {
        weights_actual->validate();
        require(weights_actual->weights.size() == cls.depth(),
                "comparison_bounds: weights do not match the class depth");
        double spec_prod = 1.0;
        double ratio_sum = 0.0;
        for (const Matrix& w : weights_actual->weights) {
            double sn = matrix_norm(w, NormKind::Spectral);
            double tn = matrix_norm(w, NormKind::GroupTwoOne);
            spec_prod *= sn;
            ratio_sum += sn > 0.0 ? std::pow(tn / sn, 2.0 / 3.0) : 0.0;
        }
        out["bartlett_spectral"] = b * spec_prod / rootn * std::pow(ratio_sum, 1.5);
    }

    double h = static_cast<double>(cls.width());
    out["golowich"] = b * std::sqrt(l * l * l * h) * cls.budget_product() / rootn;
    out["neyshabur_exp"] = b * std::pow(2.0, l) * lip * cls.budget_product() / rootn;
    if (cls.depth() == 2) {
        double h1 = static_cast<double>(cls.dims[1]);
        double d = static_cast<double>(cls.input_dim());
        out["awasthi_two_layer"] = (b + eps) * std::sqrt(h1 * d) *
                                   std::sqrt(std::log(static_cast<double>(n))) *
                                   cls.budgets[0] * cls.budgets[1] / rootn;
    }
    return out;
}

FactorDecomposition factor_decomposition(double b, double eps, std::size_t l, std::size_t h,
                                         double gamma, double weight_norm_product,
                                         FactorMode mode) {
    require(gamma > 0.0, "factor_decomposition: gamma must be positive");
    require(l >= 1 && h >= 1, "factor_decomposition: l and h must be >= 1");
    FactorDecomposition out;
    double ld = static_cast<double>(l);
    if (mode == FactorMode::Standard) {
        out.c_factor = b * std::sqrt(ld);
    } else {
        double logl = std::max(std::log(ld), 1e-12);
        out.c_factor = (b + eps) * static_cast<double>(h) * std::sqrt(ld * logl);
        out.degenerate_depth = (l == 1);
    }
    out.w_factor = weight_norm_product / gamma;
    out.product = out.c_factor * out.w_factor;
    return out;
}

}  // namespace arc
