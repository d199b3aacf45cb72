#include "arc/covering.hpp"

#include <algorithm>
#include <cmath>

namespace arc {

double ball_cover_log(double radius, double eps, std::size_t dim) {
    require(radius > 0.0, "ball_cover_log: radius must be positive");
    require(eps > 0.0, "ball_cover_log: eps must be positive");
    require(dim >= 1, "ball_cover_log: dim must be >= 1");
    return static_cast<double>(dim) * std::log1p(2.0 * radius / eps);
}

double frobenius_ball_cover_log(double radius, double eps, std::size_t m, std::size_t k) {
    require(radius > 0.0 && eps > 0.0, "frobenius_ball_cover_log: radius and eps must be positive");
    double dim = static_cast<double>(m) * static_cast<double>(k);
    if (2.0 * radius / eps >= 2.0) return dim * std::log(3.0 * radius / eps);
    return dim * std::log1p(2.0 * radius / eps);
}

double class_diameter(const FunctionClassSpec& cls, double b, double eps, double p) {
    cls.validate();
    require(b >= 0.0 && eps >= 0.0, "class_diameter: b and eps must be >= 0");
    require(p >= 1.0, "class_diameter: p must be >= 1");
    double lip = std::pow(cls.activation.lipschitz(), static_cast<double>(cls.depth()) - 1.0);
    double factor = cls.norm_kind == NormKind::Frobenius
                        ? dual_dimension_factor(cls.input_dim(), 2.0, p)
                        : 1.0;
    return 2.0 * lip * factor * (b + eps) * cls.budget_product();
}

double robustified_class_cover_log(const FunctionClassSpec& cls, double b, double eps_attack,
                                   double p, double cover_eps) {
    require(cover_eps > 0.0, "robustified_class_cover_log: cover_eps must be positive");
    double d = class_diameter(cls, b, eps_attack, p);
    double l = static_cast<double>(cls.depth());
    return cls.sum_hh() * std::log(3.0 * l * d / (2.0 * cover_eps));
}

double empirical_two_sup_norm(const MLP& net, const Dataset& data, const AttackSpec& attack) {
    double worst = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        AttackResult r = inner_min_grid(net, data.sample(i),
                                        AttackObjective::binary_margin(data.signed_label(i)),
                                        attack.p, attack.epsilon, attack.grid_resolution);
        worst = std::max(worst, std::fabs(r.value));
    }
    return 2.0 * worst;
}

std::pair<double, double> weight_perturbation_gap_check(const FunctionClassSpec& cls,
                                                        const MLP& net, const MLP& net_c,
                                                        const Dataset& data,
                                                        const AttackSpec& attack,
                                                        const std::vector<double>& deltas) {
    cls.validate();
    require(deltas.size() == cls.depth(), "perturbation check: one delta per layer");
    require(net.weights.size() == cls.depth() && net_c.weights.size() == cls.depth(),
            "perturbation check: depth mismatch");
    require(cls.contains(net) && cls.contains(net_c),
            "perturbation check: net outside the class norm budget");
    require(data.dim() <= 3, "perturbation check: grid oracle limited to d <= 3");
    for (std::size_t j = 0; j < cls.depth(); ++j) {
        Matrix diff = net.weights[j];
        for (std::size_t t = 0; t < diff.data.size(); ++t) diff.data[t] -= net_c.weights[j].data[t];
        require(matrix_norm(diff, cls.norm_kind) <= deltas[j] * (1.0 + 1e-9),
                "perturbation check: ||W_j - W_j^c|| exceeds delta_j");
    }

    double lhs = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        AttackObjective obj = AttackObjective::binary_margin(data.signed_label(i));
        double a = inner_min_grid(net, data.sample(i), obj, attack.p, attack.epsilon,
                                  attack.grid_resolution)
                       .value;
        double c = inner_min_grid(net_c, data.sample(i), obj, attack.p, attack.epsilon,
                                  attack.grid_resolution)
                       .value;
        lhs = std::max(lhs, std::fabs(a - c));
    }

    double d = class_diameter(cls, data.group_norm(attack.p), attack.epsilon, attack.p);
    double rhs = 0.0;
    for (std::size_t j = 0; j < cls.depth(); ++j) {
        require(cls.budgets[j] > 0.0, "perturbation check: zero norm budget");
        rhs += d * deltas[j] / (2.0 * cls.budgets[j]);
    }
    return {lhs, rhs};
}

double ChainResult::log_cover_at(double eps) const {
    require(eps > 0.0, "log_cover_at: eps must be positive");
    return sum_hh * std::log(3.0 * static_cast<double>(depth) * diameter / (2.0 * eps));
}

ChainResult assemble_chain(const FunctionClassSpec& cls, double b, double eps, double p,
                           std::size_t n) {
    require(n >= 1, "assemble_chain: n must be >= 1");
    ChainResult chain;
    chain.diameter = class_diameter(cls, b, eps, p);
    chain.sum_hh = cls.sum_hh();
    chain.depth = cls.depth();
    chain.n = n;
    chain.dudley_value = dudley_integral(chain, 0.0);
    return chain;
}

namespace {

// integral_{lo}^{hi} sqrt(w) e^{-w} dw by composite Simpson, doubling the
// panel count until the relative change drops below 1e-6.
double gamma_tail_quadrature(double lo, double hi) {
    if (hi <= lo) return 0.0;
    auto f = [](double w) { return std::sqrt(w) * std::exp(-w); };
    double prev = 0.0;
    for (std::size_t panels = 16; panels <= (1u << 20); panels *= 2) {
        double h = (hi - lo) / static_cast<double>(panels);
        double s = f(lo) + f(hi);
        for (std::size_t i = 1; i < panels; ++i)
            s += f(lo + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
        double val = s * h / 3.0;
        if (panels > 16 && std::fabs(val - prev) <= 1e-6 * std::fabs(val)) return val;
        prev = val;
    }
    throw NoConvergence("dudley quadrature did not converge within 2^20 panels");
}

// integral_{delta}^{D/2} sqrt(ln(c/eps)) d eps with c = 3 l D / 2, via the
// substitution w = ln(c/eps): c * integral sqrt(w) e^{-w} dw. The delta -> 0
// endpoint becomes an exponentially decaying tail, truncated where the
// integrand is below 1e-26 of its scale.
double entropy_integral(double diameter, std::size_t depth, double delta) {
    if (diameter <= 0.0) return 0.0;
    double c = 3.0 * static_cast<double>(depth) * diameter / 2.0;
    double w_lo = std::log(c / (diameter / 2.0));  // = ln(3 l)
    double w_hi = delta > 0.0 ? std::log(c / delta) : w_lo + 60.0;
    return c * gamma_tail_quadrature(w_lo, w_hi);
}

}  // namespace

double dudley_integral(const ChainResult& chain, double delta_lower) {
    require(delta_lower >= 0.0, "dudley_integral: delta must be >= 0");
    if (chain.diameter == 0.0) return 8.0 * delta_lower;
    require(delta_lower < chain.diameter / 2.0, "dudley_integral: delta must be below D/2");
    double integral =
        std::sqrt(chain.sum_hh) * entropy_integral(chain.diameter, chain.depth, delta_lower);
    return 8.0 * delta_lower + 12.0 / std::sqrt(static_cast<double>(chain.n)) * integral;
}

double unit_entropy_integral(std::size_t depth) {
    require(depth >= 1, "unit_entropy_integral: depth must be >= 1");
    return entropy_integral(1.0, depth, 0.0);
}

double unit_entropy_integral_closed_form(std::size_t depth) {
    require(depth >= 1, "unit_entropy_integral_closed_form: depth must be >= 1");
    double l3 = 3.0 * static_cast<double>(depth);
    double root = std::sqrt(std::log(l3));
    return 0.5 * (l3 / 2.0 * std::sqrt(M_PI) * std::erfc(root) + root);
}

}  // namespace arc
