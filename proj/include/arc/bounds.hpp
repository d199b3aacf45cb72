#ifndef ARC_BOUNDS_HPP
#define ARC_BOUNDS_HPP

#include <map>
#include <optional>
#include <string>

#include "arc/rademacher.hpp"

namespace arc {

struct LowerBoundConfig {
    double khintchine_c = 0.7071067811865476;  // 1/sqrt(2)
    double r = 2.0;                            // 2 for Frobenius budgets, 1 for (1,inf)
};

// (24/sqrt(n)) max{1, d^{1/2-1/p}} (B+eps) L^{l-1} sqrt(sum hh ln(3l)) prod M_j,
// Frobenius budgets.
double thm1_bound(const FunctionClassSpec& cls, double b, double eps, double p, std::size_t n);

// Same without the dimension factor, (1,inf) budgets.
double thm2_bound(const FunctionClassSpec& cls, double b, double eps, double p, std::size_t n);

// (c/(1+2c)) max{1, d^{1-1/r-1/p}} (B+eps) prod M_j / sqrt(n).
double thm3_lower_bound(const FunctionClassSpec& cls, double b, double eps, double p,
                        std::size_t n, const LowerBoundConfig& cfg = {});

// (48 K / (gamma sqrt(n))) max{1, d^{1/2-1/p}} (B+eps) L^{l-1}
//   sqrt(sum hh ln(3l)) prod M_j.
double thm4_multiclass_bound(const FunctionClassSpec& cls, double b, double eps, double p,
                             std::size_t n, double gamma, std::size_t k);

// Order-level comparison bounds with unit constants; awasthi only for l = 2,
// bartlett only when actual weights are supplied (it needs their spectral and
// (2,1) norms). Keys: bartlett_spectral, golowich, neyshabur_exp,
// awasthi_two_layer.
std::map<std::string, double> comparison_bounds(const FunctionClassSpec& cls,
                                                const MLP* weights_actual, double b, double eps,
                                                std::size_t n);

enum class FactorMode { Standard, Adversarial };

struct FactorDecomposition {
    double c_factor = 0.0;  // C_std = B sqrt(l) or C_adv = (B+eps) h sqrt(l ln l)
    double w_factor = 0.0;  // prod ||W_j|| / gamma
    double product = 0.0;
    bool degenerate_depth = false;  // l = 1 makes sqrt(l ln l) collapse
};

FactorDecomposition factor_decomposition(double b, double eps, std::size_t l, std::size_t h,
                                         double gamma, double weight_norm_product,
                                         FactorMode mode);

struct BoundReport {
    double thm1_frobenius = 0.0;
    double thm2_one_inf = 0.0;
    double thm3_lower = 0.0;
    std::optional<double> thm4_multiclass;
    std::map<std::string, double> comparisons;  // order-level, unit constants
    double c_std = 0.0;
    double c_adv = 0.0;
    double w_factor = 0.0;  // prod ||W_j|| / gamma
    bool c_adv_degenerate = false;
    std::size_t n = 0;
};

}  // namespace arc

#endif
