#ifndef ARC_COVERING_HPP
#define ARC_COVERING_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "arc/attack.hpp"
#include "arc/dataset.hpp"
#include "arc/rademacher.hpp"

namespace arc {

// log covering number of a norm ball of the given radius in `dim` dimensions:
// dim * ln(1 + 2W/eps).
double ball_cover_log(double radius, double eps, std::size_t dim);

// Frobenius ball of m x k matrices; uses the simplified (3W/eps)^{mk} count
// when 2W/eps >= 2.
double frobenius_ball_cover_log(double radius, double eps, std::size_t m, std::size_t k);

// Diameter of the robustified class under the empirical L2 pseudometric:
// D = 2 L^{l-1} max{1, d^{1/2-1/p}} (B + eps) prod M_j for Frobenius budgets;
// the (1,inf) variant drops the dimension factor.
double class_diameter(const FunctionClassSpec& cls, double b, double eps, double p);

// log cardinality of the robustified class cover at scale cover_eps:
// (sum_j h_j h_{j-1}) * ln(3 l D / (2 cover_eps)).
double robustified_class_cover_log(const FunctionClassSpec& cls, double b, double eps_attack,
                                   double p, double cover_eps);

// 2 max_i |inf_ball y_i f(x')| for one class member, grid-oracle inner solves;
// empirical side of the diameter inequality.
double empirical_two_sup_norm(const MLP& net, const Dataset& data, const AttackSpec& attack);

// Both sides of the robustified weight perturbation inequality for a concrete
// pair of nets with ||W_j - W_j^c|| <= delta_j:
// lhs_max = max_i |inf y_i f - inf y_i f^c| (grid oracle),
// rhs = sum_j D delta_j / (2 M_j).
std::pair<double, double> weight_perturbation_gap_check(const FunctionClassSpec& cls,
                                                        const MLP& net, const MLP& net_c,
                                                        const Dataset& data,
                                                        const AttackSpec& attack,
                                                        const std::vector<double>& deltas);

// Assembled chaining data for a class: diameter, cover-log function, and the
// delta -> 0 Dudley value.
struct ChainResult {
    double diameter = 0.0;
    double sum_hh = 0.0;
    std::size_t depth = 1;
    std::size_t n = 1;
    double dudley_value = 0.0;  // delta -> 0 default

    double log_cover_at(double eps) const;
};

ChainResult assemble_chain(const FunctionClassSpec& cls, double b, double eps, double p,
                           std::size_t n);

// 8 delta + (12/sqrt(n)) * integral_delta^{D/2} sqrt(log N(eps)) d eps for the
// assembled cover; delta_lower = 0 gives the delta -> 0 limit. Composite
// Simpson in the exponent variable, refined until the relative change of the
// panel sum is below 1e-6.
double dudley_integral(const ChainResult& chain, double delta_lower = 0.0);

// integral_0^{1/2} sqrt(ln(3 l / (2 eps))) d eps, by the same quadrature.
double unit_entropy_integral(std::size_t depth);

// Closed form of the same integral: (1/2)((3l/2) sqrt(pi) erfc(sqrt(ln 3l)) + sqrt(ln 3l)).
double unit_entropy_integral_closed_form(std::size_t depth);

}  // namespace arc

#endif
