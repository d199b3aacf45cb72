#ifndef ARC_RADEMACHER_HPP
#define ARC_RADEMACHER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "arc/attack.hpp"
#include "arc/dataset.hpp"
#include "arc/network.hpp"

namespace arc {

// Norm-ball-constrained fully-connected class: dims h_0..h_l, per-layer
// budgets ||W_j|| <= M_j in the chosen norm.
struct FunctionClassSpec {
    std::vector<std::size_t> dims;        // h_0 .. h_l
    NormKind norm_kind = NormKind::Frobenius;
    std::vector<double> budgets;          // M_1 .. M_l
    ActivationSpec activation;

    std::size_t depth() const { return budgets.size(); }
    std::size_t input_dim() const { return dims.front(); }
    std::size_t output_dim() const { return dims.back(); }
    std::size_t width() const;            // max h_j
    std::size_t param_count() const;
    double budget_product() const;
    double sum_hh() const;                // sum_j h_j h_{j-1}
    void validate() const;

    MLP zero_member() const;
    bool contains(const MLP& net, double slack = 1e-9) const;
};

// Budget for the per-draw supremum search over the weight ball. The pool is a
// shared set of random class members whose term vectors are precomputed once;
// restarts/steps run projected gradient ascent per draw, random_samples are
// fresh per-draw candidates.
struct SupBudget {
    int restarts = 10;
    int ascent_steps = 200;
    int random_samples = 500;
    int pool_samples = 0;
};

struct RadEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t draws = 0;
    std::vector<double> per_draw;
    std::vector<std::uint64_t> sigma_hash;
};

RadEstimate estimate_rc(const FunctionClassSpec& cls, const Dataset& data, std::size_t draws,
                        const SupBudget& budget, std::uint64_t seed, int threads = 1);

// Like estimate_rc with each y_i f(x_i) replaced by the inner minimum over the
// attack ball; grid-oracle inner solves for d <= 3, PGD otherwise. Lower
// estimate of the true supremum-based quantity.
RadEstimate estimate_arc(const FunctionClassSpec& cls, const Dataset& data,
                         const AttackSpec& attack, std::size_t draws, const SupBudget& budget,
                         std::uint64_t seed, int threads = 1);

// Multi-class ramp-loss variant: summand max over the ball of
// phi_gamma(margin), i.e. phi_gamma of the pairwise inner minimum.
RadEstimate estimate_arc_multiclass(const FunctionClassSpec& cls, const Dataset& data,
                                    const AttackSpec& attack, double gamma, std::size_t draws,
                                    const SupBudget& budget, std::uint64_t seed,
                                    int threads = 1);

struct GenBoundInput {
    double empirical_risk = 0.0;
    double rc_term = 0.0;
    double loss_range_c = 1.0;
    double delta = 0.05;
    std::size_t n = 1;
};

// R_n + 2 R_S + 3 C sqrt(log(2/delta) / (2n)), natural log.
double gen_bound_rhs(const GenBoundInput& in);

// Per-draw trace: draw_index, sigma_pattern_hash, sup_value.
void write_estimate_trace_csv(const RadEstimate& est, const std::string& path);

}  // namespace arc

#endif
