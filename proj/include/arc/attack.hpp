#ifndef ARC_ATTACK_HPP
#define ARC_ATTACK_HPP

#include <cstdint>
#include <string>

#include "arc/network.hpp"
#include "arc/rng.hpp"

namespace arc {

enum class AttackSolver { ExactLinear, PGD, FGSM, GridOracle };

struct AttackSpec {
    double p = kInf;       // ball exponent, >= 1 or inf
    double epsilon = 0.0;  // ball radius
    int steps = 20;
    double step_size = 0.0;  // 0 -> epsilon / 8
    int restarts = 5;        // start at x plus (restarts - 1) uniform-in-ball points
    AttackSolver solver = AttackSolver::PGD;
    int grid_resolution = 101;
    std::uint64_t seed = 0;  // keys the restart sampler

    double effective_step() const { return step_size > 0.0 ? step_size : epsilon / 8.0; }
    void validate() const;
};

struct AttackResult {
    Vector x_star;
    double value = 0.0;
    const char* solver_used = "";
};

// The scalar objective the inner problem minimizes over the ball:
// y * f(x') for a 1-dim head, or [f(x')]_y - [f(x')]_k for a class pair.
struct AttackObjective {
    bool binary = true;
    double y_sign = 1.0;   // binary case
    std::size_t y = 0;     // class-pair case
    std::size_t k = 1;

    static AttackObjective binary_margin(double y_sign) { return {true, y_sign, 0, 0}; }
    static AttackObjective class_pair(std::size_t y, std::size_t k) {
        return {false, 1.0, y, k};
    }

    double value(const MLP& net, const Vector& x) const;
    Vector gout(std::size_t out_dim) const;  // objective = <gout, f(x)>
    Vector gradient(const MLP& net, const Vector& x) const;
};

// Exact minimizer of y * w^T x' over the lp ball: value y w^T x - eps ||w||_{p*}.
AttackResult inner_min_linear(const Vector& w, const Vector& x, double y, double p, double eps);

// Projected gradient descent with restarts; supports p in {2, inf} and tracks
// the best iterate, so the result never exceeds the objective at x.
AttackResult inner_min_pgd(const MLP& net, const Vector& x, const AttackObjective& obj,
                           const AttackSpec& spec);

// Deterministic grid sweep over the ball's bounding box (d <= 3).
AttackResult inner_min_grid(const MLP& net, const Vector& x, const AttackObjective& obj,
                            double p, double eps, int resolution);

// Single gradient step of size eps; identical to PGD with steps=1, step_size=eps.
AttackResult fgsm_point(const MLP& net, const Vector& x, const AttackObjective& obj, double p,
                        double eps);

// Dispatch on spec.solver (ExactLinear requires a linear single-layer net).
AttackResult inner_min(const MLP& net, const Vector& x, const AttackObjective& obj,
                       const AttackSpec& spec);

// Loss-ascent adversarial example for training: PGD that maximizes the
// per-sample loss; returns the perturbed input. eps = 0 returns x unchanged
// without consuming randomness.
Vector adversarial_perturb(const MLP& net, const Vector& x, int label, LossKind loss,
                           double gamma, const AttackSpec& spec);

// Uniform sample in the lp ball of radius eps around the origin (p in {2, inf}).
Vector sample_in_ball(Rng& rng, std::size_t dim, double p, double eps);

}  // namespace arc

#endif
