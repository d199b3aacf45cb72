#include "arc/attack.hpp"

#include <algorithm>
#include <cmath>

namespace arc {

void AttackSpec::validate() const {
    require(epsilon >= 0.0, "attack: epsilon must be >= 0");
    require(p >= 1.0, "attack: p must be >= 1 or inf");
    if (solver == AttackSolver::PGD) require(steps >= 1, "attack: PGD needs steps >= 1");
    if (solver == AttackSolver::GridOracle)
        require(grid_resolution >= 2, "attack: grid resolution must be >= 2");
}

double AttackObjective::value(const MLP& net, const Vector& x) const {
    Vector s = forward(net, x);
    if (binary) {
        require(s.size() == 1, "attack objective: binary form needs a 1-dim head");
        return y_sign * s[0];
    }
    require(y < s.size() && k < s.size(), "attack objective: class index out of range");
    return s[y] - s[k];
}

Vector AttackObjective::gout(std::size_t out_dim) const {
    Vector g(out_dim, 0.0);
    if (binary) {
        g[0] = y_sign;
    } else {
        g[y] += 1.0;
        g[k] -= 1.0;
    }
    return g;
}

Vector AttackObjective::gradient(const MLP& net, const Vector& x) const {
    return backprop(net, x, gout(net.output_dim())).input_grad;
}

AttackResult inner_min_linear(const Vector& w, const Vector& x, double y, double p, double eps) {
    require(w.size() == x.size(), "inner_min_linear: dimension mismatch");
    require(eps >= 0.0 && p >= 1.0, "inner_min_linear: bad ball");
    double base = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) base += w[i] * x[i];
    base *= y;

    double pdual = dual_exponent(p);
    double wd = vector_p_norm(w, pdual);
    AttackResult res;
    res.solver_used = "exact_linear";
    res.value = base - eps * wd;
    res.x_star = x;
    if (eps == 0.0 || wd == 0.0) return res;

    if (is_inf_exponent(p)) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            double s = w[i] > 0 ? 1.0 : (w[i] < 0 ? -1.0 : 0.0);
            res.x_star[i] -= eps * y * s;
        }
    } else if (p == 2.0) {
        double n2 = vector_p_norm(w, 2.0);
        for (std::size_t i = 0; i < w.size(); ++i) res.x_star[i] -= eps * y * w[i] / n2;
    } else if (p == 1.0) {
        // mass concentrates on a largest-|w| coordinate; lowest index on ties
        std::size_t j = 0;
        for (std::size_t i = 1; i < w.size(); ++i)
            if (std::fabs(w[i]) > std::fabs(w[j])) j = i;
        res.x_star[j] -= eps * y * (w[j] > 0 ? 1.0 : -1.0);
    } else {
        // general p: |w_i|^{p*-1} profile, normalized to unit p-norm
        Vector dir(w.size(), 0.0);
        for (std::size_t i = 0; i < w.size(); ++i)
            dir[i] = std::copysign(std::pow(std::fabs(w[i]), pdual - 1.0), w[i]);
        double dn = vector_p_norm(dir, p);
        for (std::size_t i = 0; i < w.size(); ++i) res.x_star[i] -= eps * y * dir[i] / dn;
    }
    return res;
}

namespace {

// Allocation-free objective evaluation for the solver hot loops; arithmetic
// matches forward() exactly (same accumulation order).
class ObjectiveEval {
public:
    ObjectiveEval(const MLP& net, const AttackObjective& obj) : net_(net), obj_(obj) {
        for (const Matrix& w : net.weights) bufs_.emplace_back(w.rows, 0.0);
    }

    double operator()(const Vector& x) {
        const Vector* in = &x;
        for (std::size_t j = 0; j < net_.weights.size(); ++j) {
            const Matrix& w = net_.weights[j];
            Vector& out = bufs_[j];
            for (std::size_t i = 0; i < w.rows; ++i) {
                double s = 0.0;
                for (std::size_t c = 0; c < w.cols; ++c) s += w.at(i, c) * (*in)[c];
                out[i] = s;
            }
            if (j + 1 < net_.weights.size())
                for (double& v : out) v = net_.activation.apply(v);
            in = &out;
        }
        const Vector& s = bufs_.back();
        return obj_.binary ? obj_.y_sign * s[0] : s[obj_.y] - s[obj_.k];
    }

private:
    const MLP& net_;
    const AttackObjective& obj_;
    std::vector<Vector> bufs_;
};

void project_ball(Vector& z, const Vector& center, double p, double eps) {
    if (is_inf_exponent(p)) {
        for (std::size_t i = 0; i < z.size(); ++i)
            z[i] = std::clamp(z[i], center[i] - eps, center[i] + eps);
        return;
    }
    // p == 2
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        double t = z[i] - center[i];
        d += t * t;
    }
    d = std::sqrt(d);
    if (d <= eps) return;
    double s = eps / d;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = center[i] + s * (z[i] - center[i]);
}

AttackResult pgd_impl(const MLP& net, const Vector& x, const AttackObjective& obj,
                      const AttackSpec& spec, int steps, double step, int restarts,
                      const char* tag) {
    require(is_inf_exponent(spec.p) || spec.p == 2.0, "PGD supports p in {2, inf} only");
    require(x.size() == net.input_dim(), "PGD: dimension mismatch");

    AttackResult best;
    best.solver_used = tag;
    best.x_star = x;
    best.value = obj.value(net, x);
    if (spec.epsilon == 0.0) return best;

    ObjectiveEval eval(net, obj);
    for (int r = 0; r < std::max(1, restarts); ++r) {
        Vector z = x;
        if (r > 0) {
            Rng rng = Rng::keyed(spec.seed, 0x7067645fULL, static_cast<std::uint64_t>(r));
            Vector d = sample_in_ball(rng, x.size(), spec.p, spec.epsilon);
            for (std::size_t i = 0; i < z.size(); ++i) z[i] += d[i];
            double v0 = eval(z);
            if (v0 < best.value) {
                best.value = v0;
                best.x_star = z;
            }
        }
        for (int t = 0; t < steps; ++t) {
            Vector g = obj.gradient(net, z);
            if (is_inf_exponent(spec.p)) {
                for (std::size_t i = 0; i < z.size(); ++i) {
                    double s = g[i] > 0 ? 1.0 : (g[i] < 0 ? -1.0 : 0.0);
                    z[i] -= step * s;
                }
            } else {
                double n2 = vector_p_norm(g, 2.0);
                if (n2 == 0.0) break;
                for (std::size_t i = 0; i < z.size(); ++i) z[i] -= step * g[i] / n2;
            }
            project_ball(z, x, spec.p, spec.epsilon);
            double v = eval(z);
            if (v < best.value) {
                best.value = v;
                best.x_star = z;
            }
        }
    }
    return best;
}

}  // namespace

AttackResult inner_min_pgd(const MLP& net, const Vector& x, const AttackObjective& obj,
                           const AttackSpec& spec) {
    return pgd_impl(net, x, obj, spec, spec.steps, spec.effective_step(), spec.restarts, "pgd");
}

AttackResult fgsm_point(const MLP& net, const Vector& x, const AttackObjective& obj, double p,
                        double eps) {
    AttackSpec one;
    one.p = p;
    one.epsilon = eps;
    return pgd_impl(net, x, obj, one, 1, eps, 1, "fgsm");
}

AttackResult inner_min_grid(const MLP& net, const Vector& x, const AttackObjective& obj,
                            double p, double eps, int resolution) {
    const std::size_t d = x.size();
    require(d <= 3, "grid oracle: dimension must be <= 3");
    require(resolution >= 2, "grid oracle: resolution must be >= 2");
    require(eps >= 0.0, "grid oracle: negative epsilon");

    AttackResult best;
    best.solver_used = "grid";
    best.x_star = x;
    best.value = obj.value(net, x);
    if (eps == 0.0) return best;

    const double feas = eps * (1.0 + 1e-9);
    std::vector<int> idx(d, 0);
    Vector z(d, 0.0);
    Vector delta(d, 0.0);
    ObjectiveEval eval(net, obj);
    const int res = resolution;
    auto axis_value = [&](std::size_t i, int k) {
        return x[i] - eps + 2.0 * eps * static_cast<double>(k) / static_cast<double>(res - 1);
    };
    bool done = false;
    while (!done) {
        for (std::size_t i = 0; i < d; ++i) {
            z[i] = axis_value(i, idx[i]);
            delta[i] = z[i] - x[i];
        }
        if (vector_p_norm(delta, p) <= feas) {
            double v = eval(z);
            if (v < best.value) {
                best.value = v;
                best.x_star = z;
            }
        }
        // odometer increment, axis 0 fastest
        std::size_t i = 0;
        for (; i < d; ++i) {
            if (++idx[i] < res) break;
            idx[i] = 0;
        }
        done = (i == d);
    }
    return best;
}

AttackResult inner_min(const MLP& net, const Vector& x, const AttackObjective& obj,
                       const AttackSpec& spec) {
    switch (spec.solver) {
        case AttackSolver::ExactLinear: {
            require(net.depth() == 1 && net.output_dim() == 1 && obj.binary,
                    "exact solver needs a linear single-output net and binary objective");
            return inner_min_linear(net.weights[0].row(0), x, obj.y_sign, spec.p, spec.epsilon);
        }
        case AttackSolver::PGD: return inner_min_pgd(net, x, obj, spec);
        case AttackSolver::FGSM: return fgsm_point(net, x, obj, spec.p, spec.epsilon);
        case AttackSolver::GridOracle:
            return inner_min_grid(net, x, obj, spec.p, spec.epsilon, spec.grid_resolution);
    }
    throw InvalidInput("inner_min: unknown solver");
}

Vector adversarial_perturb(const MLP& net, const Vector& x, int label, LossKind loss,
                           double gamma, const AttackSpec& spec) {
    if (spec.epsilon == 0.0) return x;
    require(is_inf_exponent(spec.p) || spec.p == 2.0, "loss-ascent PGD supports p in {2, inf}");
    double step = spec.effective_step();

    Vector best = x;
    double best_loss = loss_value(net, x, label, loss, gamma);
    for (int r = 0; r < std::max(1, spec.restarts); ++r) {
        Vector z = x;
        if (r > 0) {
            Rng rng = Rng::keyed(spec.seed, 0x616476ULL, static_cast<std::uint64_t>(r));
            Vector d = sample_in_ball(rng, x.size(), spec.p, spec.epsilon);
            for (std::size_t i = 0; i < z.size(); ++i) z[i] += d[i];
            double v0 = loss_value(net, z, label, loss, gamma);
            if (v0 > best_loss) {
                best_loss = v0;
                best = z;
            }
        }
        for (int t = 0; t < spec.steps; ++t) {
            Vector g = loss_grad_input(net, z, label, loss, gamma);
            if (is_inf_exponent(spec.p)) {
                for (std::size_t i = 0; i < z.size(); ++i) {
                    double s = g[i] > 0 ? 1.0 : (g[i] < 0 ? -1.0 : 0.0);
                    z[i] += step * s;
                }
            } else {
                double n2 = vector_p_norm(g, 2.0);
                if (n2 == 0.0) break;
                for (std::size_t i = 0; i < z.size(); ++i) z[i] += step * g[i] / n2;
            }
            project_ball(z, x, spec.p, spec.epsilon);
            double v = loss_value(net, z, label, loss, gamma);
            if (v > best_loss) {
                best_loss = v;
                best = z;
            }
        }
    }
    return best;
}

Vector sample_in_ball(Rng& rng, std::size_t dim, double p, double eps) {
    Vector d(dim, 0.0);
    if (eps == 0.0) return d;
    if (is_inf_exponent(p)) {
        for (double& e : d) e = rng.uniform(-eps, eps);
        return d;
    }
    require(p == 2.0, "sample_in_ball: p must be 2 or inf");
    double n2 = 0.0;
    for (double& e : d) {
        e = rng.normal();
        n2 += e * e;
    }
    n2 = std::sqrt(n2);
    if (n2 == 0.0) return Vector(dim, 0.0);
    double radius = eps * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
    for (double& e : d) e *= radius / n2;
    return d;
}

}  // namespace arc
