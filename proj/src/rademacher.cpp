#include "arc/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

namespace arc {

std::size_t FunctionClassSpec::width() const {
    std::size_t w = 0;
    for (std::size_t h : dims) w = std::max(w, h);
    return w;
}

std::size_t FunctionClassSpec::param_count() const {
    std::size_t n = 0;
    for (std::size_t j = 0; j + 1 < dims.size(); ++j) n += dims[j] * dims[j + 1];
    return n;
}

double FunctionClassSpec::budget_product() const {
    double p = 1.0;
    for (double m : budgets) p *= m;
    return p;
}

double FunctionClassSpec::sum_hh() const {
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < dims.size(); ++j)
        s += static_cast<double>(dims[j]) * static_cast<double>(dims[j + 1]);
    return s;
}

void FunctionClassSpec::validate() const {
    require(dims.size() >= 2, "class: dims must list h_0..h_l with l >= 1");
    require(budgets.size() + 1 == dims.size(), "class: one budget per layer required");
    for (std::size_t h : dims) require(h >= 1, "class: zero-width layer");
    for (double m : budgets) require(m >= 0.0 && std::isfinite(m), "class: bad budget");
    require(norm_kind == NormKind::Frobenius || norm_kind == NormKind::GroupOneInf,
            "class: budgets must be Frobenius or (1,inf)");
}

MLP FunctionClassSpec::zero_member() const {
    MLP net;
    net.activation = activation;
    for (std::size_t j = 0; j + 1 < dims.size(); ++j)
        net.weights.emplace_back(dims[j + 1], dims[j]);
    return net;
}

bool FunctionClassSpec::contains(const MLP& net, double slack) const {
    if (net.weights.size() != budgets.size()) return false;
    for (std::size_t j = 0; j < budgets.size(); ++j)
        if (matrix_norm(net.weights[j], norm_kind) > budgets[j] * (1.0 + slack)) return false;
    return true;
}

double gen_bound_rhs(const GenBoundInput& in) {
    require(in.delta > 0.0 && in.delta < 1.0, "gen_bound_rhs: delta must be in (0,1)");
    require(in.loss_range_c > 0.0, "gen_bound_rhs: loss range must be positive");
    require(in.n >= 1, "gen_bound_rhs: n must be >= 1");
    double conf = 3.0 * in.loss_range_c *
                  std::sqrt(std::log(2.0 / in.delta) / (2.0 * static_cast<double>(in.n)));
    return in.empirical_risk + 2.0 * in.rc_term + conf;
}

namespace {

constexpr std::uint64_t kStreamSigma = 0x7369676dULL;
constexpr std::uint64_t kStreamPool = 0x706f6f6cULL;
constexpr std::uint64_t kStreamSample = 0x73616d70ULL;
constexpr std::uint64_t kStreamRestart = 0x72737472ULL;

// Per-sample summand of the Rademacher sum and its weight gradient. ARC
// variants evaluate the gradient at the inner minimizer (Danskin).
class TermOracle {
public:
    virtual ~TermOracle() = default;
    virtual double value(const MLP& net, std::size_t i, std::uint64_t noise_key) const = 0;
    // Returns the value and accumulates coef * d(term_i)/dW into acc.
    virtual double value_accum_grad(const MLP& net, std::size_t i, std::uint64_t noise_key,
                                    double coef, std::vector<Matrix>& acc) const = 0;
};

void accum(std::vector<Matrix>& acc, const std::vector<Matrix>& g, double coef) {
    for (std::size_t j = 0; j < acc.size(); ++j)
        for (std::size_t t = 0; t < acc[j].data.size(); ++t)
            acc[j].data[t] += coef * g[j].data[t];
}

// y_i f(x_i) for a 1-dim head; the eps = 0 path of the ARC oracle evaluates
// the same expression so paired seeds coincide bit-exactly.
class RcOracle : public TermOracle {
public:
    RcOracle(const Dataset& data) : data_(data) {}
    double value(const MLP& net, std::size_t i, std::uint64_t) const override {
        return AttackObjective::binary_margin(data_.signed_label(i)).value(net, data_.sample(i));
    }
    double value_accum_grad(const MLP& net, std::size_t i, std::uint64_t, double coef,
                            std::vector<Matrix>& acc) const override {
        double y = data_.signed_label(i);
        Vector x = data_.sample(i);
        Vector s = forward(net, x);
        BackpropResult bp = backprop(net, x, {1.0});
        accum(acc, bp.weight_grads, coef * y);
        return y * s[0];
    }

private:
    const Dataset& data_;
};

class ArcOracle : public TermOracle {
public:
    ArcOracle(const Dataset& data, const AttackSpec& attack) : data_(data), attack_(attack) {
        // grid oracle for low dimension, PGD otherwise
        attack_.solver =
            data.dim() <= 3 ? AttackSolver::GridOracle : AttackSolver::PGD;
    }
    double value(const MLP& net, std::size_t i, std::uint64_t noise_key) const override {
        return solve(net, i, noise_key).value;
    }
    double value_accum_grad(const MLP& net, std::size_t i, std::uint64_t noise_key, double coef,
                            std::vector<Matrix>& acc) const override {
        AttackResult r = solve(net, i, noise_key);
        double y = data_.signed_label(i);
        BackpropResult bp = backprop(net, r.x_star, {1.0});
        accum(acc, bp.weight_grads, coef * y);
        return r.value;
    }

private:
    AttackResult solve(const MLP& net, std::size_t i, std::uint64_t noise_key) const {
        AttackSpec spec = attack_;
        spec.seed = Rng::mix(attack_.seed ^ Rng::mix(noise_key ^ i));
        return inner_min(net, data_.sample(i),
                         AttackObjective::binary_margin(data_.signed_label(i)), spec);
    }

    const Dataset& data_;
    AttackSpec attack_;
};

// max over the ball of phi_gamma(margin): phi_gamma of the pairwise minimum
// over competing classes.
class MulticlassOracle : public TermOracle {
public:
    MulticlassOracle(const Dataset& data, const AttackSpec& attack, double gamma)
        : data_(data), attack_(attack), gamma_(gamma) {
        attack_.solver =
            data.dim() <= 3 ? AttackSolver::GridOracle : AttackSolver::PGD;
    }

    double value(const MLP& net, std::size_t i, std::uint64_t noise_key) const override {
        std::size_t k;
        AttackResult r = worst_pair(net, i, noise_key, k);
        return ramp_loss(r.value, gamma_);
    }
    double value_accum_grad(const MLP& net, std::size_t i, std::uint64_t noise_key, double coef,
                            std::vector<Matrix>& acc) const override {
        std::size_t k;
        AttackResult r = worst_pair(net, i, noise_key, k);
        double t = r.value;
        if (t > 0.0 && t < gamma_) {
            auto y = static_cast<std::size_t>(data_.labels[i]);
            Vector gout(net.output_dim(), 0.0);
            gout[y] = -1.0 / gamma_;
            gout[k] = 1.0 / gamma_;
            BackpropResult bp = backprop(net, r.x_star, gout);
            accum(acc, bp.weight_grads, coef);
        }
        return ramp_loss(t, gamma_);
    }

private:
    AttackResult worst_pair(const MLP& net, std::size_t i, std::uint64_t noise_key,
                            std::size_t& worst_k) const {
        auto y = static_cast<std::size_t>(data_.labels[i]);
        const std::size_t k_out = net.output_dim();
        AttackResult best;
        bool first = true;
        for (std::size_t k = 0; k < k_out; ++k) {
            if (k == y) continue;
            AttackSpec spec = attack_;
            spec.seed = Rng::mix(attack_.seed ^ Rng::mix(noise_key ^ (i * 131 + k)));
            AttackResult r =
                inner_min(net, data_.sample(i), AttackObjective::class_pair(y, k), spec);
            if (first || r.value < best.value) {
                best = r;
                worst_k = k;
                first = false;
            }
        }
        return best;
    }

    const Dataset& data_;
    AttackSpec attack_;
    double gamma_;
};

MLP random_member(const FunctionClassSpec& cls, Rng& rng, bool boundary) {
    MLP net = cls.zero_member();
    for (std::size_t j = 0; j < net.weights.size(); ++j) {
        Matrix& w = net.weights[j];
        for (double& e : w.data) e = rng.normal();
        double radius = cls.budgets[j];
        if (!boundary)
            radius *= std::pow(rng.uniform(), 1.0 / static_cast<double>(w.data.size()));
        double n = matrix_norm(w, cls.norm_kind);
        if (n == 0.0 || radius == 0.0) {
            for (double& e : w.data) e = 0.0;
            continue;
        }
        if (cls.norm_kind == NormKind::Frobenius) {
            for (double& e : w.data) e *= radius / n;
        } else {
            // scale every row to 1-norm radius: puts the member on the (1,inf) boundary
            for (std::size_t r = 0; r < w.rows; ++r) {
                double rn = 0.0;
                for (std::size_t c = 0; c < w.cols; ++c) rn += std::fabs(w.at(r, c));
                if (rn == 0.0) continue;
                for (std::size_t c = 0; c < w.cols; ++c) w.at(r, c) *= radius / rn;
            }
        }
    }
    return net;
}

void project_member(MLP& net, const FunctionClassSpec& cls) {
    for (std::size_t j = 0; j < net.weights.size(); ++j)
        net.weights[j] = project_norm_ball(net.weights[j], cls.norm_kind, cls.budgets[j]);
}

// Scale every layer out to its budget boundary; valid sup candidate whenever
// the summand is positively homogeneous in each layer (binary RC/ARC).
bool boundary_scaled(const FunctionClassSpec& cls, const MLP& net, MLP& out) {
    out = net;
    for (std::size_t j = 0; j < net.weights.size(); ++j) {
        double n = matrix_norm(net.weights[j], cls.norm_kind);
        if (n == 0.0 || cls.budgets[j] == 0.0) return false;
        double s = cls.budgets[j] / n;
        for (double& e : out.weights[j].data) e *= s;
    }
    return true;
}

struct Engine {
    const FunctionClassSpec& cls;
    const Dataset& data;
    const TermOracle& oracle;
    SupBudget budget;
    std::uint64_t seed;
    bool polish;  // boundary rescale of finished candidates

    std::vector<MLP> pool;
    std::vector<std::vector<double>> pool_terms;  // [candidate][sample]

    void build_pool() {
        pool.push_back(cls.zero_member());
        for (int c = 0; c < budget.pool_samples; ++c) {
            Rng rng = Rng::keyed(seed, kStreamPool, static_cast<std::uint64_t>(c));
            pool.push_back(random_member(cls, rng, true));
        }
        pool_terms.resize(pool.size());
        for (std::size_t c = 0; c < pool.size(); ++c) {
            pool_terms[c].resize(data.size());
            for (std::size_t i = 0; i < data.size(); ++i)
                pool_terms[c][i] = oracle.value(pool[c], i, Rng::mix(kStreamPool ^ c));
        }
    }

    double objective(const MLP& net, const std::vector<double>& sigma,
                     std::uint64_t noise_key) const {
        double s = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i)
            s += sigma[i] * oracle.value(net, i, noise_key);
        return s / static_cast<double>(data.size());
    }

    double objective_grad(const MLP& net, const std::vector<double>& sigma,
                          std::uint64_t noise_key, std::vector<Matrix>& grad) const {
        const double inv_n = 1.0 / static_cast<double>(data.size());
        for (Matrix& g : grad)
            std::fill(g.data.begin(), g.data.end(), 0.0);
        double s = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i)
            s += sigma[i] *
                 oracle.value_accum_grad(net, i, noise_key, sigma[i] * inv_n, grad);
        return s * inv_n;
    }

    double solve_draw(std::size_t draw, std::uint64_t& sigma_hash_out) const {
        Rng sig_rng = Rng::keyed(seed, kStreamSigma, draw);
        std::vector<double> sigma = sig_rng.signs(data.size());
        std::uint64_t h = 0x811c9dc5ULL;
        for (double s : sigma) h = Rng::mix(h ^ (s > 0 ? 0x9eULL : 0x17ULL));
        sigma_hash_out = h;

        const double inv_n = 1.0 / static_cast<double>(data.size());
        double best = -kInf;
        std::size_t best_pool = 0;
        for (std::size_t c = 0; c < pool.size(); ++c) {
            double v = 0.0;
            for (std::size_t i = 0; i < data.size(); ++i) v += sigma[i] * pool_terms[c][i];
            v *= inv_n;
            if (v > best) {
                best = v;
                best_pool = c;
            }
        }

        std::uint64_t noise_key = Rng::mix(seed ^ Rng::mix(draw));

        // fresh random candidates for this draw
        for (int s = 0; s < budget.random_samples; ++s) {
            Rng rng = Rng::keyed(seed, kStreamSample, draw, static_cast<std::uint64_t>(s));
            MLP cand = random_member(cls, rng, (s % 2) == 0);
            best = std::max(best, objective(cand, sigma, noise_key));
        }

        // projected gradient ascent over the weight ball
        std::vector<Matrix> grad;
        for (const Matrix& w : cls.zero_member().weights) grad.emplace_back(w.rows, w.cols);
        for (int r = 0; r < budget.restarts; ++r) {
            MLP net;
            if (r == 0 && pool.size() > 1) {
                net = pool[best_pool];
            } else {
                Rng rng = Rng::keyed(seed, kStreamRestart, draw, static_cast<std::uint64_t>(r));
                net = random_member(cls, rng, (r % 2) == 1);
            }
            for (int t = 0; t < budget.ascent_steps; ++t) {
                double v = objective_grad(net, sigma, noise_key, grad);
                best = std::max(best, v);
                double gn = 0.0;
                for (const Matrix& g : grad)
                    for (double e : g.data) gn += e * e;
                gn = std::sqrt(gn);
                if (gn == 0.0) break;
                double eta = 0.3 / (1.0 + 0.05 * static_cast<double>(t));
                for (std::size_t j = 0; j < net.weights.size(); ++j) {
                    double scale = eta * std::max(cls.budgets[j], 1e-12) / gn;
                    for (std::size_t e = 0; e < grad[j].data.size(); ++e)
                        net.weights[j].data[e] += scale * grad[j].data[e];
                }
                project_member(net, cls);
            }
            if (budget.ascent_steps > 0) {
                best = std::max(best, objective(net, sigma, noise_key));
                MLP scaled;
                if (polish && boundary_scaled(cls, net, scaled))
                    best = std::max(best, objective(scaled, sigma, noise_key));
            }
        }
        return best;
    }
};

RadEstimate run_estimate(const FunctionClassSpec& cls, const Dataset& data,
                         const TermOracle& oracle, std::size_t draws, const SupBudget& budget,
                         std::uint64_t seed, int threads, bool polish) {
    cls.validate();
    data.validate();
    require(draws >= 1, "estimate: draws must be >= 1");
    require(data.dim() == cls.input_dim(), "estimate: data/class dimension mismatch");

    Engine eng{cls, data, oracle, budget, seed, polish, {}, {}};
    eng.build_pool();

    RadEstimate est;
    est.draws = draws;
    est.per_draw.resize(draws);
    est.sigma_hash.resize(draws);

    auto run_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t d = lo; d < hi; ++d)
            est.per_draw[d] = eng.solve_draw(d, est.sigma_hash[d]);
    };
    if (threads <= 1 || draws < 2) {
        run_range(0, draws);
    } else {
        std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), draws);
        std::vector<std::thread> workers;
        std::size_t chunk = (draws + nt - 1) / nt;
        for (std::size_t t = 0; t < nt; ++t) {
            std::size_t lo = t * chunk;
            std::size_t hi = std::min(draws, lo + chunk);
            if (lo < hi) workers.emplace_back(run_range, lo, hi);
        }
        for (auto& w : workers) w.join();
    }

    double sum = 0.0;
    for (double v : est.per_draw) sum += v;
    est.mean = sum / static_cast<double>(draws);
    if (draws >= 2) {
        double ss = 0.0;
        for (double v : est.per_draw) ss += (v - est.mean) * (v - est.mean);
        est.stderr_ = std::sqrt(ss / (static_cast<double>(draws) * static_cast<double>(draws - 1)));
    }
    return est;
}

}  // namespace

namespace {

void require_binary_labels(const Dataset& data, const char* who) {
    for (int l : data.labels)
        require(l == 0 || l == 1, std::string(who) + ": binary labels {0,1} required");
}

}  // namespace

RadEstimate estimate_rc(const FunctionClassSpec& cls, const Dataset& data, std::size_t draws,
                        const SupBudget& budget, std::uint64_t seed, int threads) {
    require(cls.output_dim() == 1, "estimate_rc: binary form needs a 1-dim head");
    require_binary_labels(data, "estimate_rc");
    RcOracle oracle(data);
    return run_estimate(cls, data, oracle, draws, budget, seed, threads, true);
}

RadEstimate estimate_arc(const FunctionClassSpec& cls, const Dataset& data,
                         const AttackSpec& attack, std::size_t draws, const SupBudget& budget,
                         std::uint64_t seed, int threads) {
    require(cls.output_dim() == 1, "estimate_arc: binary form needs a 1-dim head");
    require_binary_labels(data, "estimate_arc");
    attack.validate();
    ArcOracle oracle(data, attack);
    return run_estimate(cls, data, oracle, draws, budget, seed, threads, true);
}

RadEstimate estimate_arc_multiclass(const FunctionClassSpec& cls, const Dataset& data,
                                    const AttackSpec& attack, double gamma, std::size_t draws,
                                    const SupBudget& budget, std::uint64_t seed, int threads) {
    require(cls.output_dim() >= 2, "estimate_arc_multiclass: needs K >= 2 outputs");
    require(gamma > 0.0, "estimate_arc_multiclass: gamma must be positive");
    attack.validate();
    for (int l : data.labels)
        require(static_cast<std::size_t>(l) < cls.output_dim(),
                "estimate_arc_multiclass: label exceeds head width");
    MulticlassOracle oracle(data, attack, gamma);
    return run_estimate(cls, data, oracle, draws, budget, seed, threads, false);
}

void write_estimate_trace_csv(const RadEstimate& est, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "trace: cannot open " + path);
    out << "draw_index,sigma_pattern_hash,sup_value\n";
    char buf[40];
    for (std::size_t d = 0; d < est.per_draw.size(); ++d) {
        std::snprintf(buf, sizeof buf, "%.17g", est.per_draw[d]);
        out << d << "," << est.sigma_hash[d] << "," << buf << "\n";
    }
}

}  // namespace arc
