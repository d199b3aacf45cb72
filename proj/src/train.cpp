#include "arc/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "arc/rng.hpp"

namespace arc {

void TrainConfig::validate() const {
    require(batch_size >= 1, "train: batch size must be >= 1");
    require(weight_decay >= 0.0, "train: weight decay must be >= 0");
    require(!lr_schedule.empty(), "train: empty lr schedule");
    for (const LrPoint& pt : lr_schedule) require(pt.lr >= 0.0, "train: lr must be >= 0");
}

double TrainConfig::lr_at(std::size_t epoch) const {
    double lr = lr_schedule.front().lr;
    for (const LrPoint& pt : lr_schedule)
        if (pt.epoch_start <= epoch) lr = pt.lr;
    return lr;
}

AttackSpec TrainConfig::eval_attack() const {
    AttackSpec a = attack;
    a.steps = eval_steps;
    return a;
}

namespace {

int training_label(const Dataset& data, std::size_t i, LossKind loss) {
    return loss == LossKind::Logistic ? data.signed_label(i) : data.labels[i];
}

void check_head(const MLP& net, const Dataset& data, LossKind loss) {
    if (loss == LossKind::Logistic) {
        require(net.output_dim() == 1, "train: logistic loss needs a 1-dim head");
    } else {
        require(net.output_dim() >= 2, "train: cross-entropy needs a K-dim head");
        require(data.num_classes() <= net.output_dim(), "train: more classes than outputs");
    }
}

}  // namespace

MLP train(const MLP& net0, const Dataset& data, const TrainConfig& cfg) {
    return train_traced(net0, data, nullptr, cfg).net;
}

TrainResult train_traced(const MLP& net0, const Dataset& data, const Dataset* test,
                         const TrainConfig& cfg) {
    cfg.validate();
    net0.validate();
    data.validate();
    require(net0.input_dim() == data.dim(), "train: net/data dimension mismatch");
    check_head(net0, data, cfg.loss);

    TrainResult out;
    out.net = net0;
    MLP& net = out.net;
    const std::size_t n = data.size();

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double lr = cfg.lr_at(epoch);

        Rng shuffle_rng = Rng::keyed(cfg.seed, 0x73687566ULL, epoch);
        for (std::size_t i = n; i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.below(i)]);

        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            std::size_t stop = std::min(n, start + cfg.batch_size);
            std::vector<Matrix> grad;
            for (const Matrix& w : net.weights) grad.emplace_back(w.rows, w.cols);
            double batch_loss = 0.0;
            for (std::size_t b = start; b < stop; ++b) {
                std::size_t i = order[b];
                int label = training_label(data, i, cfg.loss);
                Vector x = data.sample(i);
                if (cfg.adversarial && cfg.attack.epsilon > 0.0) {
                    AttackSpec a = cfg.attack;
                    a.seed = Rng::mix(cfg.seed ^ Rng::mix(epoch * 0x10001ULL + i));
                    x = adversarial_perturb(net, x, label, cfg.loss, cfg.gamma, a);
                }
                batch_loss += loss_value(net, x, label, cfg.loss, cfg.gamma);
                std::vector<Matrix> g = grad_weights(net, x, label, cfg.loss, cfg.gamma);
                for (std::size_t j = 0; j < grad.size(); ++j)
                    for (std::size_t t = 0; t < grad[j].data.size(); ++t)
                        grad[j].data[t] += g[j].data[t];
            }
            if (!std::isfinite(batch_loss))
                throw NoConvergence("train: loss diverged (non-finite) at epoch " +
                                    std::to_string(epoch));
            double inv = 1.0 / static_cast<double>(stop - start);
            for (std::size_t j = 0; j < net.weights.size(); ++j)
                for (std::size_t t = 0; t < net.weights[j].data.size(); ++t) {
                    double g = grad[j].data[t] * inv + cfg.weight_decay * net.weights[j].data[t];
                    net.weights[j].data[t] -= lr * g;
                }
        }

        if (test != nullptr) {
            EpochRow row;
            row.epoch = epoch;
            AttackSpec ev = cfg.eval_attack();
            row.train_err = clean_error(net, data);
            row.test_err = clean_error(net, *test);
            row.robust_train_err = robust_error(net, data, ev);
            row.robust_test_err = robust_error(net, *test, ev);
            double fro = 1.0, oneinf = 1.0;
            for (const Matrix& w : net.weights) {
                fro *= matrix_norm(w, NormKind::Frobenius);
                oneinf *= matrix_norm(w, NormKind::GroupOneInf);
            }
            row.fro_product = fro;
            row.oneinf_product = oneinf;
            MarginStats ms;
            ms.percentile = cfg.margin_percentile_q;
            ms.adversarial = cfg.adversarial;
            row.margin_p5 = margin_percentile(net, data, ms, ev);
            out.trace.push_back(row);
        }
    }
    return out;
}

double sample_margin(const MLP& net, const Vector& x, int label, const AttackSpec* attack) {
    if (net.output_dim() == 1) {
        double y = label == 0 ? -1.0 : 1.0;
        AttackObjective obj = AttackObjective::binary_margin(y);
        if (attack == nullptr || attack->epsilon == 0.0) return obj.value(net, x);
        return inner_min_pgd(net, x, obj, *attack).value;
    }
    auto y = static_cast<std::size_t>(label);
    if (attack == nullptr || attack->epsilon == 0.0) return margin(net, x, y);
    // attack every competing pair; evaluating the full margin at each
    // candidate keeps the result <= the clean margin
    double best = margin(net, x, y);
    for (std::size_t k = 0; k < net.output_dim(); ++k) {
        if (k == y) continue;
        AttackResult r = inner_min_pgd(net, x, AttackObjective::class_pair(y, k), *attack);
        best = std::min(best, margin_value(forward(net, r.x_star), y));
    }
    return best;
}

double margin_percentile(const MLP& net, const Dataset& data, const MarginStats& stats,
                         const AttackSpec& attack) {
    require(stats.percentile > 0.0 && stats.percentile < 100.0,
            "margin_percentile: percentile must be in (0, 100)");
    data.validate();
    const std::size_t n = data.size();
    std::vector<double> margins(n);
    for (std::size_t i = 0; i < n; ++i)
        margins[i] = sample_margin(net, data.sample(i), data.labels[i],
                                   stats.adversarial ? &attack : nullptr);
    std::sort(margins.begin(), margins.end());
    // nearest-rank: item ceil(q/100 * n) of the ascending sort, 1-based
    auto rank = static_cast<std::size_t>(
        std::ceil(stats.percentile / 100.0 * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    return margins[rank - 1];
}

double clean_error(const MLP& net, const Dataset& data) {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        double m = sample_margin(net, data.sample(i), data.labels[i], nullptr);
        if (!(m > 0.0)) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(data.size());
}

double robust_error(const MLP& net, const Dataset& data, const AttackSpec& attack) {
    if (attack.epsilon == 0.0) return clean_error(net, data);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        AttackSpec a = attack;
        a.seed = Rng::mix(attack.seed ^ Rng::mix(0x65766c00ULL + i));
        double m = sample_margin(net, data.sample(i), data.labels[i], &a);
        if (!(m > 0.0)) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(data.size());
}

GapTable gap_table(const MLP& std_net, const MLP& adv_net, const Dataset& train_data,
                   const Dataset& test_data, const AttackSpec& eval_attack) {
    GapTable g;
    g.train_std_std = clean_error(std_net, train_data);
    g.test_std_std = clean_error(std_net, test_data);
    g.train_std_rob = robust_error(std_net, train_data, eval_attack);
    g.test_std_rob = robust_error(std_net, test_data, eval_attack);
    g.train_adv_std = clean_error(adv_net, train_data);
    g.test_adv_std = clean_error(adv_net, test_data);
    g.train_adv_rob = robust_error(adv_net, train_data, eval_attack);
    g.test_adv_rob = robust_error(adv_net, test_data, eval_attack);
    g.e_std_std = g.test_std_std - g.train_std_std;
    g.e_std_rob = g.test_std_rob - g.train_std_rob;
    g.e_adv_std = g.test_adv_std - g.train_adv_std;
    g.e_adv_rob = g.test_adv_rob - g.train_adv_rob;
    g.degenerate_std_rob = g.train_std_rob >= 0.995;
    return g;
}

void write_trace_csv(const std::vector<EpochRow>& trace, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "trace: cannot open " + path);
    out << "epoch,train_err,test_err,robust_train_err,robust_test_err,"
           "fro_product,oneinf_product,margin_p5\n";
    char buf[40];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << "," << buf;
    };
    for (const EpochRow& r : trace) {
        out << r.epoch;
        put(r.train_err);
        put(r.test_err);
        put(r.robust_train_err);
        put(r.robust_test_err);
        put(r.fro_product);
        put(r.oneinf_product);
        put(r.margin_p5);
        out << "\n";
    }
}

MLP init_mlp(const std::vector<std::size_t>& dims, const ActivationSpec& act, std::uint64_t seed,
             double scale) {
    require(dims.size() >= 2, "init: dims must list h_0..h_l");
    MLP net;
    net.activation = act;
    for (std::size_t j = 0; j + 1 < dims.size(); ++j) {
        Matrix w(dims[j + 1], dims[j]);
        Rng rng = Rng::keyed(seed, 0x696e6974ULL, j);
        double s = scale / std::sqrt(static_cast<double>(dims[j]));
        for (double& e : w.data) e = s * rng.normal();
        net.weights.push_back(std::move(w));
    }
    return net;
}

}  // namespace arc
