#ifndef ARC_TRAIN_HPP
#define ARC_TRAIN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "arc/attack.hpp"
#include "arc/dataset.hpp"
#include "arc/network.hpp"

namespace arc {

struct LrPoint {
    std::size_t epoch_start = 0;
    double lr = 0.1;
};

struct TrainConfig {
    std::size_t epochs = 200;
    std::vector<LrPoint> lr_schedule = {{0, 0.1}, {100, 0.01}, {150, 0.001}};
    double weight_decay = 0.0;
    std::size_t batch_size = 32;
    bool adversarial = false;
    AttackSpec attack;  // train-time attack; evaluation raises steps to eval_steps
    int eval_steps = 40;
    std::uint64_t seed = 0;
    LossKind loss = LossKind::Logistic;
    double gamma = 1.0;  // ramp loss only
    double margin_percentile_q = 5.0;

    void validate() const;
    double lr_at(std::size_t epoch) const;
    AttackSpec eval_attack() const;
};

struct EpochRow {
    std::size_t epoch = 0;
    double train_err = 0.0;
    double test_err = 0.0;
    double robust_train_err = 0.0;
    double robust_test_err = 0.0;
    double fro_product = 0.0;
    double oneinf_product = 0.0;
    double margin_p5 = 0.0;
};

struct TrainResult {
    MLP net;
    std::vector<EpochRow> trace;  // filled only when tracing
};

// Mini-batch SGD with decoupled weight decay, deterministic given the seed.
// The adversarial branch perturbs each batch input with the configured PGD
// attack before the gradient step. Tracing needs a test split.
MLP train(const MLP& net0, const Dataset& data, const TrainConfig& cfg);
TrainResult train_traced(const MLP& net0, const Dataset& data, const Dataset* test,
                         const TrainConfig& cfg);

struct MarginStats {
    double percentile = 5.0;
    bool adversarial = false;  // margins of PGD adversarial examples
};

// Nearest-rank percentile of the per-sample margins; adversarial mode attacks
// each sample first and never reports more than the clean margin.
double margin_percentile(const MLP& net, const Dataset& data, const MarginStats& stats,
                         const AttackSpec& attack);

// Per-sample margin, optionally after a PGD attack (multi-class pairwise or
// binary depending on the head).
double sample_margin(const MLP& net, const Vector& x, int label, const AttackSpec* attack);

double clean_error(const MLP& net, const Dataset& data);
double robust_error(const MLP& net, const Dataset& data, const AttackSpec& attack);

struct GapTable {
    // e_<training>_<evaluation>; gap = test error - train error
    double e_std_std = 0.0;
    double e_std_rob = 0.0;
    double e_adv_std = 0.0;
    double e_adv_rob = 0.0;
    double train_std_std = 0.0, train_std_rob = 0.0, train_adv_std = 0.0, train_adv_rob = 0.0;
    double test_std_std = 0.0, test_std_rob = 0.0, test_adv_std = 0.0, test_adv_rob = 0.0;
    bool degenerate_std_rob = false;  // robust train error ~ 100%
};

GapTable gap_table(const MLP& std_net, const MLP& adv_net, const Dataset& train_data,
                   const Dataset& test_data, const AttackSpec& eval_attack);

void write_trace_csv(const std::vector<EpochRow>& trace, const std::string& path);

// Deterministic Gaussian init scaled to 1/sqrt(fan_in).
MLP init_mlp(const std::vector<std::size_t>& dims, const ActivationSpec& act,
             std::uint64_t seed, double scale = 1.0);

}  // namespace arc

#endif
