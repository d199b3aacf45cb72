#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "arc/rademacher.hpp"
#include "arc/rng.hpp"

using namespace arc;

namespace {

FunctionClassSpec linear_1d(double m) {
    FunctionClassSpec cls;
    cls.dims = {1, 1};
    cls.budgets = {m};
    cls.norm_kind = NormKind::Frobenius;
    cls.activation = ActivationSpec::identity();
    return cls;
}

Dataset data_1d(std::vector<double> xs, std::vector<int> labels) {
    Dataset d;
    std::size_t n = xs.size();
    d.x = Matrix(n, 1, std::move(xs));
    d.labels = std::move(labels);
    return d;
}

SupBudget small_budget() {
    SupBudget b;
    b.restarts = 2;
    b.ascent_steps = 25;
    b.random_samples = 16;
    b.pool_samples = 16;
    return b;
}

bool near_any(double v, std::initializer_list<double> targets, double tol = 1e-9) {
    for (double t : targets)
        if (std::fabs(v - t) <= tol) return true;
    return false;
}

}  // namespace

TEST_CASE("rc of the 1-D unit-budget class on a single sample is exactly 1") {
    // sup_{|w|<=1} sigma w = 1 for either sign
    RadEstimate est = estimate_rc(linear_1d(1.0), data_1d({1.0}, {1}), 64, small_budget(), 42);
    CHECK(est.mean == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(est.stderr_ == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("zero budgets collapse the class to the zero function") {
    RadEstimate est = estimate_rc(linear_1d(0.0), data_1d({1.0, -0.5}, {1, 0}), 32,
                                  small_budget(), 7);
    CHECK(est.mean == 0.0);
    CHECK(est.stderr_ == 0.0);
}

TEST_CASE("binary estimators reject multi-class labels and dim mismatches") {
    CHECK_THROWS_AS(estimate_rc(linear_1d(1.0), data_1d({1.0}, {2}), 4, small_budget(), 0),
                    InvalidInput);
    Dataset wide;
    wide.x = Matrix(1, 2, {1.0, 0.5});
    wide.labels = {1};
    CHECK_THROWS_AS(estimate_rc(linear_1d(1.0), wide, 4, small_budget(), 0), InvalidInput);
}

TEST_CASE("rc with two identical samples matches the sign enumeration") {
    // per-draw sup = |sigma_1 + sigma_2| / 2; enumeration mean = 0.5
    RadEstimate est =
        estimate_rc(linear_1d(1.0), data_1d({1.0, 1.0}, {1, 1}), 1500, small_budget(), 3);
    for (double v : est.per_draw) CHECK(near_any(v, {0.0, 1.0}));
    CHECK(std::fabs(est.mean - 0.5) < 0.04);
    CHECK(est.stderr_ > 0.0);
}

TEST_CASE("arc of the 1-D class: eps = 0.5 example") {
    // sigma=+1 -> 0.5 (w=1), sigma=-1 -> 1.5 (w=-1); mean 1.0
    AttackSpec attack;
    attack.p = kInf;
    attack.epsilon = 0.5;
    RadEstimate est = estimate_arc(linear_1d(1.0), data_1d({1.0}, {1}), attack, 1200,
                                   small_budget(), 11);
    for (double v : est.per_draw) CHECK(near_any(v, {0.5, 1.5}));
    CHECK(std::fabs(est.mean - 1.0) < 0.06);
}

TEST_CASE("arc of the 1-D class: ball covering the data, eps = 2") {
    // sigma=+1 -> 0 (w=0), sigma=-1 -> 3 (w=-1); mean 1.5
    AttackSpec attack;
    attack.p = kInf;
    attack.epsilon = 2.0;
    RadEstimate est = estimate_arc(linear_1d(1.0), data_1d({1.0}, {1}), attack, 1200,
                                   small_budget(), 13);
    for (double v : est.per_draw) CHECK(near_any(v, {0.0, 3.0}));
    CHECK(std::fabs(est.mean - 1.5) < 0.17);
}

TEST_CASE("eps = 0 makes arc and rc bit-identical on paired seeds") {
    FunctionClassSpec cls;
    cls.dims = {2, 3, 1};
    cls.budgets = {1.0, 1.0};
    cls.norm_kind = NormKind::Frobenius;
    cls.activation = ActivationSpec::relu();
    Dataset data;
    data.x = Matrix(4, 2, {0.5, -0.2, 0.3, 0.8, -0.6, 0.1, 0.0, -0.9});
    data.labels = {1, 0, 1, 0};

    AttackSpec attack;
    attack.p = kInf;
    attack.epsilon = 0.0;
    SupBudget budget = small_budget();
    RadEstimate rc = estimate_rc(cls, data, 40, budget, 99);
    RadEstimate arc0 = estimate_arc(cls, data, attack, 40, budget, 99);
    REQUIRE(rc.per_draw.size() == arc0.per_draw.size());
    for (std::size_t i = 0; i < rc.per_draw.size(); ++i)
        CHECK(rc.per_draw[i] == arc0.per_draw[i]);
    CHECK(rc.mean == arc0.mean);
    CHECK(rc.stderr_ == arc0.stderr_);
}

TEST_CASE("same seed gives bit-identical results, independent of threads") {
    FunctionClassSpec cls;
    cls.dims = {2, 2, 1};
    cls.budgets = {1.0, 1.5};
    cls.norm_kind = NormKind::GroupOneInf;
    cls.activation = ActivationSpec::relu();
    Dataset data;
    data.x = Matrix(3, 2, {0.5, -0.2, 0.3, 0.8, -0.6, 0.1});
    data.labels = {1, 0, 1};
    AttackSpec attack;
    attack.p = 2.0;
    attack.epsilon = 0.25;

    RadEstimate a = estimate_arc(cls, data, attack, 16, small_budget(), 5, 1);
    RadEstimate b = estimate_arc(cls, data, attack, 16, small_budget(), 5, 1);
    RadEstimate c = estimate_arc(cls, data, attack, 16, small_budget(), 5, 3);
    for (std::size_t i = 0; i < a.per_draw.size(); ++i) {
        CHECK(a.per_draw[i] == b.per_draw[i]);
        CHECK(a.per_draw[i] == c.per_draw[i]);
    }
    CHECK(a.mean == c.mean);
}

TEST_CASE("arc dominates rc within Monte-Carlo slack once eps > 0") {
    Rng rng(17, 0);
    SupBudget budget;
    budget.restarts = 1;
    budget.ascent_steps = 15;
    budget.random_samples = 8;
    budget.pool_samples = 16;
    for (int t = 0; t < 4; ++t) {
        FunctionClassSpec cls;
        std::size_t d = 1 + rng.below(2);
        cls.dims = {d, 1 + rng.below(3), 1};
        cls.budgets = {0.5 + rng.uniform(), 0.5 + rng.uniform()};
        cls.norm_kind = NormKind::Frobenius;
        cls.activation = ActivationSpec::relu();
        Dataset data;
        std::size_t n = 3 + rng.below(2);
        data.x = Matrix(n, d);
        for (double& e : data.x.data) e = rng.uniform(-1.0, 1.0);
        data.labels.resize(n);
        for (auto& l : data.labels) l = static_cast<int>(rng.below(2));

        AttackSpec attack;
        attack.p = kInf;
        attack.epsilon = 0.3;
        attack.grid_resolution = 21;  // keeps the d=2 inner solves cheap
        std::uint64_t seed = 100 + t;
        RadEstimate rc = estimate_rc(cls, data, 120, budget, seed);
        RadEstimate arc = estimate_arc(cls, data, attack, 120, budget, seed);
        CHECK(arc.mean >= rc.mean - 3.0 * (rc.stderr_ + arc.stderr_) - 1e-9);
    }
}

TEST_CASE("arc falls back to PGD inner solves above d = 3") {
    FunctionClassSpec cls;
    cls.dims = {4, 1};
    cls.budgets = {1.0};
    cls.norm_kind = NormKind::Frobenius;
    cls.activation = ActivationSpec::identity();
    Dataset data;
    data.x = Matrix(3, 4, {0.5, -0.2, 0.3, 0.1, -0.4, 0.2, 0.0, 0.6, 0.1, 0.1, -0.5, 0.3});
    data.labels = {1, 0, 1};
    AttackSpec attack;
    attack.p = kInf;
    attack.epsilon = 0.2;
    attack.steps = 10;
    attack.restarts = 2;
    SupBudget budget = small_budget();
    RadEstimate arc = estimate_arc(cls, data, attack, 80, budget, 44);
    RadEstimate rc = estimate_rc(cls, data, 80, budget, 44);
    CHECK(std::isfinite(arc.mean));
    CHECK(arc.mean >= rc.mean - 3.0 * (rc.stderr_ + arc.stderr_) - 1e-9);
    // exact for the linear class: per-draw sup = ||sum sigma_i y_i x_i||_2/n + eps * ...,
    // so the estimate must sit above the rc value as eps grows
    RadEstimate arc2 = estimate_arc(cls, data, attack, 80, budget, 45);
    CHECK(std::isfinite(arc2.mean));
}

TEST_CASE("multiclass estimator with zero budgets matches the sign enumeration") {
    FunctionClassSpec cls;
    cls.dims = {1, 2};
    cls.budgets = {0.0};
    cls.norm_kind = NormKind::Frobenius;
    cls.activation = ActivationSpec::identity();
    Dataset data = data_1d({0.5, -0.5}, {0, 1});
    AttackSpec attack;
    attack.p = kInf;
    attack.epsilon = 0.2;
    RadEstimate est =
        estimate_arc_multiclass(cls, data, attack, 1.0, 1000, small_budget(), 21);
    // singleton class: per-draw value is (sigma_1 + sigma_2)/2 in {-1, 0, 1};
    // full enumeration gives mean 0
    for (double v : est.per_draw) CHECK(near_any(v, {-1.0, 0.0, 1.0}));
    CHECK(std::fabs(est.mean) < 4.0 * est.stderr_ + 0.02);
}

TEST_CASE("multiclass estimator matches a brute-force weight-grid oracle") {
    FunctionClassSpec cls;
    cls.dims = {1, 2};
    cls.budgets = {1.0};
    cls.norm_kind = NormKind::Frobenius;
    cls.activation = ActivationSpec::identity();
    Dataset data = data_1d({0.6, -0.4}, {0, 1});
    const double gamma = 0.7;
    AttackSpec attack;
    attack.p = kInf;
    attack.epsilon = 0.3;

    // oracle: enumerate sigma, sup over a 201x201 grid of (w0, w1) in the
    // Frobenius disc; the pairwise inner minimum is exact for linear heads
    auto term = [&](double w0, double w1, std::size_t i) {
        double u = data.labels[i] == 0 ? w0 - w1 : w1 - w0;
        double t = u * data.x.at(i, 0) - attack.epsilon * std::fabs(u);
        return ramp_loss(t, gamma);
    };
    double oracle_mean = 0.0;
    for (int s1 : {-1, 1}) {
        for (int s2 : {-1, 1}) {
            double best = -kInf;
            for (int a = -100; a <= 100; ++a) {
                for (int b = -100; b <= 100; ++b) {
                    double w0 = a / 100.0, w1 = b / 100.0;
                    if (w0 * w0 + w1 * w1 > 1.0 + 1e-12) continue;
                    best = std::max(best, (s1 * term(w0, w1, 0) + s2 * term(w0, w1, 1)) / 2.0);
                }
            }
            oracle_mean += best / 4.0;
        }
    }

    SupBudget budget = small_budget();
    budget.ascent_steps = 40;
    RadEstimate est = estimate_arc_multiclass(cls, data, attack, gamma, 800, budget, 31);
    CHECK(std::fabs(est.mean - oracle_mean) <= 3.0 * est.stderr_ + 0.03);
}

TEST_CASE("gamma scaling: doubling gamma halves the centered multiclass estimate") {
    FunctionClassSpec cls;
    cls.dims = {1, 2};
    cls.budgets = {1.0};
    cls.norm_kind = NormKind::Frobenius;
    cls.activation = ActivationSpec::identity();
    Dataset data = data_1d({0.8, 0.8}, {0, 1});
    AttackSpec attack;
    attack.p = kInf;
    attack.epsilon = 0.2;
    SupBudget budget = small_budget();

    // both gammas sit above max |t|, so the ramp never saturates at 0 and the
    // centered estimates scale exactly as 1/gamma
    auto run = [&](double gamma) {
        return estimate_arc_multiclass(cls, data, attack, gamma, 400, budget, 77);
    };
    RadEstimate v10 = run(10.0);
    RadEstimate v20 = run(20.0);
    RadEstimate base = run(1e9);  // isolates the Sigma sigma_i / n part
    double c10 = v10.mean - base.mean;
    double c20 = v20.mean - base.mean;
    REQUIRE(c20 > 1e-6);
    CHECK(c10 / c20 == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("ramp composition contracts against the doubled-budget binary class") {
    // for the depth-1 pair class, [f]_y - [f]_k = u x with |u| <= sqrt(2) M;
    // the centered ramp-composed estimate stays below (1/gamma) times the raw
    // binary estimate on that class (Talagrand direction, paired seeds)
    FunctionClassSpec cls;
    cls.dims = {1, 2};
    cls.budgets = {1.0};
    cls.norm_kind = NormKind::Frobenius;
    cls.activation = ActivationSpec::identity();
    Dataset data = data_1d({0.7, -0.5, 0.3}, {0, 1, 0});
    AttackSpec attack;
    attack.p = kInf;
    attack.epsilon = 0.25;
    const double gamma = 0.8;
    SupBudget budget = small_budget();

    RadEstimate composed = estimate_arc_multiclass(cls, data, attack, gamma, 300, budget, 91);
    RadEstimate base = estimate_arc_multiclass(cls, data, attack, 1e9, 300, budget, 91);
    double centered = composed.mean - base.mean;

    RadEstimate raw =
        estimate_arc(linear_1d(std::sqrt(2.0)), data, attack, 300, budget, 91);
    CHECK(centered <= raw.mean / gamma + 3.0 * (composed.stderr_ + raw.stderr_) + 0.02);
}

TEST_CASE("gen_bound_rhs values") {
    GenBoundInput in;
    in.empirical_risk = 0.1;
    in.rc_term = 0.2;
    in.loss_range_c = 1.0;
    in.delta = 0.05;
    in.n = 100;
    double expected = 0.1 + 0.4 + 3.0 * std::sqrt(std::log(40.0) / 200.0);
    CHECK(gen_bound_rhs(in) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(gen_bound_rhs(in) == doctest::Approx(0.90743).epsilon(1e-4));

    GenBoundInput tail;
    tail.empirical_risk = 0.0;
    tail.rc_term = 0.0;
    tail.loss_range_c = 2.0;
    tail.delta = 0.999999;
    tail.n = 50;
    CHECK(gen_bound_rhs(tail) ==
          doctest::Approx(6.0 * std::sqrt(std::log(2.0 / 0.999999) / 100.0)).epsilon(1e-9));

    GenBoundInput big;
    big.empirical_risk = 0.25;
    big.rc_term = 0.1;
    big.loss_range_c = 1.0;
    big.delta = 0.05;
    big.n = 4000000000ULL;
    CHECK(gen_bound_rhs(big) == doctest::Approx(0.45).epsilon(1e-4));

    GenBoundInput bad = in;
    bad.delta = 1.5;
    CHECK_THROWS_AS(gen_bound_rhs(bad), InvalidInput);
}

TEST_CASE("per-draw trace CSV") {
    RadEstimate est = estimate_rc(linear_1d(1.0), data_1d({1.0}, {1}), 8, small_budget(), 1);
    auto path = (std::filesystem::temp_directory_path() / "arc_trace_test.csv").string();
    write_estimate_trace_csv(est, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "draw_index,sigma_pattern_hash,sup_value");
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 8);
    std::filesystem::remove(path);
}
