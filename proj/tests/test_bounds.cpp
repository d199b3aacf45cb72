#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "arc/bounds.hpp"
#include "arc/covering.hpp"
#include "arc/rng.hpp"

using namespace arc;

namespace {

FunctionClassSpec make_class(std::vector<std::size_t> dims, std::vector<double> budgets,
                             NormKind kind = NormKind::Frobenius) {
    FunctionClassSpec cls;
    cls.dims = std::move(dims);
    cls.budgets = std::move(budgets);
    cls.norm_kind = kind;
    cls.activation = ActivationSpec::relu();
    return cls;
}

FunctionClassSpec random_class(Rng& rng, NormKind kind = NormKind::Frobenius) {
    std::size_t l = 1 + rng.below(3);
    std::vector<std::size_t> dims{1 + rng.below(3)};
    for (std::size_t j = 0; j + 1 < l; ++j) dims.push_back(1 + rng.below(4));
    dims.push_back(1);
    std::vector<double> budgets(l);
    for (double& m : budgets) m = 0.5 + 1.5 * rng.uniform();
    return make_class(dims, budgets, kind);
}

}  // namespace

TEST_CASE("thm1 closed-form values") {
    FunctionClassSpec cls = make_class({2, 3, 1}, {1.0, 1.0});
    double expected = 2.4 * 1.1 * std::sqrt(9.0 * std::log(6.0));
    CHECK(thm1_bound(cls, 1.0, 0.1, 2.0, 100) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(thm1_bound(cls, 1.0, 0.1, 2.0, 100) == doctest::Approx(10.6014).epsilon(1e-4));
    CHECK(thm1_bound(cls, 1.0, 0.1, kInf, 100) ==
          doctest::Approx(expected * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(thm1_bound(cls, 1.0, 0.1, kInf, 100) == doctest::Approx(14.9927).epsilon(1e-4));

    FunctionClassSpec dead = make_class({2, 3, 1}, {1.0, 0.0});
    CHECK(thm1_bound(dead, 1.0, 0.1, 2.0, 100) == 0.0);

    FunctionClassSpec oneinf = make_class({2, 3, 1}, {1.0, 1.0}, NormKind::GroupOneInf);
    CHECK_THROWS_AS(thm1_bound(oneinf, 1.0, 0.1, 2.0, 100), InvalidInput);
}

TEST_CASE("thm2 drops the dimension factor") {
    FunctionClassSpec cls = make_class({2, 3, 1}, {1.0, 1.0}, NormKind::GroupOneInf);
    double expected = 2.4 * 1.1 * std::sqrt(9.0 * std::log(6.0));
    CHECK(thm2_bound(cls, 1.0, 0.1, 2.0, 100) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(thm2_bound(cls, 1.0, 0.1, kInf, 100) == doctest::Approx(expected).epsilon(1e-12));

    // thm2 = thm1 / dimension factor, hence never above it
    Rng rng(3, 0);
    for (int t = 0; t < 200; ++t) {
        FunctionClassSpec fro = random_class(rng);
        FunctionClassSpec oi = fro;
        oi.norm_kind = NormKind::GroupOneInf;
        double b = rng.uniform();
        double eps = 0.5 * rng.uniform();
        double p = (t % 2 == 0) ? 2.0 : kInf;
        std::size_t n = 1 + rng.below(500);
        CHECK(thm2_bound(oi, b, eps, p, n) <= thm1_bound(fro, b, eps, p, n) * (1.0 + 1e-12));
    }
}

TEST_CASE("thm3 lower bound values") {
    FunctionClassSpec cls = make_class({1, 1}, {1.0});
    double c = 1.0 / std::sqrt(2.0);
    double expected = c / (1.0 + 2.0 * c) * 1.1 / 10.0;
    CHECK(thm3_lower_bound(cls, 1.0, 0.1, 2.0, 100) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(thm3_lower_bound(cls, 1.0, 0.1, 2.0, 100) == doctest::Approx(0.0322183).epsilon(1e-4));

    FunctionClassSpec dead = make_class({1, 1}, {0.0});
    CHECK(thm3_lower_bound(dead, 1.0, 0.1, 2.0, 100) == 0.0);

    LowerBoundConfig bad;
    bad.khintchine_c = 0.0;
    CHECK_THROWS_AS(thm3_lower_bound(cls, 1.0, 0.1, 2.0, 100, bad), InvalidInput);
}

TEST_CASE("thm3 never exceeds thm1 on shared configs") {
    Rng rng(5, 1);
    for (int t = 0; t < 500; ++t) {
        FunctionClassSpec cls = random_class(rng);
        double b = rng.uniform();
        double eps = 0.5 * rng.uniform();
        double p = (t % 2 == 0) ? 2.0 : kInf;
        std::size_t n = 1 + rng.below(500);
        CHECK(thm3_lower_bound(cls, b, eps, p, n) <=
              thm1_bound(cls, b, eps, p, n) * (1.0 + 1e-12));
    }
}

TEST_CASE("thm4 multiclass bound") {
    FunctionClassSpec cls = make_class({2, 3, 1}, {1.0, 1.0});
    double t1 = thm1_bound(cls, 1.0, 0.1, 2.0, 100);
    // ratio to thm1 is 2K/gamma
    CHECK(thm4_multiclass_bound(cls, 1.0, 0.1, 2.0, 100, 1.0, 2) ==
          doctest::Approx(4.0 * t1).epsilon(1e-12));
    CHECK(thm4_multiclass_bound(cls, 1.0, 0.1, 2.0, 100, 1.0, 2) ==
          doctest::Approx(42.4058).epsilon(1e-4));
    CHECK(thm4_multiclass_bound(cls, 1.0, 0.1, 2.0, 100, 2.0, 2) ==
          doctest::Approx(2.0 * t1).epsilon(1e-12));
    CHECK_THROWS_AS(thm4_multiclass_bound(cls, 1.0, 0.1, 2.0, 100, 1.0, 1), InvalidInput);
    CHECK_THROWS_AS(thm4_multiclass_bound(cls, 1.0, 0.1, 2.0, 100, 0.0, 2), InvalidInput);
}

TEST_CASE("comparison bounds") {
    FunctionClassSpec cls = make_class({2, 3, 1}, {1.0, 1.0});
    auto cmp = comparison_bounds(cls, nullptr, 1.0, 0.1, 100);
    CHECK(cmp.count("bartlett_spectral") == 0);  // needs actual weights
    CHECK(cmp.at("awasthi_two_layer") ==
          doctest::Approx(1.1 * std::sqrt(6.0) * std::sqrt(std::log(100.0)) / 10.0)
              .epsilon(1e-12));
    CHECK(cmp.at("awasthi_two_layer") == doctest::Approx(0.578217).epsilon(1e-4));
    CHECK(cmp.at("golowich") ==
          doctest::Approx(1.0 * std::sqrt(8.0 * 3.0) / 10.0).epsilon(1e-12));
    CHECK(cmp.at("neyshabur_exp") == doctest::Approx(4.0 / 10.0).epsilon(1e-12));

    FunctionClassSpec single = make_class({2, 1}, {1.5});
    auto c1 = comparison_bounds(single, nullptr, 1.0, 0.1, 100);
    CHECK(c1.at("neyshabur_exp") == doctest::Approx(2.0 * 1.5 / 10.0).epsilon(1e-12));
    CHECK(c1.count("awasthi_two_layer") == 0);  // l != 2

    // identity weights: all spectral terms 1, bartlett collapses to the
    // (sum (||I||_{2,1})^{2/3})^{3/2} = 2^{5/2} form for 2x2 layers
    FunctionClassSpec idcls = make_class({2, 2, 1}, {2.0, 2.0});
    idcls.dims = {2, 2, 2};
    MLP id;
    id.activation = ActivationSpec::relu();
    id.weights.push_back(Matrix(2, 2, {1, 0, 0, 1}));
    id.weights.push_back(Matrix(2, 2, {1, 0, 0, 1}));
    auto c2 = comparison_bounds(idcls, &id, 1.0, 0.0, 100);
    CHECK(c2.at("bartlett_spectral") == doctest::Approx(std::pow(2.0, 2.5) / 10.0).epsilon(1e-9));
}

TEST_CASE("bounds scale as c^l when all budgets scale by c") {
    Rng rng(7, 2);
    for (int t = 0; t < 100; ++t) {
        FunctionClassSpec cls = random_class(rng);
        double b = 0.2 + rng.uniform();
        double eps = 0.3 * rng.uniform();
        double p = (t % 2 == 0) ? 2.0 : kInf;
        std::size_t n = 1 + rng.below(300);
        double c = 0.5 + 2.0 * rng.uniform();
        FunctionClassSpec scaled = cls;
        for (double& m : scaled.budgets) m *= c;
        double factor = std::pow(c, static_cast<double>(cls.depth()));
        CHECK(thm1_bound(scaled, b, eps, p, n) ==
              doctest::Approx(factor * thm1_bound(cls, b, eps, p, n)).epsilon(1e-10));
        CHECK(thm3_lower_bound(scaled, b, eps, p, n) ==
              doctest::Approx(factor * thm3_lower_bound(cls, b, eps, p, n)).epsilon(1e-10));
    }
}

TEST_CASE("bounds are monotone in their inputs") {
    Rng rng(11, 3);
    for (int t = 0; t < 100; ++t) {
        FunctionClassSpec cls = random_class(rng);
        double b = 0.2 + rng.uniform();
        double eps = 0.3 * rng.uniform();
        double p = (t % 2 == 0) ? 2.0 : kInf;
        std::size_t n = 2 + rng.below(300);
        double base = thm1_bound(cls, b, eps, p, n);
        CHECK(thm1_bound(cls, b + 0.3, eps, p, n) >= base);
        CHECK(thm1_bound(cls, b, eps + 0.2, p, n) >= base);
        CHECK(thm1_bound(cls, b, eps, p, 2 * n) <= base);
        FunctionClassSpec wider = cls;
        wider.dims[1 + rng.below(wider.dims.size() - 2 + 1)] += 1;  // any hidden or output slot
        // widening whichever layer was picked never shrinks the bound
        CHECK(thm1_bound(wider, b, eps, p, n) >= base * (1.0 - 1e-12));
        FunctionClassSpec fatter = cls;
        fatter.budgets[rng.below(fatter.budgets.size())] += 0.5;
        CHECK(thm1_bound(fatter, b, eps, p, n) >= base);
        double gamma = 0.5 + rng.uniform();
        CHECK(thm4_multiclass_bound(cls, b, eps, p, n, 2.0 * gamma, 3) <=
              thm4_multiclass_bound(cls, b, eps, p, n, gamma, 3));
    }
}

TEST_CASE("thm1 assembles from the covering-module diameter") {
    Rng rng(13, 4);
    for (int t = 0; t < 100; ++t) {
        FunctionClassSpec cls = random_class(rng);
        double b = 0.2 + rng.uniform();
        double eps = 0.3 * rng.uniform();
        double p = (t % 2 == 0) ? 2.0 : kInf;
        std::size_t n = 1 + rng.below(300);
        double d = class_diameter(cls, b, eps, p);
        double assembled = 12.0 / std::sqrt(static_cast<double>(n)) * d *
                           std::sqrt(cls.sum_hh() *
                                     std::log(3.0 * static_cast<double>(cls.depth())));
        CHECK(thm1_bound(cls, b, eps, p, n) == doctest::Approx(assembled).epsilon(1e-12));
    }
}

TEST_CASE("factor decomposition") {
    auto dstd = factor_decomposition(1.0, 0.1, 4, 8, 1.0, 1.0, FactorMode::Standard);
    CHECK(dstd.c_factor == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_FALSE(dstd.degenerate_depth);

    auto dadv = factor_decomposition(1.0, 0.1, 4, 8, 1.0, 1.0, FactorMode::Adversarial);
    CHECK(dadv.c_factor ==
          doctest::Approx(1.1 * 8.0 * std::sqrt(4.0 * std::log(4.0))).epsilon(1e-12));
    CHECK(dadv.c_factor == doctest::Approx(20.7224).epsilon(1e-4));

    auto deg = factor_decomposition(1.0, 0.1, 1, 8, 1.0, 1.0, FactorMode::Adversarial);
    CHECK(deg.degenerate_depth);
    CHECK(deg.c_factor < 1e-4);

    auto w = factor_decomposition(1.0, 0.1, 2, 2, 2.0, 6.0, FactorMode::Standard);
    CHECK(w.w_factor == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(w.product == doctest::Approx(w.c_factor * 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(factor_decomposition(1.0, 0.1, 2, 2, 0.0, 1.0, FactorMode::Standard),
                    InvalidInput);
}
