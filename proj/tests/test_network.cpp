#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "arc/network.hpp"
#include "arc/rng.hpp"

using namespace arc;

namespace {

MLP two_layer_relu() {
    MLP net;
    net.activation = ActivationSpec::relu();
    net.weights.push_back(Matrix(2, 1, {1, -1}));
    net.weights.push_back(Matrix(1, 2, {1, 1}));
    return net;
}

MLP random_net(Rng& rng, const std::vector<std::size_t>& dims, double scale = 1.0) {
    MLP net;
    net.activation = ActivationSpec::relu();
    for (std::size_t j = 0; j + 1 < dims.size(); ++j) {
        Matrix w(dims[j + 1], dims[j]);
        for (double& e : w.data) e = scale * rng.normal();
        net.weights.push_back(std::move(w));
    }
    return net;
}

// reject inputs whose pre-activations sit near a ReLU kink
bool kink_free(const MLP& net, const Vector& x, double margin = 1e-4) {
    Vector a = x;
    for (std::size_t j = 0; j + 1 < net.weights.size(); ++j) {
        Vector z = matvec(net.weights[j], a);
        for (double v : z)
            if (std::fabs(v) < margin) return false;
        for (double& v : z) v = net.activation.apply(v);
        a = z;
    }
    return true;
}

double fd_input(const MLP& net, Vector x, std::size_t out, std::size_t i, double h = 1e-5) {
    x[i] += h;
    double up = forward(net, x)[out];
    x[i] -= 2 * h;
    double dn = forward(net, x)[out];
    return (up - dn) / (2 * h);
}

double fd_weight(MLP net, const Vector& x, int label, LossKind kind, double gamma, std::size_t j,
                 std::size_t t, double h = 1e-5) {
    net.weights[j].data[t] += h;
    double up = loss_value(net, x, label, kind, gamma);
    net.weights[j].data[t] -= 2 * h;
    double dn = loss_value(net, x, label, kind, gamma);
    return (up - dn) / (2 * h);
}

double rel_err(double a, double b) { return std::fabs(a - b) / std::max(1e-3, std::fabs(b)); }

}  // namespace

TEST_CASE("forward basic values") {
    MLP lin;
    lin.activation = ActivationSpec::relu();
    lin.weights.push_back(Matrix(1, 2, {2, 0}));
    CHECK(forward(lin, {1, 1})[0] == doctest::Approx(2.0).epsilon(1e-12));

    MLP net = two_layer_relu();
    CHECK(forward(net, {1})[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(forward(net, {-2})[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(forward(net, {0})[0] == 0.0);

    CHECK_THROWS_AS(forward(net, {1, 2}), InvalidInput);
}

TEST_CASE("zero input propagates to zero output") {
    Rng rng(3, 0);
    for (int t = 0; t < 20; ++t) {
        MLP net = random_net(rng, {3, 4, 2});
        Vector out = forward(net, {0, 0, 0});
        for (double v : out) CHECK(v == 0.0);
    }
}

TEST_CASE("positive homogeneity of ReLU nets") {
    Rng rng(5, 1);
    for (int t = 0; t < 50; ++t) {
        MLP net = random_net(rng, {2, 3, 1});
        Vector x{rng.normal(), rng.normal()};
        double base = forward(net, x)[0];
        double c = 0.3 + 2.0 * rng.uniform();
        MLP scaled = net;
        for (Matrix& w : scaled.weights)
            for (double& e : w.data) e *= c;
        CHECK(forward(scaled, x)[0] == doctest::Approx(c * c * base).epsilon(1e-10));
    }
}

TEST_CASE("grad_input on linear and hand-checked nets") {
    MLP lin;
    lin.activation = ActivationSpec::relu();
    lin.weights.push_back(Matrix(1, 2, {2, -3}));
    Vector g = grad_input(lin, {0.7, -0.4}, 0);
    CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(-3.0).epsilon(1e-12));

    MLP net = two_layer_relu();
    CHECK(grad_input(net, {1}, 0)[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("grad_input matches central finite differences off the kinks") {
    Rng rng(7, 2);
    int done = 0;
    while (done < 200) {
        MLP net = random_net(rng, {3, 3, 2});
        Vector x{rng.normal(), rng.normal(), rng.normal()};
        if (!kink_free(net, x)) continue;
        ++done;
        std::size_t out = rng.below(2);
        Vector g = grad_input(net, x, out);
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(rel_err(g[i], fd_input(net, x, out, i)) < 1e-5);
    }
}

TEST_CASE("grad_weights matches finite differences for each loss") {
    Rng rng(11, 3);
    struct Case {
        LossKind kind;
        std::vector<std::size_t> dims;
    };
    for (const Case& c : {Case{LossKind::Logistic, {2, 3, 1}},
                          Case{LossKind::CrossEntropy, {2, 3, 3}},
                          Case{LossKind::Ramp, {2, 3, 1}}}) {
        int done = 0;
        while (done < 60) {
            MLP net = random_net(rng, c.dims);
            Vector x{rng.normal(), rng.normal()};
            if (!kink_free(net, x)) continue;
            int label = c.kind == LossKind::CrossEntropy ? static_cast<int>(rng.below(3))
                                                         : (rng.sign() > 0 ? 1 : -1);
            double gamma = 1.0;
            if (c.kind == LossKind::Ramp) {
                // keep t strictly inside (0, gamma) so the loss is differentiable
                double t = static_cast<double>(label) * forward(net, x)[0];
                if (t <= 0.05) continue;
                gamma = t * 2.0;
            }
            ++done;
            auto grads = grad_weights(net, x, label, c.kind, gamma);
            for (std::size_t j = 0; j < grads.size(); ++j)
                for (std::size_t t = 0; t < grads[j].data.size(); ++t)
                    CHECK(rel_err(grads[j].data[t],
                                  fd_weight(net, x, label, c.kind, gamma, j, t)) < 1e-5);
        }
    }
}

TEST_CASE("logistic gradient vanishes at a confident optimum") {
    MLP lin;
    lin.activation = ActivationSpec::identity();
    lin.weights.push_back(Matrix(1, 1, {40.0}));
    auto g = grad_weights(lin, {1.0}, 1, LossKind::Logistic);
    CHECK(std::fabs(g[0].data[0]) < 1e-12);
}

TEST_CASE("dead network: gradients beyond layer 1 vanish") {
    MLP net;
    net.activation = ActivationSpec::relu();
    net.weights.push_back(Matrix(3, 2));
    net.weights.push_back(Matrix(2, 3));
    net.weights.push_back(Matrix(2, 2));
    auto g = grad_weights(net, {1.0, -2.0}, 0, LossKind::CrossEntropy);
    for (std::size_t j = 1; j < g.size(); ++j)
        for (double e : g[j].data) CHECK(e == 0.0);
}

TEST_CASE("margin operator") {
    CHECK(margin_value({2, 0.5, -1}, 0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(margin_value({1, 1}, 0) == 0.0);
    CHECK(margin_value({0, 3}, 0) == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK_THROWS_AS(margin_value({1, 2}, 5), InvalidInput);
}

TEST_CASE("ramp loss values and guard") {
    CHECK(ramp_loss(0.5, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ramp_loss(-1.0, 1.0) == 1.0);
    CHECK(ramp_loss(2.0, 1.0) == 0.0);
    CHECK_THROWS_AS(ramp_loss(0.5, 0.0), InvalidInput);
    CHECK_THROWS_AS(ramp_loss(0.5, -1.0), InvalidInput);
}

TEST_CASE("ramp loss is 1/gamma-Lipschitz") {
    Rng rng(13, 4);
    for (int t = 0; t < 10000; ++t) {
        double gamma = 0.1 + 2.0 * rng.uniform();
        double t1 = rng.uniform(-3.0, 3.0);
        double t2 = rng.uniform(-3.0, 3.0);
        CHECK(std::fabs(ramp_loss(t1, gamma) - ramp_loss(t2, gamma)) <=
              std::fabs(t1 - t2) / gamma * (1.0 + 1e-12));
    }
}

TEST_CASE("ramp loss sandwiched between the 0-1 losses") {
    Rng rng(17, 5);
    for (int t = 0; t < 10000; ++t) {
        std::size_t k = 2 + rng.below(3);
        Vector scores(k);
        for (double& s : scores) s = rng.uniform(-2.0, 2.0);
        std::size_t y = rng.below(k);
        double gamma = 0.1 + rng.uniform();
        double m = margin_value(scores, y);
        double loss = ramp_loss(m, gamma);
        // argmax ties count as misclassified
        double lower = m > 0.0 ? 0.0 : 1.0;
        double upper = m <= gamma ? 1.0 : 0.0;
        CHECK(lower <= loss + 1e-12);
        CHECK(loss <= upper + 1e-12);
    }
}

TEST_CASE("leaky relu and activation metadata") {
    ActivationSpec leaky = ActivationSpec::leaky_relu(0.2);
    CHECK(leaky.apply(-1.0) == doctest::Approx(-0.2));
    CHECK(leaky.apply(0.0) == 0.0);
    CHECK(leaky.lipschitz() == 1.0);
    CHECK(ActivationSpec::leaky_relu(1.5).lipschitz() == doctest::Approx(1.5));
    CHECK(ActivationSpec::relu().derivative(0.0) == 0.0);
    CHECK(ActivationSpec::identity().lipschitz() == 1.0);
}
