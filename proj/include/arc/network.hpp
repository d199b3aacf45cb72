#ifndef ARC_NETWORK_HPP
#define ARC_NETWORK_HPP

#include <cstddef>
#include <vector>

#include "arc/linalg.hpp"

namespace arc {

enum class Activation { ReLU, Identity, LeakyReLU };

struct ActivationSpec {
    Activation kind = Activation::ReLU;
    double slope = 0.0;  // LeakyReLU only

    static ActivationSpec relu() { return {Activation::ReLU, 0.0}; }
    static ActivationSpec identity() { return {Activation::Identity, 0.0}; }
    static ActivationSpec leaky_relu(double slope) { return {Activation::LeakyReLU, slope}; }

    double lipschitz() const {
        return kind == Activation::LeakyReLU ? std::max(1.0, slope) : 1.0;
    }
    double apply(double z) const {
        switch (kind) {
            case Activation::ReLU: return z > 0 ? z : 0.0;
            case Activation::Identity: return z;
            case Activation::LeakyReLU: return z > 0 ? z : slope * z;
        }
        return z;
    }
    // Subgradient convention at the kink: rho'(0) = 0 for ReLU.
    double derivative(double z) const {
        switch (kind) {
            case Activation::ReLU: return z > 0 ? 1.0 : 0.0;
            case Activation::Identity: return 1.0;
            case Activation::LeakyReLU: return z > 0 ? 1.0 : slope;
        }
        return 1.0;
    }
};

// Fully-connected net without biases: x -> W_l rho(W_{l-1} rho(... rho(W_1 x))).
// Activation is applied between layers only, never after the last one.
struct MLP {
    std::vector<Matrix> weights;  // W_1 .. W_l, W_j is h_j x h_{j-1}
    ActivationSpec activation;

    std::size_t depth() const { return weights.size(); }
    std::size_t input_dim() const { return weights.front().cols; }
    std::size_t output_dim() const { return weights.back().rows; }
    std::vector<std::size_t> dims() const;
    std::size_t param_count() const;
    void validate() const;
};

Vector forward(const MLP& net, const Vector& x);

struct BackpropResult {
    std::vector<Matrix> weight_grads;
    Vector input_grad;
};

// Reverse accumulation of gout . f(x) through the net: exact gradients of the
// linear functional <gout, f(x)> w.r.t. every W_j and w.r.t. x.
BackpropResult backprop(const MLP& net, const Vector& x, const Vector& gout);

// Gradient of output component `output_index` w.r.t. the input.
Vector grad_input(const MLP& net, const Vector& x, std::size_t output_index);

enum class LossKind { Logistic, CrossEntropy, Ramp };

// Per-sample loss value. Binary losses take y in {-1,+1} through y_signed and
// a 1-dim head; multi-class losses take a class index and a K-dim head.
double loss_value(const MLP& net, const Vector& x, int label, LossKind kind, double gamma);

// Exact per-layer weight gradients for the supported losses.
std::vector<Matrix> grad_weights(const MLP& net, const Vector& x, int label, LossKind kind,
                                 double gamma = 1.0);

// Gradient of the same loss w.r.t. the input (used by loss-ascent attacks).
Vector loss_grad_input(const MLP& net, const Vector& x, int label, LossKind kind, double gamma);

// Margin operator on raw scores: [f]_y - max_{y' != y} [f]_{y'}.
double margin_value(const Vector& scores, std::size_t y);
double margin(const MLP& net, const Vector& x, std::size_t y);

// Ramp loss: 1 for t <= 0, 1 - t/gamma on (0, gamma), 0 for t >= gamma.
double ramp_loss(double t, double gamma);

}  // namespace arc

#endif
