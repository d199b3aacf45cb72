#include "arc/network.hpp"

#include <algorithm>
#include <cmath>

namespace arc {

std::vector<std::size_t> MLP::dims() const {
    std::vector<std::size_t> d;
    d.push_back(weights.front().cols);
    for (const Matrix& w : weights) d.push_back(w.rows);
    return d;
}

std::size_t MLP::param_count() const {
    std::size_t n = 0;
    for (const Matrix& w : weights) n += w.rows * w.cols;
    return n;
}

void MLP::validate() const {
    require(!weights.empty(), "mlp: at least one layer required");
    for (std::size_t j = 0; j + 1 < weights.size(); ++j)
        require(weights[j + 1].cols == weights[j].rows, "mlp: layer dims do not chain");
    for (const Matrix& w : weights) {
        require(w.rows >= 1 && w.cols >= 1, "mlp: empty weight matrix");
        require(w.all_finite(), "mlp: non-finite weights");
    }
}

namespace {

// Forward pass keeping every pre-activation; post[j] is the input to layer j+1.
struct Trace {
    std::vector<Vector> pre;   // z_j = W_j post[j-1], j = 1..l
    std::vector<Vector> post;  // post[0] = x, post[j] = rho(z_j) for j < l
};

Trace run_forward(const MLP& net, const Vector& x) {
    require(x.size() == net.input_dim(), "forward: input dimension mismatch");
    Trace t;
    t.post.push_back(x);
    for (std::size_t j = 0; j < net.weights.size(); ++j) {
        Vector z = matvec(net.weights[j], t.post.back());
        t.pre.push_back(z);
        if (j + 1 < net.weights.size()) {
            Vector a(z.size());
            for (std::size_t i = 0; i < z.size(); ++i) a[i] = net.activation.apply(z[i]);
            t.post.push_back(a);
        }
    }
    return t;
}

}  // namespace

Vector forward(const MLP& net, const Vector& x) {
    require(x.size() == net.input_dim(), "forward: input dimension mismatch");
    Vector cur = matvec(net.weights[0], x);
    for (std::size_t j = 1; j < net.weights.size(); ++j) {
        for (double& v : cur) v = net.activation.apply(v);
        cur = matvec(net.weights[j], cur);
    }
    return cur;
}

BackpropResult backprop(const MLP& net, const Vector& x, const Vector& gout) {
    require(gout.size() == net.output_dim(), "backprop: gout dimension mismatch");
    Trace t = run_forward(net, x);
    const std::size_t l = net.weights.size();

    BackpropResult res;
    res.weight_grads.resize(l);
    Vector delta = gout;  // d<gout,f>/d z_j, starting at the output layer
    for (std::size_t jj = l; jj-- > 0;) {
        const Matrix& w = net.weights[jj];
        const Vector& in = t.post[jj];
        Matrix g(w.rows, w.cols);
        for (std::size_t i = 0; i < w.rows; ++i)
            for (std::size_t j = 0; j < w.cols; ++j) g.at(i, j) = delta[i] * in[j];
        res.weight_grads[jj] = std::move(g);

        Vector prev(w.cols, 0.0);
        for (std::size_t i = 0; i < w.rows; ++i)
            for (std::size_t j = 0; j < w.cols; ++j) prev[j] += w.at(i, j) * delta[i];
        if (jj > 0) {
            const Vector& z = t.pre[jj - 1];
            for (std::size_t j = 0; j < prev.size(); ++j)
                prev[j] *= net.activation.derivative(z[j]);
        }
        delta = std::move(prev);
    }
    res.input_grad = std::move(delta);
    return res;
}

Vector grad_input(const MLP& net, const Vector& x, std::size_t output_index) {
    require(output_index < net.output_dim(), "grad_input: output index out of range");
    Vector gout(net.output_dim(), 0.0);
    gout[output_index] = 1.0;
    return backprop(net, x, gout).input_grad;
}

namespace {

double sigmoid(double t) {
    if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
    double e = std::exp(t);
    return e / (1.0 + e);
}

Vector softmax(const Vector& s) {
    double m = *std::max_element(s.begin(), s.end());
    Vector p(s.size());
    double z = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        p[i] = std::exp(s[i] - m);
        z += p[i];
    }
    for (double& e : p) e /= z;
    return p;
}

// dLoss/dscores for the supported losses; `label` is +-1 for binary losses on
// a 1-dim head, a class index otherwise.
Vector loss_gout(const Vector& scores, int label, LossKind kind, double gamma) {
    const std::size_t k = scores.size();
    switch (kind) {
        case LossKind::Logistic: {
            require(k == 1, "logistic loss needs a 1-dim head");
            require(label == 1 || label == -1, "logistic loss needs labels in {-1,+1}");
            double y = static_cast<double>(label);
            return {-y * sigmoid(-y * scores[0])};
        }
        case LossKind::CrossEntropy: {
            require(k >= 2, "cross-entropy needs K >= 2 outputs");
            require(label >= 0 && static_cast<std::size_t>(label) < k,
                    "cross-entropy: label out of range");
            Vector g = softmax(scores);
            g[static_cast<std::size_t>(label)] -= 1.0;
            return g;
        }
        case LossKind::Ramp: {
            require(gamma > 0.0, "ramp loss needs gamma > 0");
            if (k == 1) {
                require(label == 1 || label == -1, "binary ramp needs labels in {-1,+1}");
                double y = static_cast<double>(label);
                double t = y * scores[0];
                double dphi = (t > 0.0 && t < gamma) ? -1.0 / gamma : 0.0;
                return {dphi * y};
            }
            require(label >= 0 && static_cast<std::size_t>(label) < k,
                    "ramp loss: label out of range");
            auto yi = static_cast<std::size_t>(label);
            std::size_t best = yi == 0 ? 1 : 0;
            for (std::size_t j = 0; j < k; ++j)
                if (j != yi && scores[j] > scores[best]) best = j;
            double t = scores[yi] - scores[best];
            Vector g(k, 0.0);
            if (t > 0.0 && t < gamma) {
                g[yi] = -1.0 / gamma;
                g[best] = 1.0 / gamma;
            }
            return g;
        }
    }
    throw InvalidInput("unknown loss kind");
}

}  // namespace

double loss_value(const MLP& net, const Vector& x, int label, LossKind kind, double gamma) {
    Vector s = forward(net, x);
    switch (kind) {
        case LossKind::Logistic: {
            require(s.size() == 1, "logistic loss needs a 1-dim head");
            double y = static_cast<double>(label);
            double t = -y * s[0];
            // log(1 + exp(t)) without overflow
            return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
        }
        case LossKind::CrossEntropy: {
            Vector p = softmax(s);
            return -std::log(std::max(1e-300, p[static_cast<std::size_t>(label)]));
        }
        case LossKind::Ramp: {
            double t = s.size() == 1 ? static_cast<double>(label) * s[0]
                                     : margin_value(s, static_cast<std::size_t>(label));
            return ramp_loss(t, gamma);
        }
    }
    throw InvalidInput("unknown loss kind");
}

std::vector<Matrix> grad_weights(const MLP& net, const Vector& x, int label, LossKind kind,
                                 double gamma) {
    Vector s = forward(net, x);
    return backprop(net, x, loss_gout(s, label, kind, gamma)).weight_grads;
}

Vector loss_grad_input(const MLP& net, const Vector& x, int label, LossKind kind, double gamma) {
    Vector s = forward(net, x);
    return backprop(net, x, loss_gout(s, label, kind, gamma)).input_grad;
}

double margin_value(const Vector& scores, std::size_t y) {
    require(scores.size() >= 2, "margin: needs K >= 2 scores");
    require(y < scores.size(), "margin: label out of range");
    double best = -kInf;
    for (std::size_t j = 0; j < scores.size(); ++j)
        if (j != y) best = std::max(best, scores[j]);
    return scores[y] - best;
}

double margin(const MLP& net, const Vector& x, std::size_t y) {
    return margin_value(forward(net, x), y);
}

double ramp_loss(double t, double gamma) {
    require(gamma > 0.0, "ramp_loss: gamma must be positive");
    if (t <= 0.0) return 1.0;
    if (t >= gamma) return 0.0;
    return 1.0 - t / gamma;
}

}  // namespace arc
