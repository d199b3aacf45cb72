#include "arc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace arc {

bool Matrix::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

const char* norm_kind_name(NormKind kind) {
    switch (kind) {
        case NormKind::Frobenius: return "frobenius";
        case NormKind::GroupOneInf: return "one_inf";
        case NormKind::GroupTwoOne: return "two_one";
        case NormKind::Spectral: return "spectral";
    }
    return "?";
}

namespace {

double frobenius(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data) s += v * v;
    return std::sqrt(s);
}

double group_one_inf(const Matrix& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) s += std::fabs(a.at(i, j));
        best = std::max(best, s);
    }
    return best;
}

double group_two_one(const Matrix& a) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) s += a.at(i, j) * a.at(i, j);
        total += std::sqrt(s);
    }
    return total;
}

// Largest singular value via power iteration on A^T A. Deterministic
// all-ones start, 1e-10 relative tolerance, 10_000 iteration cap. If the
// start lands in the null space, fall back to basis vectors in order.
double spectral(const Matrix& a) {
    const std::size_t n = a.cols;
    Vector v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::size_t next_basis = 0;
    double sigma = 0.0;
    for (int iter = 0; iter < 10000; ++iter) {
        // u = A v; w = A^T u
        Vector u(a.rows, 0.0);
        for (std::size_t i = 0; i < a.rows; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += a.at(i, j) * v[j];
            u[i] = s;
        }
        Vector w(n, 0.0);
        for (std::size_t i = 0; i < a.rows; ++i)
            for (std::size_t j = 0; j < n; ++j) w[j] += a.at(i, j) * u[i];
        double wn = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
        double un = std::sqrt(std::inner_product(u.begin(), u.end(), u.begin(), 0.0));
        if (wn == 0.0) {
            if (next_basis == n) return 0.0;  // A^T A annihilates every basis vector: A = 0
            std::fill(v.begin(), v.end(), 0.0);
            v[next_basis++] = 1.0;
            sigma = 0.0;
            continue;
        }
        double next = un;
        for (std::size_t j = 0; j < n; ++j) v[j] = w[j] / wn;
        if (std::fabs(next - sigma) <= 1e-10 * std::max(1e-300, next)) return next;
        sigma = next;
    }
    return sigma;
}

}  // namespace

double matrix_norm(const Matrix& a, NormKind kind) {
    require(a.rows >= 1 && a.cols >= 1, "matrix_norm: empty matrix");
    require(a.all_finite(), "matrix_norm: non-finite entries");
    switch (kind) {
        case NormKind::Frobenius: return frobenius(a);
        case NormKind::GroupOneInf: return group_one_inf(a);
        case NormKind::GroupTwoOne: return group_two_one(a);
        case NormKind::Spectral: return spectral(a);
    }
    throw InvalidInput("matrix_norm: unknown norm kind");
}

double vector_p_norm(const Vector& v, double p) {
    require(p >= 1.0, "vector_p_norm: p must be >= 1");
    for (double e : v)
        require(std::isfinite(e), "vector_p_norm: non-finite entry");
    if (is_inf_exponent(p)) {
        double best = 0.0;
        for (double e : v) best = std::max(best, std::fabs(e));
        return best;
    }
    if (p == 1.0) {
        double s = 0.0;
        for (double e : v) s += std::fabs(e);
        return s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (double e : v) s += e * e;
        return std::sqrt(s);
    }
    double s = 0.0;
    for (double e : v) s += std::pow(std::fabs(e), p);
    return std::pow(s, 1.0 / p);
}

double data_group_norm(const Matrix& x, double p) {
    require(x.rows >= 1 && x.cols >= 1, "data_group_norm: empty matrix");
    double best = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) best = std::max(best, vector_p_norm(x.row(i), p));
    return best;
}

Vector matvec(const Matrix& a, const Vector& v) {
    require(a.cols == v.size(), "matvec: dimension mismatch");
    Vector out(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols; ++j) s += a.at(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

std::pair<double, double> matvec_norm_bound_check(const Matrix& a, const Vector& b,
                                                  NormKind kind) {
    require(kind == NormKind::Frobenius || kind == NormKind::GroupOneInf,
            "matvec_norm_bound_check: kind must be Frobenius or GroupOneInf");
    Vector ab = matvec(a, b);
    if (kind == NormKind::Frobenius)
        return {vector_p_norm(ab, 2.0), matrix_norm(a, NormKind::Frobenius) * vector_p_norm(b, 2.0)};
    return {vector_p_norm(ab, kInf), matrix_norm(a, NormKind::GroupOneInf) * vector_p_norm(b, kInf)};
}

double dual_dimension_factor(std::size_t d, double r, double p) {
    require(d >= 1, "dual_dimension_factor: d must be >= 1");
    require(r >= 1.0 && p >= 1.0, "dual_dimension_factor: exponents must be >= 1");
    double expo = 1.0 - inv_exponent(r) - inv_exponent(p);
    return std::max(1.0, std::pow(static_cast<double>(d), expo));
}

Vector project_l1_ball(const Vector& v, double radius) {
    require(radius >= 0.0, "project_l1_ball: negative radius");
    double l1 = 0.0;
    for (double e : v) l1 += std::fabs(e);
    if (l1 <= radius) return v;
    // sorted-threshold projection
    Vector abs(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) abs[i] = std::fabs(v[i]);
    std::sort(abs.begin(), abs.end(), std::greater<double>());
    double cumsum = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < abs.size(); ++k) {
        cumsum += abs[k];
        double t = (cumsum - radius) / static_cast<double>(k + 1);
        if (k + 1 == abs.size() || abs[k + 1] <= t) {
            theta = t;
            break;
        }
    }
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double mag = std::max(0.0, std::fabs(v[i]) - theta);
        out[i] = v[i] < 0 ? -mag : mag;
    }
    return out;
}

Matrix project_norm_ball(const Matrix& w, NormKind kind, double radius) {
    require(radius >= 0.0, "project_norm_ball: negative radius");
    if (kind == NormKind::Frobenius) {
        double n = matrix_norm(w, NormKind::Frobenius);
        if (n <= radius) return w;
        Matrix out = w;
        double scale = radius / n;
        for (double& e : out.data) e *= scale;
        return out;
    }
    if (kind == NormKind::GroupOneInf) {
        Matrix out = w;
        for (std::size_t i = 0; i < w.rows; ++i) {
            Vector r = project_l1_ball(w.row(i), radius);
            for (std::size_t j = 0; j < w.cols; ++j) out.at(i, j) = r[j];
        }
        return out;
    }
    throw InvalidInput("project_norm_ball: unsupported norm kind");
}

}  // namespace arc
