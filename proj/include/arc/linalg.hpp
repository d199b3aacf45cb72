#ifndef ARC_LINALG_HPP
#define ARC_LINALG_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "arc/common.hpp"

namespace arc {

using Vector = std::vector<double>;

// Dense row-major f64 matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    Matrix(std::size_t r, std::size_t c, std::vector<double> d)
        : rows(r), cols(c), data(std::move(d)) {
        require(data.size() == rows * cols, "matrix: data size does not match shape");
    }

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    Vector row(std::size_t i) const {
        return Vector(data.begin() + static_cast<std::ptrdiff_t>(i * cols),
                      data.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
    }

    bool all_finite() const;
};

enum class NormKind { Frobenius, GroupOneInf, GroupTwoOne, Spectral };

const char* norm_kind_name(NormKind kind);

// Matrix norms used throughout: Frobenius, the (1,inf) and (2,1) group norms
// over rows, and the spectral norm (power iteration, relative tolerance 1e-10,
// deterministic all-ones start).
double matrix_norm(const Matrix& a, NormKind kind);

// p >= 1 or inf; p = inf gives the max-absolute entry.
double vector_p_norm(const Vector& v, double p);

// ||X||_{p,inf}: max over rows of the row p-norm. Rows of X are samples.
double data_group_norm(const Matrix& x, double p);

Vector matvec(const Matrix& a, const Vector& v);

// Both sides of ||Ab|| <= ||A||*||b|| in the matching norm pair:
// Frobenius with the 2-norm, GroupOneInf with the inf-norm.
std::pair<double, double> matvec_norm_bound_check(const Matrix& a, const Vector& b,
                                                  NormKind kind);

// max{1, d^(1 - 1/r - 1/p)} with 1/inf = 0; bounds the dual-norm growth of a
// perturbed sample relative to (B + eps).
double dual_dimension_factor(std::size_t d, double r, double p);

// Project a vector onto the l1 ball of the given radius (sorted-threshold
// algorithm); exact, O(n log n).
Vector project_l1_ball(const Vector& v, double radius);

// Project a matrix onto the norm ball {||W|| <= radius} for Frobenius
// (radial rescale) or GroupOneInf (per-row l1 projection).
Matrix project_norm_ball(const Matrix& w, NormKind kind, double radius);

}  // namespace arc

#endif
