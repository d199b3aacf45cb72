#ifndef ARC_COMMON_HPP
#define ARC_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace arc {

// Thrown on malformed caller input (bad dims, non-finite data, out-of-range
// parameters). The CLI maps this to exit code 2; everything else is 3.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when an iterative routine fails to converge within its budget.
struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_inf_exponent(double p) { return std::isinf(p) && p > 0; }

// 1/p with the convention 1/inf = 0.
inline double inv_exponent(double p) {
    if (is_inf_exponent(p)) return 0.0;
    return 1.0 / p;
}

// Holder conjugate: 1/p + 1/p* = 1, with the pair (1, inf).
inline double dual_exponent(double p) {
    if (is_inf_exponent(p)) return 1.0;
    if (p == 1.0) return kInf;
    return p / (p - 1.0);
}

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidInput(msg);
}

}  // namespace arc

#endif
