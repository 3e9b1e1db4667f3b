#pragma once

// Directed rounding without touching the FPU rounding mode.
//
// Each helper computes the round-to-nearest result, recovers the sign of the
// rounding error with an error-free transformation (TwoSum, FMA remainder) and
// steps one ulp outward only when the nearest result lies on the wrong side.
// Exact results therefore stay exact, and inexact ones are off by at most one
// representable step on the safe side.

#include <cmath>
#include <limits>

namespace hsroot::rounding {

inline constexpr double inf = std::numeric_limits<double>::infinity();
inline constexpr double max_finite = std::numeric_limits<double>::max();

// Below this magnitude FMA remainders may underflow and lose their sign.
inline constexpr double tiny = 0x1p-960;

inline double step_down(double x) { return std::nextafter(x, -inf); }
inline double step_up(double x) { return std::nextafter(x, inf); }

namespace detail {

// Overflow from finite operands: nearest rounding gave +-inf, the true value
// is finite. Keep the side that is still a valid bound.
inline double saturate_down(double r) { return r > 0 ? max_finite : r; }
inline double saturate_up(double r) { return r < 0 ? -max_finite : r; }

// Exact error of a + b (Knuth TwoSum); valid whenever the sum is finite.
inline double two_sum_error(double a, double b, double s) {
    const double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

}  // namespace detail

inline double add_down(double a, double b) {
    const double s = a + b;
    if (std::isinf(s)) {
        return std::isfinite(a) && std::isfinite(b) ? detail::saturate_down(s) : s;
    }
    return detail::two_sum_error(a, b, s) < 0 ? step_down(s) : s;
}

inline double add_up(double a, double b) {
    const double s = a + b;
    if (std::isinf(s)) {
        return std::isfinite(a) && std::isfinite(b) ? detail::saturate_up(s) : s;
    }
    return detail::two_sum_error(a, b, s) > 0 ? step_up(s) : s;
}

inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

// 0 * inf is taken as 0 (interval convention).
inline double mul_down(double a, double b) {
    if (a == 0 || b == 0) return 0.0;
    const double p = a * b;
    if (std::isinf(p)) {
        return std::isfinite(a) && std::isfinite(b) ? detail::saturate_down(p) : p;
    }
    if (std::fabs(p) < tiny) return step_down(p);
    return std::fma(a, b, -p) < 0 ? step_down(p) : p;
}

inline double mul_up(double a, double b) {
    if (a == 0 || b == 0) return 0.0;
    const double p = a * b;
    if (std::isinf(p)) {
        return std::isfinite(a) && std::isfinite(b) ? detail::saturate_up(p) : p;
    }
    if (std::fabs(p) < tiny) return step_up(p);
    return std::fma(a, b, -p) > 0 ? step_up(p) : p;
}

namespace detail {

// Sign of (a/b - q) for q = fl(a/b), finite nonzero operands.
inline int quotient_error_sign(double a, double b, double q) {
    const double r = std::fma(-q, b, a);
    if (r == 0) return 0;
    return (r > 0) == (b > 0) ? 1 : -1;
}

}  // namespace detail

/// Requires b != 0. Infinite operands give exact results (x/inf = 0, inf/x = inf).
inline double div_down(double a, double b) {
    if (a == 0) return 0.0;
    const double q = a / b;
    if (!std::isfinite(a) || !std::isfinite(b)) return q;
    if (std::isinf(q)) return detail::saturate_down(q);
    if (std::fabs(q) < tiny) return step_down(q);
    return detail::quotient_error_sign(a, b, q) < 0 ? step_down(q) : q;
}

inline double div_up(double a, double b) {
    if (a == 0) return 0.0;
    const double q = a / b;
    if (!std::isfinite(a) || !std::isfinite(b)) return q;
    if (std::isinf(q)) return detail::saturate_up(q);
    if (std::fabs(q) < tiny) return step_up(q);
    return detail::quotient_error_sign(a, b, q) > 0 ? step_up(q) : q;
}

/// a^k rounded down, for a >= 0.
inline double pow_down(double a, unsigned k) {
    double r = 1.0;
    for (unsigned i = 0; i < k; ++i) r = mul_down(r, a);
    return r;
}

/// a^k rounded up, for a >= 0.
inline double pow_up(double a, unsigned k) {
    double r = 1.0;
    for (unsigned i = 0; i < k; ++i) r = mul_up(r, a);
    return r;
}

}  // namespace hsroot::rounding
