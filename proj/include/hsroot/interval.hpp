#pragma once

/**
 * @file interval.hpp
 * @brief Closed real intervals with outward-rounded arithmetic.
 *
 * Every operation returns an interval that contains the exact real result
 * for all operand values. Bounds are doubles; -inf/+inf are allowed as lower
 * and upper bounds respectively. Rounding is done by stepping (see
 * rounding.hpp), so exact dyadic results are returned without widening.
 */

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>

#include "hsroot/errors.hpp"
#include "hsroot/rounding.hpp"

namespace hsroot {

class Interval {
public:
    /// The point interval [0,0].
    constexpr Interval() noexcept = default;

    /// Point interval [v,v]. Throws InvalidBound for NaN or infinite v.
    explicit Interval(double v) : Interval(make(v, v)) {}

    /// Checked construction, bounds taken exactly as given.
    static Interval make(double lo, double hi) {
        if (std::isnan(lo) || std::isnan(hi)) throw InvalidBound("interval bound is NaN");
        if (lo > hi) throw OrderViolation("interval lower bound exceeds upper bound");
        if (lo == rounding::inf || hi == -rounding::inf) {
            throw InvalidBound("interval has no finite member");
        }
        return Interval(lo, hi, Unchecked{});
    }

    static constexpr Interval whole() noexcept {
        return Interval(-rounding::inf, rounding::inf, Unchecked{});
    }

    constexpr double lo() const noexcept { return lo_; }
    constexpr double hi() const noexcept { return hi_; }

    bool is_bounded() const noexcept { return std::isfinite(lo_) && std::isfinite(hi_); }
    constexpr bool is_point() const noexcept { return lo_ == hi_; }
    constexpr bool contains(double v) const noexcept { return lo_ <= v && v <= hi_; }
    constexpr bool contains_zero() const noexcept { return lo_ <= 0.0 && 0.0 <= hi_; }

    /// this ⊆ other
    constexpr bool subset_of(const Interval& other) const noexcept {
        return other.lo_ <= lo_ && hi_ <= other.hi_;
    }

    /// this lies in the interior of other
    constexpr bool interior_of(const Interval& other) const noexcept {
        return other.lo_ < lo_ && hi_ < other.hi_;
    }

    friend constexpr bool operator==(const Interval& a, const Interval& b) noexcept {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

    // Internal fast path: callers guarantee lo <= hi and no NaN.
    struct Unchecked {};
    constexpr Interval(double lo, double hi, Unchecked) noexcept : lo_(lo), hi_(hi) {}

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

inline bool contains_zero(const Interval& x) noexcept { return x.contains_zero(); }

inline Interval add(const Interval& x, const Interval& y) noexcept {
    return {rounding::add_down(x.lo(), y.lo()), rounding::add_up(x.hi(), y.hi()),
            Interval::Unchecked{}};
}

inline Interval sub(const Interval& x, const Interval& y) noexcept {
    return {rounding::sub_down(x.lo(), y.hi()), rounding::sub_up(x.hi(), y.lo()),
            Interval::Unchecked{}};
}

inline Interval neg(const Interval& x) noexcept {
    return {-x.hi(), -x.lo(), Interval::Unchecked{}};
}

inline Interval mul(const Interval& x, const Interval& y) noexcept {
    using namespace rounding;
    const double a = x.lo(), b = x.hi(), c = y.lo(), d = y.hi();
    // Sign-case dispatch keeps the common bounded cases at two products.
    if (a >= 0) {
        if (c >= 0) return {mul_down(a, c), mul_up(b, d), Interval::Unchecked{}};
        if (d <= 0) return {mul_down(b, c), mul_up(a, d), Interval::Unchecked{}};
        return {mul_down(b, c), mul_up(b, d), Interval::Unchecked{}};
    }
    if (b <= 0) {
        if (c >= 0) return {mul_down(a, d), mul_up(b, c), Interval::Unchecked{}};
        if (d <= 0) return {mul_down(b, d), mul_up(a, c), Interval::Unchecked{}};
        return {mul_down(a, d), mul_up(a, c), Interval::Unchecked{}};
    }
    if (c >= 0) return {mul_down(a, d), mul_up(b, d), Interval::Unchecked{}};
    if (d <= 0) return {mul_down(b, c), mul_up(a, c), Interval::Unchecked{}};
    return {std::min(mul_down(a, d), mul_down(b, c)), std::max(mul_up(a, c), mul_up(b, d)),
            Interval::Unchecked{}};
}

/// Multiplication by a point value.
inline Interval scale(double k, const Interval& x) noexcept {
    using namespace rounding;
    if (k >= 0) return {mul_down(k, x.lo()), mul_up(k, x.hi()), Interval::Unchecked{}};
    return {mul_down(k, x.hi()), mul_up(k, x.lo()), Interval::Unchecked{}};
}

/// Tight power: for even k the range of a^k over x, not the product bound.
inline Interval pow(const Interval& x, unsigned k) noexcept {
    using namespace rounding;
    if (k == 0) return {1.0, 1.0, Interval::Unchecked{}};
    if (k == 1) return x;
    const double a = x.lo(), b = x.hi();
    if (k % 2 == 0) {
        if (a >= 0) return {pow_down(a, k), pow_up(b, k), Interval::Unchecked{}};
        if (b <= 0) return {pow_down(-b, k), pow_up(-a, k), Interval::Unchecked{}};
        return {0.0, pow_up(std::max(-a, b), k), Interval::Unchecked{}};
    }
    const double lo = a >= 0 ? pow_down(a, k) : -pow_up(-a, k);
    const double hi = b >= 0 ? pow_up(b, k) : -pow_down(-b, k);
    return {lo, hi, Interval::Unchecked{}};
}

/// 1/x for 0 ∉ x. Throws ZeroInDivisor otherwise.
inline Interval recip(const Interval& x) {
    if (x.contains_zero()) throw ZeroInDivisor("reciprocal of an interval containing zero");
    return {rounding::div_down(1.0, x.hi()), rounding::div_up(1.0, x.lo()),
            Interval::Unchecked{}};
}

inline Interval operator+(const Interval& x, const Interval& y) noexcept { return add(x, y); }
inline Interval operator-(const Interval& x, const Interval& y) noexcept { return sub(x, y); }
inline Interval operator-(const Interval& x) noexcept { return neg(x); }
inline Interval operator*(const Interval& x, const Interval& y) noexcept { return mul(x, y); }

/// Result of division by an interval that may contain zero.
///
/// kinds:
///   empty  - no quotient exists
///   single - one interval, possibly half-unbounded
///   split  - two disjoint half-lines, first.hi() < second.lo()
///   whole  - the entire real line
class ExtendedDivResult {
public:
    enum class Kind { empty, single, split, whole };

    static ExtendedDivResult empty() { return ExtendedDivResult(Kind::empty, {}, {}); }
    static ExtendedDivResult single(Interval x) { return ExtendedDivResult(Kind::single, x, {}); }
    static ExtendedDivResult whole() {
        return ExtendedDivResult(Kind::whole, Interval::whole(), {});
    }
    static ExtendedDivResult split(Interval low, Interval high) {
        if (!(low.hi() < high.lo())) return whole();
        return ExtendedDivResult(Kind::split, low, high);
    }

    Kind kind() const noexcept { return kind_; }
    /// The single/whole interval, or the lower piece of a split.
    const Interval& first() const noexcept { return first_; }
    /// The upper piece of a split.
    const Interval& second() const noexcept { return second_; }

    bool contains(double v) const noexcept {
        switch (kind_) {
            case Kind::empty: return false;
            case Kind::single:
            case Kind::whole: return first_.contains(v);
            case Kind::split: return first_.contains(v) || second_.contains(v);
        }
        return false;
    }

private:
    ExtendedDivResult(Kind k, Interval a, Interval b) : kind_(k), first_(a), second_(b) {}

    Kind kind_;
    Interval first_;
    Interval second_;
};

/**
 * Hanson/Kahan extended division x / y.
 *
 * With 0 ∉ y this is mul(x, recip(y)). With 0 ∈ y the result is the set of
 * all q with q·b = a for some a ∈ x, b ∈ y:
 *
 *   0 ∈ x                       -> whole (a = b = 0 admits every q)
 *   y = [0,0], 0 ∉ x            -> whole (degenerate divisor, kept conservative)
 *   x̄ < 0, ȳ = 0                -> [x̄/y̲, +inf]
 *   x̄ < 0, y̲ < 0 < ȳ            -> [-inf, x̄/ȳ] ∪ [x̄/y̲, +inf]
 *   x̄ < 0, y̲ = 0                -> [-inf, x̄/ȳ]
 *   x̲ > 0, ȳ = 0                -> [-inf, x̲/y̲]
 *   x̲ > 0, y̲ < 0 < ȳ            -> [-inf, x̲/y̲] ∪ [x̲/ȳ, +inf]
 *   x̲ > 0, y̲ = 0                -> [x̲/ȳ, +inf]
 */
inline ExtendedDivResult div_extended(const Interval& x, const Interval& y) {
    using namespace rounding;
    if (!y.contains_zero()) return ExtendedDivResult::single(mul(x, recip(y)));
    if (x.contains_zero()) return ExtendedDivResult::whole();
    if (y.lo() == 0 && y.hi() == 0) return ExtendedDivResult::whole();

    const double xl = x.lo(), xh = x.hi(), yl = y.lo(), yh = y.hi();
    if (xh < 0) {
        if (yh == 0) return ExtendedDivResult::single({div_down(xh, yl), inf, Interval::Unchecked{}});
        if (yl == 0) return ExtendedDivResult::single({-inf, div_up(xh, yh), Interval::Unchecked{}});
        return ExtendedDivResult::split({-inf, div_up(xh, yh), Interval::Unchecked{}},
                                        {div_down(xh, yl), inf, Interval::Unchecked{}});
    }
    if (yh == 0) return ExtendedDivResult::single({-inf, div_up(xl, yl), Interval::Unchecked{}});
    if (yl == 0) return ExtendedDivResult::single({div_down(xl, yh), inf, Interval::Unchecked{}});
    return ExtendedDivResult::split({-inf, div_up(xl, yl), Interval::Unchecked{}},
                                    {div_down(xl, yh), inf, Interval::Unchecked{}});
}

/// Representable midpoint; throws UnboundedInterval for infinite bounds.
inline double midpoint(const Interval& x) {
    if (!x.is_bounded()) throw UnboundedInterval("midpoint of an unbounded interval");
    double m = (x.lo() + x.hi()) / 2;
    if (std::isinf(m)) m = x.lo() / 2 + x.hi() / 2;
    return std::clamp(m, x.lo(), x.hi());
}

/// Upper bound on hi - lo.
inline double width(const Interval& x) {
    if (!x.is_bounded()) throw UnboundedInterval("width of an unbounded interval");
    return rounding::sub_up(x.hi(), x.lo());
}

/// Upper bound on (hi - lo)/2.
inline double radius(const Interval& x) {
    return rounding::mul_up(0.5, width(x));
}

inline std::optional<Interval> intersect(const Interval& x, const Interval& y) noexcept {
    const double lo = std::max(x.lo(), y.lo());
    const double hi = std::min(x.hi(), y.hi());
    if (lo > hi) return std::nullopt;
    return Interval(lo, hi, Interval::Unchecked{});
}

inline Interval hull(const Interval& x, const Interval& y) noexcept {
    return {std::min(x.lo(), y.lo()), std::max(x.hi(), y.hi()), Interval::Unchecked{}};
}

// ---------------------------------------------------------------------------
// Text form: [lo,hi] with shortest round-trip decimals, inf/-inf for open ends.

/// Shortest decimal string that parses back to exactly v.
inline std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s == "inf" || s == "+inf") return rounding::inf;
    if (s == "-inf") return -rounding::inf;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::string to_string(const Interval& x) {
    return "[" + format_double(x.lo()) + "," + format_double(x.hi()) + "]";
}

/// Parses "[lo,hi]". Throws InvalidBound on malformed text.
inline Interval parse_interval(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.size() < 5 || s.front() != '[' || s.back() != ']') {
        throw InvalidBound("malformed interval text: " + std::string(s));
    }
    s = s.substr(1, s.size() - 2);
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) throw InvalidBound("interval text lacks a comma");
    const auto lo = parse_double(s.substr(0, comma));
    const auto hi = parse_double(s.substr(comma + 1));
    if (!lo || !hi) throw InvalidBound("malformed interval bound");
    return Interval::make(*lo, *hi);
}

inline std::ostream& operator<<(std::ostream& os, const Interval& x) {
    return os << to_string(x);
}

}  // namespace hsroot
