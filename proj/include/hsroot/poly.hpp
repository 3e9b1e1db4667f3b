#pragma once

/**
 * @file poly.hpp
 * @brief Sparse multivariate polynomials, square systems and their Jacobians.
 *
 * Coefficients are stored as intervals. Parsed coefficients are point
 * intervals (the nearest double to the written decimal); derivative
 * coefficients k·a are outward rounded so they stay exact whenever k·a is
 * representable and otherwise enclose it.
 */

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsroot/box.hpp"
#include "hsroot/errors.hpp"
#include "hsroot/interval.hpp"

namespace hsroot {

struct Monomial {
    Interval coeff;
    std::vector<unsigned> exponents;

    unsigned degree() const {
        return std::accumulate(exponents.begin(), exponents.end(), 0u);
    }
};

namespace detail {

// Graded lexicographic: higher total degree first, then lexicographically
// larger exponent vectors first.
inline bool grlex_before(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
    const auto da = std::accumulate(a.begin(), a.end(), 0u);
    const auto db = std::accumulate(b.begin(), b.end(), 0u);
    if (da != db) return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace detail

class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::size_t dimension) : dim_(dimension) {}

    /// Combines like terms, drops zero terms and sorts in graded lex order.
    Polynomial(std::size_t dimension, std::vector<Monomial> terms)
        : dim_(dimension), terms_(std::move(terms)) {
        for (const auto& t : terms_) {
            if (t.exponents.size() != dim_) {
                throw DimensionMismatch("monomial exponent vector has wrong length");
            }
        }
        normalize();
    }

    static Polynomial constant(std::size_t dimension, double c) {
        return Polynomial(dimension, {Monomial{Interval(c), std::vector<unsigned>(dimension, 0)}});
    }

    static Polynomial variable(std::size_t dimension, std::size_t index) {
        std::vector<unsigned> e(dimension, 0);
        e.at(index) = 1;
        return Polynomial(dimension, {Monomial{Interval(1.0), std::move(e)}});
    }

    std::size_t dimension() const noexcept { return dim_; }
    const std::vector<Monomial>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    unsigned degree() const {
        unsigned d = 0;
        for (const auto& t : terms_) d = std::max(d, t.degree());
        return d;
    }

    /// Highest exponent of one variable.
    unsigned degree_in(std::size_t var) const {
        unsigned d = 0;
        for (const auto& t : terms_) d = std::max(d, t.exponents[var]);
        return d;
    }

    bool depends_on(std::size_t var) const { return degree_in(var) > 0; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.dim_ != b.dim_ || a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i) {
            if (!(a.terms_[i].coeff == b.terms_[i].coeff) ||
                a.terms_[i].exponents != b.terms_[i].exponents)
                return false;
        }
        return true;
    }

    // Expansion arithmetic, used while parsing. Coefficients are combined in
    // round-to-nearest so that a parsed system has point coefficients.
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        check_dims(a, b);
        std::vector<Monomial> t = a.terms_;
        t.insert(t.end(), b.terms_.begin(), b.terms_.end());
        return Polynomial(a.dim_, std::move(t), Nearest{});
    }

    friend Polynomial operator-(const Polynomial& a) {
        Polynomial r = a;
        for (auto& t : r.terms_) t.coeff = neg(t.coeff);
        return r;
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        check_dims(a, b);
        std::vector<Monomial> t;
        t.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& x : a.terms_) {
            for (const auto& y : b.terms_) {
                Monomial m{Interval(x.coeff.lo() * y.coeff.lo()), x.exponents};
                for (std::size_t i = 0; i < m.exponents.size(); ++i) m.exponents[i] += y.exponents[i];
                t.push_back(std::move(m));
            }
        }
        return Polynomial(a.dim_, std::move(t), Nearest{});
    }

    friend Polynomial power(const Polynomial& base, unsigned k) {
        Polynomial r = constant(base.dim_, 1.0);
        for (unsigned i = 0; i < k; ++i) r = r * base;
        return r;
    }

private:
    struct Nearest {};

    Polynomial(std::size_t dimension, std::vector<Monomial> terms, Nearest)
        : dim_(dimension), terms_(std::move(terms)) {
        normalize(true);
    }

    static void check_dims(const Polynomial& a, const Polynomial& b) {
        if (a.dim_ != b.dim_) throw DimensionMismatch("polynomials of different dimension");
    }

    void normalize(bool nearest = false) {
        std::stable_sort(terms_.begin(), terms_.end(), [](const Monomial& a, const Monomial& b) {
            return detail::grlex_before(a.exponents, b.exponents);
        });
        std::vector<Monomial> merged;
        merged.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!merged.empty() && merged.back().exponents == t.exponents) {
                auto& c = merged.back().coeff;
                c = nearest ? Interval(c.lo() + t.coeff.lo()) : add(c, t.coeff);
            } else {
                merged.push_back(std::move(t));
            }
        }
        std::erase_if(merged, [](const Monomial& m) { return m.coeff == Interval(0.0); });
        terms_ = std::move(merged);
    }

    std::size_t dim_ = 0;
    std::vector<Monomial> terms_;
};

/// Square polynomial system over a bounded initial box.
struct PolySystem {
    std::string name;
    std::vector<std::string> variables;
    std::vector<Polynomial> equations;
    Box initial_box;

    std::size_t dimension() const noexcept { return variables.size(); }

    /// Throws DimensionMismatch / InvalidBound when the invariants fail.
    void validate() const {
        const std::size_t n = variables.size();
        if (n == 0) throw DimensionMismatch("system has no variables");
        if (equations.size() != n) {
            throw DimensionMismatch("system has " + std::to_string(equations.size()) +
                                    " equations for " + std::to_string(n) + " variables");
        }
        for (const auto& p : equations) {
            if (p.dimension() != n) throw DimensionMismatch("equation dimension differs from system");
        }
        if (initial_box.size() != n) throw DimensionMismatch("initial box dimension differs from system");
        if (!initial_box.is_bounded()) throw InvalidBound("initial box must be bounded");
    }
};

// ---------------------------------------------------------------------------
// Evaluation

/// Range enclosure of p over b by direct monomial evaluation.
inline Interval eval_interval(const Polynomial& p, std::span<const Interval> b) {
    if (b.size() != p.dimension()) throw DimensionMismatch("box dimension differs from polynomial");
    Interval sum(0.0);
    for (const auto& t : p.terms()) {
        Interval prod = t.coeff;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (t.exponents[j] != 0) prod = mul(prod, pow(b[j], t.exponents[j]));
        }
        sum = add(sum, prod);
    }
    return sum;
}

inline Interval eval_interval(const Polynomial& p, const Box& b) {
    return eval_interval(p, std::span<const Interval>(b.intervals()));
}

/// Thin enclosure of p at a point.
inline Interval eval_point(const Polynomial& p, std::span<const double> point) {
    if (point.size() != p.dimension()) throw DimensionMismatch("point dimension differs from polynomial");
    std::vector<Interval> b;
    b.reserve(point.size());
    for (double v : point) b.emplace_back(v);
    return eval_interval(p, std::span<const Interval>(b));
}

// ---------------------------------------------------------------------------
// Differentiation

inline Polynomial differentiate(const Polynomial& p, std::size_t var) {
    if (var >= p.dimension()) throw DimensionMismatch("differentiation variable out of range");
    std::vector<Monomial> out;
    for (const auto& t : p.terms()) {
        const unsigned e = t.exponents[var];
        if (e == 0) continue;
        Monomial m{scale(static_cast<double>(e), t.coeff), t.exponents};
        m.exponents[var] = e - 1;
        out.push_back(std::move(m));
    }
    return Polynomial(p.dimension(), std::move(out));
}

/// Symbolic Jacobian, entry (i, j) = ∂f_i/∂x_j.
class Jacobian {
public:
    Jacobian() = default;

    explicit Jacobian(const PolySystem& s) : n_(s.dimension()) {
        entries_.reserve(n_ * n_);
        for (const auto& f : s.equations)
            for (std::size_t j = 0; j < n_; ++j) entries_.push_back(differentiate(f, j));
    }

    std::size_t size() const noexcept { return n_; }
    const Polynomial& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<Polynomial> entries_;
};

inline Jacobian jacobian(const PolySystem& s) { return Jacobian(s); }

// ---------------------------------------------------------------------------
// Printing in the system-file grammar

inline std::string to_string(const Polynomial& p, const std::vector<std::string>& names) {
    if (p.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& t : p.terms()) {
        double c = t.coeff.is_point() ? t.coeff.lo() : midpoint(t.coeff);
        const bool negative = std::signbit(c);
        if (first) {
            if (negative) s += "-";
        } else {
            s += negative ? " - " : " + ";
        }
        first = false;
        c = std::fabs(c);
        std::string body;
        for (std::size_t j = 0; j < t.exponents.size(); ++j) {
            if (t.exponents[j] == 0) continue;
            if (!body.empty()) body += "*";
            body += names.at(j);
            if (t.exponents[j] > 1) body += "^" + std::to_string(t.exponents[j]);
        }
        if (body.empty()) {
            s += format_double(c);
        } else if (c == 1.0) {
            s += body;
        } else {
            s += format_double(c) + "*" + body;
        }
    }
    return s;
}

/// Renders a system in the file grammar; parse_system reads it back unchanged.
inline std::string to_string(const PolySystem& s) {
    std::string out;
    if (!s.name.empty()) out += "# " + s.name + "\n";
    out += "vars:";
    for (const auto& v : s.variables) out += " " + v;
    out += "\ninit:";
    for (std::size_t i = 0; i < s.variables.size(); ++i) {
        out += (i ? "; " : " ") + s.variables[i] + " in " + to_string(s.initial_box[i]);
    }
    out += "\n";
    for (const auto& f : s.equations) out += "eq: " + to_string(f, s.variables) + "\n";
    return out;
}

}  // namespace hsroot
