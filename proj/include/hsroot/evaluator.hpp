#pragma once

// Flattened polynomial evaluation for the solver's inner loops.
//
// A CompiledPolynomial stores its monomials as ranges of (variable, exponent)
// factors. Evaluation reads powers from per-variable rows, so the powers of a
// box component are computed once and shared by every equation, every
// Jacobian entry and, during bisection, every child that reuses that half.
// Results are identical to eval_interval on the same box.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hsroot/interval.hpp"
#include "hsroot/poly.hpp"

namespace hsroot {

class CompiledPolynomial {
public:
    CompiledPolynomial() = default;

    explicit CompiledPolynomial(const Polynomial& p) {
        for (const auto& t : p.terms()) {
            Term term{t.coeff, static_cast<std::uint32_t>(factors_.size()), 0};
            for (std::size_t j = 0; j < t.exponents.size(); ++j) {
                if (t.exponents[j] != 0) {
                    factors_.push_back({static_cast<std::uint32_t>(j), t.exponents[j]});
                }
            }
            term.end = static_cast<std::uint32_t>(factors_.size());
            terms_.push_back(term);
        }
    }

    /// rows[j][k] must hold pow(X_j, k) for every exponent k that occurs.
    Interval eval(const Interval* const* rows) const noexcept {
        Interval sum(0.0);
        for (const auto& t : terms_) {
            Interval prod = t.coeff;
            for (std::uint32_t f = t.begin; f < t.end; ++f) {
                prod = mul(prod, rows[factors_[f].var][factors_[f].exp]);
            }
            sum = add(sum, prod);
        }
        return sum;
    }

    bool is_zero() const noexcept { return terms_.empty(); }

private:
    struct Term {
        Interval coeff;
        std::uint32_t begin;
        std::uint32_t end;
    };
    struct Factor {
        std::uint32_t var;
        unsigned exp;
    };

    std::vector<Term> terms_;
    std::vector<Factor> factors_;
};

/// Compiled equations and Jacobian of a system, plus power-table helpers.
class SystemEvaluator {
public:
    SystemEvaluator() = default;

    explicit SystemEvaluator(const PolySystem& s) : SystemEvaluator(s, Jacobian(s)) {}

    SystemEvaluator(const PolySystem& s, const Jacobian& jac)
        : n_(s.dimension()), max_degree_(s.dimension(), 0) {
        if (jac.size() != n_) throw DimensionMismatch("Jacobian size differs from system");
        for (std::size_t i = 0; i < n_; ++i) {
            equations_.emplace_back(s.equations[i]);
            for (std::size_t j = 0; j < n_; ++j) {
                max_degree_[j] = std::max(max_degree_[j], s.equations[i].degree_in(j));
            }
        }
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) jacobian_.emplace_back(jac(i, j));
        stride_ = 1;
        for (unsigned d : max_degree_) stride_ = std::max<std::size_t>(stride_, d + 1);
    }

    std::size_t dimension() const noexcept { return n_; }

    /// Length of one power row; rows of a table are laid out with this stride.
    std::size_t stride() const noexcept { return stride_; }

    /// Fills row[k] = pow(x, k) for k < stride().
    void fill_powers(const Interval& x, Interval* row) const noexcept {
        row[0] = Interval(1.0, 1.0, Interval::Unchecked{});
        for (std::size_t k = 1; k < stride_; ++k) row[k] = pow(x, static_cast<unsigned>(k));
    }

    /// Power table of a box: n rows of stride() entries each.
    void fill_table(std::span<const Interval> box, std::vector<Interval>& table,
                    std::vector<const Interval*>& rows) const {
        table.resize(n_ * stride_);
        rows.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            fill_powers(box[j], table.data() + j * stride_);
            rows[j] = table.data() + j * stride_;
        }
    }

    Interval equation(std::size_t i, const Interval* const* rows) const noexcept {
        return equations_[i].eval(rows);
    }

    Interval jacobian(std::size_t i, std::size_t j, const Interval* const* rows) const noexcept {
        return jacobian_[i * n_ + j].eval(rows);
    }

    /// True when every equation's enclosure contains zero. Stops at the first
    /// equation that excludes zero.
    bool feasible(const Interval* const* rows) const noexcept {
        for (const auto& e : equations_)
            if (!e.eval(rows).contains_zero()) return false;
        return true;
    }

private:
    std::size_t n_ = 0;
    std::size_t stride_ = 1;
    std::vector<unsigned> max_degree_;
    std::vector<CompiledPolynomial> equations_;
    std::vector<CompiledPolynomial> jacobian_;
};

}  // namespace hsroot
