#pragma once

/**
 * @file hansen.hpp
 * @brief Hansen-Sengupta interval Gauss-Seidel contractor and the Krawczyk
 * operator.
 *
 * Both precondition the mean-value form F(x) + J(X)(z - x) = 0 with an
 * approximate inverse A of the midpoint Jacobian and work with
 * g = A·F(x), M = A·J(X). The Hansen-Sengupta step solves component i of
 * g + M(z - x) = 0 for z_i,
 *
 *     Y_i  = x_i + (-g_i - Σ_{j<i} M_ij (X'_j - x_j) - Σ_{j>i} M_ij (X_j - x_j)) / M_ii
 *     X'_i = Y_i ∩ X_i
 *
 * using extended division when 0 ∈ M_ii.
 */

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "hsroot/box.hpp"
#include "hsroot/evaluator.hpp"
#include "hsroot/interval.hpp"
#include "hsroot/linalg.hpp"
#include "hsroot/poly.hpp"

namespace hsroot {

struct ContractionOutcome {
    enum class Kind {
        empty,    ///< the input box provably holds no root
        boxes,    ///< roots of the input lie in the union of `boxes`
        skipped,  ///< singular midpoint Jacobian; input passes through unchanged
    };

    Kind kind = Kind::skipped;
    std::vector<Box> boxes;
    /// Single output box strictly inside the input: a root exists in it.
    bool existence_certified = false;
};

namespace detail {

/// Preconditioned linearisation shared by both operators.
struct Linearisation {
    std::vector<double> center;
    std::vector<Interval> g;  // A·F(x)
    IntervalMatrix m;         // A·J(X)
};

inline std::optional<Linearisation> linearise(const SystemEvaluator& ev, const Box& b) {
    const std::size_t n = ev.dimension();
    std::vector<Interval> table;
    std::vector<const Interval*> rows;

    ev.fill_table(b.intervals(), table, rows);
    IntervalMatrix jx(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) jx(i, j) = ev.jacobian(i, j, rows.data());

    PointMatrix inv;
    try {
        inv = gauss_jordan_inverse(mid_matrix(jx));
    } catch (const SingularMatrix&) {
        return std::nullopt;
    } catch (const UnboundedInterval&) {
        return std::nullopt;
    }
    for (double v : inv.data())
        if (!std::isfinite(v)) return std::nullopt;

    Linearisation lin;
    lin.center = b.midpoint();
    std::vector<Interval> point(n);
    for (std::size_t j = 0; j < n; ++j) point[j] = Interval(lin.center[j]);
    ev.fill_table(point, table, rows);
    std::vector<Interval> fx(n);
    for (std::size_t i = 0; i < n; ++i) fx[i] = ev.equation(i, rows.data());

    const IntervalMatrix a = to_interval(inv);
    lin.g = imatvec(a, fx);
    lin.m = imatmul(a, jx);
    return lin;
}

class GaussSeidelSweep {
public:
    GaussSeidelSweep(const Linearisation& lin, std::vector<Box>& out) : lin_(lin), out_(out) {}

    // At most one fork per sweep; later splits are hulled.
    void run(std::size_t i, Box cur, bool can_fork) {
        const std::size_t n = cur.size();
        for (; i < n; ++i) {
            const double xi = lin_.center[i];
            Interval p = neg(lin_.g[i]);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                p = sub(p, mul(lin_.m(i, j), sub(cur[j], Interval(lin_.center[j]))));
            }
            const ExtendedDivResult q = div_extended(p, lin_.m(i, i));
            switch (q.kind()) {
                case ExtendedDivResult::Kind::whole:
                    break;
                case ExtendedDivResult::Kind::empty:
                    return;
                case ExtendedDivResult::Kind::single: {
                    auto next = intersect(add(Interval(xi), q.first()), cur[i]);
                    if (!next) return;
                    cur[i] = *next;
                    break;
                }
                case ExtendedDivResult::Kind::split: {
                    auto low = intersect(add(Interval(xi), q.first()), cur[i]);
                    auto high = intersect(add(Interval(xi), q.second()), cur[i]);
                    if (low && high) {
                        if (can_fork) {
                            Box other = cur;
                            cur[i] = *low;
                            other[i] = *high;
                            run(i + 1, std::move(cur), false);
                            run(i + 1, std::move(other), false);
                            return;
                        }
                        cur[i] = hull(*low, *high);
                    } else if (low) {
                        cur[i] = *low;
                    } else if (high) {
                        cur[i] = *high;
                    } else {
                        return;
                    }
                    break;
                }
            }
        }
        out_.push_back(std::move(cur));
    }

private:
    const Linearisation& lin_;
    std::vector<Box>& out_;
};

}  // namespace detail

/// One Hansen-Sengupta sweep over a bounded box.
inline ContractionOutcome contract(const SystemEvaluator& ev, const Box& b) {
    ContractionOutcome out;
    const auto lin = detail::linearise(ev, b);
    if (!lin) {
        out.kind = ContractionOutcome::Kind::skipped;
        out.boxes = {b};
        return out;
    }
    detail::GaussSeidelSweep sweep(*lin, out.boxes);
    sweep.run(0, b, true);
    if (out.boxes.empty()) {
        out.kind = ContractionOutcome::Kind::empty;
        return out;
    }
    out.kind = ContractionOutcome::Kind::boxes;
    out.existence_certified = out.boxes.size() == 1 && out.boxes.front().interior_of(b);
    return out;
}

/// Convenience overload; compiles the system on every call.
inline ContractionOutcome contract(const PolySystem& s, const Jacobian& jac, const Box& b) {
    return contract(SystemEvaluator(s, jac), b);
}

/**
 * K(X) ∩ X with K(X) = x - A·F(x) + (I - A·J(X))(X - x).
 * Returns nullopt when the intersection is empty or the midpoint Jacobian is
 * singular.
 */
inline std::optional<Box> krawczyk(const SystemEvaluator& ev, const Box& b) {
    const auto lin = detail::linearise(ev, b);
    if (!lin) return std::nullopt;
    const std::size_t n = b.size();
    std::vector<Interval> dx(n);
    for (std::size_t j = 0; j < n; ++j) dx[j] = sub(b[j], Interval(lin->center[j]));
    Box k(n, Interval());
    for (std::size_t i = 0; i < n; ++i) {
        Interval acc = sub(Interval(lin->center[i]), lin->g[i]);
        for (std::size_t j = 0; j < n; ++j) {
            const Interval e = sub(Interval(i == j ? 1.0 : 0.0), lin->m(i, j));
            acc = add(acc, mul(e, dx[j]));
        }
        auto cut = intersect(acc, b[i]);
        if (!cut) return std::nullopt;
        k[i] = *cut;
    }
    return k;
}

inline std::optional<Box> krawczyk(const PolySystem& s, const Jacobian& jac, const Box& b) {
    return krawczyk(SystemEvaluator(s, jac), b);
}

}  // namespace hsroot
