#pragma once

/**
 * @file bnb.hpp
 * @brief Global branch-and-bound search over the initial box.
 *
 * Every round bisects each surviving box in all n coordinates (2^n
 * children), drops children on which some equation's enclosure excludes
 * zero, and optionally runs one Hansen-Sengupta sweep on the rest. The
 * search stops when nothing survives (no real root in the box), when every
 * box is at most the target width, or when a budget runs out.
 */

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "hsroot/box.hpp"
#include "hsroot/errors.hpp"
#include "hsroot/evaluator.hpp"
#include "hsroot/hansen.hpp"
#include "hsroot/interval.hpp"
#include "hsroot/parallel.hpp"
#include "hsroot/poly.hpp"

namespace hsroot {

struct SolverConfig {
    double target_width = 1.0 / 1024;
    /// Run Hansen-Sengupta from this round on (1-based; 0 means every round).
    std::optional<int> hs_enable_round;
    /// Run Hansen-Sengupta on boxes no wider than this.
    std::optional<double> hs_enable_width = 1.0;
    bool hs_enabled = true;
    /// Keep the contracted boxes. When false, the contractor is only used to
    /// discard boxes and survivors stay on the bisection grid.
    bool hs_contract_output = true;
    int max_rounds = 24;
    std::size_t max_boxes = 200'000'000;
    std::size_t worker_count = 1;
    std::size_t batch_size = 256;

    void validate() const {
        if (!(target_width > 0)) throw ConfigError("target width must be positive");
        if (max_boxes < 1) throw ConfigError("max_boxes must be at least 1");
        if (max_rounds < 0) throw ConfigError("max_rounds must be non-negative");
        if (worker_count < 1) throw ConfigError("worker_count must be at least 1");
        if (hs_enable_round && *hs_enable_round < 0) throw ConfigError("hs round must be >= 0");
        if (hs_enable_width && !(*hs_enable_width > 0)) throw ConfigError("hs width must be positive");
    }
};

struct RoundStats {
    int round = 0;
    std::size_t boxes_in = 0;
    std::size_t boxes_after_filter = 0;
    std::size_t boxes_after_hs = 0;
    double width = 0;
    double elapsed_seconds = 0;
};

struct RootBox {
    Box box;
    /// A root provably exists in the box.
    bool certified = false;
    /// The box could not be bisected further at double resolution.
    bool degenerate = false;

    friend bool operator==(const RootBox&, const RootBox&) = default;
};

enum class SolveStatus { no_real_solution, width_reached, budget_exhausted };

inline std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::no_real_solution: return "NoRealSolution";
        case SolveStatus::width_reached: return "WidthReached";
        case SolveStatus::budget_exhausted: return "BudgetExhausted";
    }
    return "?";
}

struct SolveResult {
    SolveStatus status = SolveStatus::budget_exhausted;
    std::vector<RootBox> boxes;
    std::vector<RoundStats> stats;
};

// ---------------------------------------------------------------------------

namespace detail {

// Bit j of the child index, counted from the most significant end, selects
// the upper half of component j.
inline bool upper_half(std::size_t child, std::size_t j, std::size_t n) {
    return (child >> (n - 1 - j)) & 1u;
}

struct Halves {
    std::vector<Interval> low, high;
};

inline Halves split_components(const Box& b) {
    Halves h;
    h.low.reserve(b.size());
    h.high.reserve(b.size());
    for (const auto& x : b) {
        const double m = midpoint(x);
        if (!(x.lo() < m && m < x.hi())) {
            throw DegenerateInterval("component " + to_string(x) + " cannot be bisected");
        }
        h.low.push_back(Interval(x.lo(), m, Interval::Unchecked{}));
        h.high.push_back(Interval(m, x.hi(), Interval::Unchecked{}));
    }
    return h;
}

}  // namespace detail

/**
 * Splits every component at its midpoint and returns all 2^n combinations in
 * binary counting order (first component most significant).
 *
 * Throws DegenerateInterval if some midpoint coincides with an endpoint.
 */
inline std::vector<Box> bisect_all(const Box& b) {
    if (!b.is_bounded()) throw UnboundedInterval("cannot bisect an unbounded box");
    const std::size_t n = b.size();
    if (n >= 8 * sizeof(std::size_t) - 1) throw DimensionMismatch("dimension too large to bisect");
    const auto h = detail::split_components(b);
    const std::size_t count = std::size_t{1} << n;
    std::vector<Box> out;
    out.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
        std::vector<Interval> iv(n);
        for (std::size_t j = 0; j < n; ++j) iv[j] = detail::upper_half(c, j, n) ? h.high[j] : h.low[j];
        out.emplace_back(std::move(iv));
    }
    return out;
}

/// Keeps the boxes on which every equation's enclosure contains zero, in order.
inline std::vector<Box> filter_feasible(const SystemEvaluator& ev, const std::vector<Box>& boxes) {
    std::vector<Box> out;
    std::vector<Interval> table;
    std::vector<const Interval*> rows;
    for (const auto& b : boxes) {
        if (b.size() != ev.dimension()) throw DimensionMismatch("box dimension differs from system");
        ev.fill_table(b.intervals(), table, rows);
        if (ev.feasible(rows.data())) out.push_back(b);
    }
    return out;
}

inline std::vector<Box> filter_feasible(const PolySystem& s, const std::vector<Box>& boxes) {
    return filter_feasible(SystemEvaluator(s), boxes);
}

namespace detail {

struct RoundCounters {
    std::size_t after_filter = 0;
    std::size_t after_hs = 0;
};

inline bool hs_active(const SolverConfig& cfg, int round, double child_width) {
    if (!cfg.hs_enabled) return false;
    if (cfg.hs_enable_round && round >= *cfg.hs_enable_round) return true;
    if (cfg.hs_enable_width && child_width <= *cfg.hs_enable_width) return true;
    return false;
}

/// Scratch space owned by one worker.
struct Workspace {
    std::vector<Interval> low_powers, high_powers;
    std::vector<const Interval*> rows;
};

// bisect_all + filter_feasible + optional contraction for one parent box.
// Children are evaluated straight from per-half power tables, without
// materialising the ones that get filtered out.
inline void expand(const SystemEvaluator& ev, const SolverConfig& cfg, int round,
                   const RootBox& parent, Workspace& ws, std::vector<RootBox>& out,
                   RoundCounters& counters) {
    const std::size_t n = parent.box.size();
    // Components too narrow to bisect stay whole; their "upper half" bit is
    // skipped so each remaining child is produced once.
    Halves h;
    std::size_t frozen_mask = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const Interval& x = parent.box[j];
        const double m = midpoint(x);
        if (x.lo() < m && m < x.hi()) {
            h.low.push_back(Interval(x.lo(), m, Interval::Unchecked{}));
            h.high.push_back(Interval(m, x.hi(), Interval::Unchecked{}));
        } else {
            h.low.push_back(x);
            h.high.push_back(x);
            frozen_mask |= std::size_t{1} << (n - 1 - j);
        }
    }
    const std::size_t count = std::size_t{1} << n;
    if (frozen_mask == count - 1) {
        RootBox frozen = parent;
        frozen.degenerate = true;
        out.push_back(std::move(frozen));
        ++counters.after_filter;
        ++counters.after_hs;
        return;
    }

    const std::size_t stride = ev.stride();
    ws.low_powers.resize(n * stride);
    ws.high_powers.resize(n * stride);
    ws.rows.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        ev.fill_powers(h.low[j], ws.low_powers.data() + j * stride);
        ev.fill_powers(h.high[j], ws.high_powers.data() + j * stride);
    }

    for (std::size_t c = 0; c < count; ++c) {
        if (c & frozen_mask) continue;
        for (std::size_t j = 0; j < n; ++j) {
            ws.rows[j] = (upper_half(c, j, n) ? ws.high_powers.data() : ws.low_powers.data()) + j * stride;
        }
        if (!ev.feasible(ws.rows.data())) continue;
        ++counters.after_filter;

        std::vector<Interval> iv(n);
        for (std::size_t j = 0; j < n; ++j) iv[j] = upper_half(c, j, n) ? h.high[j] : h.low[j];
        Box child(std::move(iv));

        if (!hs_active(cfg, round, child.max_width())) {
            out.push_back({std::move(child), false, false});
            ++counters.after_hs;
            continue;
        }
        ContractionOutcome hs = contract(ev, child);
        switch (hs.kind) {
            case ContractionOutcome::Kind::empty:
                break;
            case ContractionOutcome::Kind::skipped:
                out.push_back({std::move(child), false, false});
                ++counters.after_hs;
                break;
            case ContractionOutcome::Kind::boxes:
                // A forked child still counts once: the statistic tracks
                // children that survive, not the pieces they become.
                ++counters.after_hs;
                if (cfg.hs_contract_output) {
                    for (auto& b : hs.boxes) out.push_back({std::move(b), hs.existence_certified, false});
                } else {
                    out.push_back({std::move(child), hs.existence_certified, false});
                }
                break;
        }
    }
}

inline double max_active_width(const std::vector<RootBox>& boxes) {
    double w = 0;
    for (const auto& b : boxes)
        if (!b.degenerate) w = std::max(w, b.box.max_width());
    return w;
}

inline void canonicalize(std::vector<RootBox>& boxes) {
    std::sort(boxes.begin(), boxes.end(), [](const RootBox& a, const RootBox& b) {
        if (a.box == b.box) return a.certified > b.certified;
        return a.box < b.box;
    });
    boxes.erase(std::unique(boxes.begin(), boxes.end(),
                            [](const RootBox& a, const RootBox& b) { return a.box == b.box; }),
                boxes.end());
}

}  // namespace detail

/// Runs the search. Output boxes are sorted canonically, so the result does
/// not depend on worker_count.
inline SolveResult solve(const PolySystem& s, const SystemEvaluator& ev, const SolverConfig& cfg) {
    s.validate();
    cfg.validate();
    using clock = std::chrono::steady_clock;

    SolveResult result;
    std::vector<RootBox> current{{s.initial_box, false, false}};
    int round = 0;

    for (;;) {
        if (current.empty()) {
            result.status = SolveStatus::no_real_solution;
            break;
        }
        if (detail::max_active_width(current) <= cfg.target_width) {
            result.status = SolveStatus::width_reached;
            break;
        }
        if (round >= cfg.max_rounds) {
            result.status = SolveStatus::budget_exhausted;
            break;
        }
        ++round;
        const auto start = clock::now();

        const std::size_t batches = (current.size() + cfg.batch_size - 1) / cfg.batch_size;
        std::vector<std::vector<RootBox>> outputs(batches);
        std::vector<detail::RoundCounters> counters(batches);
        std::vector<detail::Workspace> spaces(std::min(cfg.worker_count, batches));
        for_each_batch(current.size(), cfg.batch_size, cfg.worker_count,
                       [&](std::size_t batch, std::size_t begin, std::size_t end, std::size_t worker) {
                           for (std::size_t k = begin; k < end; ++k) {
                               detail::expand(ev, cfg, round, current[k], spaces[worker],
                                              outputs[batch], counters[batch]);
                           }
                       });

        RoundStats st;
        st.round = round;
        st.boxes_in = current.size();
        std::size_t total = 0;
        for (std::size_t b = 0; b < batches; ++b) {
            st.boxes_after_filter += counters[b].after_filter;
            st.boxes_after_hs += counters[b].after_hs;
            total += outputs[b].size();
        }
        std::vector<RootBox> next;
        next.reserve(total);
        for (auto& o : outputs) {
            std::move(o.begin(), o.end(), std::back_inserter(next));
            std::vector<RootBox>().swap(o);
        }
        detail::canonicalize(next);
        st.width = detail::max_active_width(next);
        st.elapsed_seconds = std::chrono::duration<double>(clock::now() - start).count();
        result.stats.push_back(st);
        current = std::move(next);

        if (current.size() > cfg.max_boxes) {
            result.status = SolveStatus::budget_exhausted;
            break;
        }
    }
    result.boxes = std::move(current);
    return result;
}

inline SolveResult solve(const PolySystem& s, const SolverConfig& cfg) {
    return solve(s, SystemEvaluator(s), cfg);
}

}  // namespace hsroot
