#pragma once

/**
 * @file backtrack.hpp
 * @brief Merging terminal boxes upward through the bisection hierarchy.
 *
 * Repeated midpoint bisection of the initial box produces a dyadic grid: at
 * depth d, component i is cut into cells of width extent_i·2^-d anchored at
 * the initial lower bound. A terminal box is a grid cell; replacing it with
 * its enclosing cell one level up and dropping duplicates turns thousands of
 * micro-boxes into a few readable root boxes.
 *
 * All grid arithmetic is exact because grid endpoints are dyadic doubles.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "hsroot/box.hpp"
#include "hsroot/errors.hpp"
#include "hsroot/interval.hpp"

namespace hsroot {

struct GridContext {
    std::vector<double> anchor;  ///< lower bound of the initial box, per variable
    std::vector<double> extent;  ///< width of the initial box, per variable

    static GridContext from(const Box& initial) {
        GridContext g;
        for (const auto& x : initial) {
            const double w = x.hi() - x.lo();
            if (!(w > 0) || !std::isfinite(w)) throw InvalidBound("grid needs a bounded box of positive width");
            g.anchor.push_back(x.lo());
            g.extent.push_back(w);
        }
        return g;
    }

    std::size_t size() const noexcept { return anchor.size(); }

    /// Width of a depth-d cell along variable i.
    double cell_width(std::size_t i, int depth) const { return std::ldexp(extent[i], -depth); }

    /// The depth-d cell with integer index k along variable i.
    Interval cell(std::size_t i, int depth, double k) const {
        const double w = cell_width(i, depth);
        return Interval(anchor[i] + k * w, anchor[i] + (k + 1) * w, Interval::Unchecked{});
    }
};

/// Deepest level considered. Cell indices stay below 2^50, so cell bounds
/// are computed exactly whenever they are representable.
inline constexpr int max_grid_depth = 50;

namespace detail {

/// The depth-d cell along variable i containing x, if there is one. The index
/// estimate can be off by one when lo - anchor rounds, so neighbours are tried.
inline std::optional<Interval> try_enclosing_cell(const GridContext& g, std::size_t i, int depth,
                                                  const Interval& x) {
    if (depth == 0) {
        const Interval whole = g.cell(i, 0, 0);
        return x.subset_of(whole) ? std::optional<Interval>(whole) : std::nullopt;
    }
    const double k = std::floor((x.lo() - g.anchor[i]) / g.cell_width(i, depth));
    for (double c : {k, k - 1, k + 1}) {
        const Interval cell = g.cell(i, depth, c);
        if (x.subset_of(cell)) return cell;
    }
    return std::nullopt;
}

/// Depth of the smallest grid cell containing x along variable i, at most max_depth.
inline int enclosing_depth(const GridContext& g, std::size_t i, const Interval& x, int max_depth) {
    int depth = 0;
    for (int d = 1; d <= max_depth; ++d) {
        if (!try_enclosing_cell(g, i, d, x)) break;
        depth = d;
    }
    return depth;
}

/// Depth of a grid cell along variable i, or -1 if x is not a grid cell.
inline int cell_depth(const GridContext& g, std::size_t i, const Interval& x) {
    const double w = x.hi() - x.lo();
    if (!(w > 0)) return -1;
    int exp = 0;
    const double mant = std::frexp(g.extent[i] / w, &exp);
    if (mant != 0.5) return -1;  // ratio is not a power of two
    const int depth = exp - 1;
    if (depth < 0 || depth > max_grid_depth) return -1;
    const auto cell = try_enclosing_cell(g, i, depth, x);
    return cell && *cell == x ? depth : -1;
}

}  // namespace detail

/// Depth of a box whose components are all grid cells of one common depth.
/// Throws NotOnGrid otherwise.
inline int grid_depth(const Box& b, const GridContext& g) {
    if (b.size() != g.size()) throw DimensionMismatch("box dimension differs from grid");
    int depth = -1;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const int d = detail::cell_depth(g, i, b[i]);
        if (d < 0) throw NotOnGrid("component " + to_string(b[i]) + " is not a grid cell");
        if (depth >= 0 && d != depth) throw NotOnGrid("components lie on different grid levels");
        depth = d;
    }
    return depth;
}

/**
 * The cell one level up that contains b. Along each variable the parent has
 * width 2·width(b_i) and starts at lo_i when (lo_i - anchor_i)/(2·width) is an
 * integer, otherwise at lo_i - width. The initial box is its own parent.
 */
inline Box parent_box(const Box& b, const GridContext& g) {
    if (b.size() != g.size()) throw DimensionMismatch("box dimension differs from grid");
    std::vector<Interval> out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const int depth = detail::cell_depth(g, i, b[i]);
        if (depth < 0) throw NotOnGrid("component " + to_string(b[i]) + " is not a grid cell");
        out[i] = depth == 0 ? b[i] : *detail::try_enclosing_cell(g, i, depth - 1, b[i]);
    }
    return Box(std::move(out));
}

/**
 * Smallest box of uniform grid depth, no deeper than max_depth, that contains
 * b: each component goes to its smallest enclosing cell, then all components
 * are lifted to the coarsest of those depths. Only ever enlarges b.
 */
inline Box snap_to_grid(const Box& b, const GridContext& g, int max_depth = max_grid_depth) {
    if (b.size() != g.size()) throw DimensionMismatch("box dimension differs from grid");
    int depth = std::clamp(max_depth, 0, max_grid_depth);
    for (std::size_t i = 0; i < b.size(); ++i) depth = std::min(depth, detail::enclosing_depth(g, i, b[i], depth));
    std::vector<Interval> out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto cell = detail::try_enclosing_cell(g, i, depth, b[i]);
        if (!cell) throw NotOnGrid("component " + to_string(b[i]) + " lies outside the initial box");
        out[i] = *cell;
    }
    return Box(std::move(out));
}

/// Depth of the grid level whose cells are no wider than `width` along every
/// variable (the level a bisection search stops at for that target width).
inline int depth_for_width(const GridContext& g, double width) {
    int depth = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        while (depth < max_grid_depth && g.cell_width(i, depth) > width) ++depth;
    return depth;
}

struct MergeLevel {
    double width = 0;
    std::size_t count = 0;
};

struct MergeResult {
    std::vector<MergeLevel> levels;  ///< first entry describes the input
    std::vector<Box> boxes;          ///< final level, sorted canonically
};

namespace detail {

// Widest cell of a grid level across variables.
inline double level_width(const GridContext& g, int level) {
    double w = 0;
    for (std::size_t i = 0; i < g.size(); ++i) w = std::max(w, g.cell_width(i, level));
    return w;
}

inline void sort_unique(std::vector<Box>& boxes) {
    std::sort(boxes.begin(), boxes.end());
    boxes.erase(std::unique(boxes.begin(), boxes.end()), boxes.end());
}

}  // namespace detail

/**
 * Backtracks grid-aligned boxes level by level, deduplicating exact copies.
 * The first level is the depth of the finest input box; each step lifts every
 * box deeper than the new level to its parent. Stops when the level width
 * reaches stop_width, at the initial box, or (if stop_on_plateau) as soon as
 * two consecutive levels have the same count.
 */
inline MergeResult merge_to_width(std::vector<Box> boxes, const GridContext& g, double stop_width,
                                  bool stop_on_plateau = true) {
    int level = 0;
    for (const auto& b : boxes) level = std::max(level, grid_depth(b, g));

    MergeResult r;
    detail::sort_unique(boxes);
    if (boxes.empty()) {
        r.levels.push_back({0, 0});
        return r;
    }
    r.levels.push_back({detail::level_width(g, level), boxes.size()});

    while (level > 0 && r.levels.back().width < stop_width) {
        --level;
        for (auto& b : boxes) {
            if (grid_depth(b, g) > level) b = parent_box(b, g);
        }
        detail::sort_unique(boxes);
        const MergeLevel next{detail::level_width(g, level), boxes.size()};
        const bool plateau = next.count == r.levels.back().count;
        r.levels.push_back(next);
        if (stop_on_plateau && plateau) break;
    }
    r.boxes = std::move(boxes);
    return r;
}

/**
 * Groups boxes that touch or overlap (closed intervals meeting in every
 * component) into connected components and returns the hull of each,
 * repeating until no two hulls meet. A root lying on a face shared by several
 * grid cells ends up in exactly one output box.
 */
inline std::vector<Box> cluster_touching(std::vector<Box> boxes) {
    auto meets = [](const Box& a, const Box& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].hi() < b[i].lo() || b[i].hi() < a[i].lo()) return false;
        return true;
    };
    for (;;) {
        const std::size_t n = boxes.size();
        std::vector<std::size_t> parent(n);
        for (std::size_t k = 0; k < n; ++k) parent[k] = k;
        auto find = [&](std::size_t k) {
            while (parent[k] != k) k = parent[k] = parent[parent[k]];
            return k;
        };

        // Sweep along the first variable; only boxes whose first components
        // overlap can meet.
        std::vector<std::size_t> order(n);
        for (std::size_t k = 0; k < n; ++k) order[k] = k;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return boxes[a][0].lo() < boxes[b][0].lo(); });
        bool joined = false;
        for (std::size_t x = 0; x < n; ++x) {
            const Box& a = boxes[order[x]];
            for (std::size_t y = x + 1; y < n && boxes[order[y]][0].lo() <= a[0].hi(); ++y) {
                if (!meets(a, boxes[order[y]])) continue;
                const std::size_t ra = find(order[x]), rb = find(order[y]);
                if (ra != rb) {
                    parent[std::max(ra, rb)] = std::min(ra, rb);
                    joined = true;
                }
            }
        }
        if (!joined) break;

        std::vector<std::optional<Box>> hulls(n);
        for (std::size_t k = 0; k < n; ++k) {
            auto& h = hulls[find(k)];
            if (!h) {
                h = boxes[k];
                continue;
            }
            for (std::size_t i = 0; i < boxes[k].size(); ++i) (*h)[i] = hull((*h)[i], boxes[k][i]);
        }
        boxes.clear();
        for (auto& h : hulls)
            if (h) boxes.push_back(std::move(*h));
    }
    std::sort(boxes.begin(), boxes.end());
    return boxes;
}

}  // namespace hsroot
