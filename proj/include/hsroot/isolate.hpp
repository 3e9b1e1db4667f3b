#pragma once

// End-to-end root isolation: search, then backtrack the terminal boxes to
// readable root boxes.

#include <algorithm>
#include <vector>

#include "hsroot/backtrack.hpp"
#include "hsroot/bnb.hpp"
#include "hsroot/poly.hpp"

namespace hsroot {

struct IsolateOptions {
    bool backtrack = true;
    /// Hull merged boxes that touch, so a root on a shared face is reported once.
    bool cluster = true;
    /// Stop backtracking on the first level whose count repeats.
    bool stop_on_plateau = true;
};

struct Isolation {
    SolveResult search;
    std::vector<MergeLevel> merge_levels;  ///< empty when backtracking is off
    std::vector<RootBox> roots;
};

namespace detail {

// A reported box is certified when some certified terminal box lies inside
// it, and degenerate when some frozen terminal box does.
inline std::vector<RootBox> tag_boxes(std::vector<Box> boxes, const std::vector<RootBox>& terminal) {
    std::vector<RootBox> out;
    out.reserve(boxes.size());
    for (auto& b : boxes) out.push_back({std::move(b), false, false});
    for (const auto& t : terminal) {
        if (!t.certified && !t.degenerate) continue;
        for (auto& r : out) {
            if (!t.box.subset_of(r.box)) continue;
            r.certified = r.certified || t.certified;
            r.degenerate = r.degenerate || t.degenerate;
        }
    }
    return out;
}

}  // namespace detail

inline Isolation isolate(const PolySystem& s, const SystemEvaluator& ev, const SolverConfig& cfg,
                         const IsolateOptions& opt = {}) {
    Isolation iso;
    iso.search = solve(s, ev, cfg);
    if (!opt.backtrack || iso.search.boxes.empty()) {
        iso.roots = iso.search.boxes;
        return iso;
    }

    const GridContext grid = GridContext::from(s.initial_box);
    const int depth = depth_for_width(grid, cfg.target_width);
    std::vector<Box> snapped;
    snapped.reserve(iso.search.boxes.size());
    for (const auto& b : iso.search.boxes) snapped.push_back(snap_to_grid(b.box, grid, depth));

    MergeResult merged = merge_to_width(std::move(snapped), grid, s.initial_box.max_width(), opt.stop_on_plateau);
    iso.merge_levels = std::move(merged.levels);
    std::vector<Box> boxes = opt.cluster ? cluster_touching(std::move(merged.boxes)) : std::move(merged.boxes);
    iso.roots = detail::tag_boxes(std::move(boxes), iso.search.boxes);
    return iso;
}

inline Isolation isolate(const PolySystem& s, const SolverConfig& cfg, const IsolateOptions& opt = {}) {
    return isolate(s, SystemEvaluator(s), cfg, opt);
}

}  // namespace hsroot
