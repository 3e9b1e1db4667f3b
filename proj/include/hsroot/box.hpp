#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "hsroot/interval.hpp"

namespace hsroot {

/// Cartesian product of one interval per variable.
class Box {
public:
    Box() = default;
    explicit Box(std::vector<Interval> intervals) : iv_(std::move(intervals)) {}
    Box(std::initializer_list<Interval> intervals) : iv_(intervals) {}
    Box(std::size_t n, Interval fill) : iv_(n, fill) {}

    std::size_t size() const noexcept { return iv_.size(); }
    bool empty() const noexcept { return iv_.empty(); }

    Interval& operator[](std::size_t i) { return iv_[i]; }
    const Interval& operator[](std::size_t i) const { return iv_[i]; }

    auto begin() const noexcept { return iv_.begin(); }
    auto end() const noexcept { return iv_.end(); }

    const std::vector<Interval>& intervals() const noexcept { return iv_; }

    bool is_bounded() const noexcept {
        return std::all_of(iv_.begin(), iv_.end(), [](const Interval& x) { return x.is_bounded(); });
    }

    /// Largest component width (0 for the empty box).
    double max_width() const {
        double w = 0;
        for (const auto& x : iv_) w = std::max(w, width(x));
        return w;
    }

    std::vector<double> midpoint() const {
        std::vector<double> m(iv_.size());
        for (std::size_t i = 0; i < iv_.size(); ++i) m[i] = hsroot::midpoint(iv_[i]);
        return m;
    }

    bool contains(const std::vector<double>& p) const {
        if (p.size() != iv_.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (!iv_[i].contains(p[i])) return false;
        return true;
    }

    bool subset_of(const Box& other) const {
        if (other.size() != size()) return false;
        for (std::size_t i = 0; i < size(); ++i)
            if (!iv_[i].subset_of(other[i])) return false;
        return true;
    }

    /// Every component lies strictly inside the matching component of other.
    bool interior_of(const Box& other) const {
        if (other.size() != size()) return false;
        for (std::size_t i = 0; i < size(); ++i)
            if (!iv_[i].interior_of(other[i])) return false;
        return true;
    }

    friend bool operator==(const Box& a, const Box& b) { return a.iv_ == b.iv_; }

    /// Canonical order: lexicographic by lower bounds, then by upper bounds.
    friend bool operator<(const Box& a, const Box& b) {
        const std::size_t n = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i].lo() != b[i].lo()) return a[i].lo() < b[i].lo();
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i].hi() != b[i].hi()) return a[i].hi() < b[i].hi();
        }
        return a.size() < b.size();
    }

private:
    std::vector<Interval> iv_;
};

inline std::string to_string(const Box& b) {
    std::string s = "(";
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i) s += ", ";
        s += to_string(b[i]);
    }
    return s + ")";
}

}  // namespace hsroot
