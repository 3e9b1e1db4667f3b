#pragma once

/**
 * @file linalg.hpp
 * @brief Dense interval and point matrices for the Newton-type contractors.
 *
 * Sizes are small (n <= 9 in practice) so everything is plain row-major
 * storage with naive O(n^3) loops.
 */

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hsroot/errors.hpp"
#include "hsroot/interval.hpp"

namespace hsroot {

template <typename T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) throw DimensionMismatch("matrix entry count mismatch");
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    const std::vector<T>& data() const noexcept { return data_; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntervalMatrix = Matrix<Interval>;
using PointMatrix = Matrix<double>;

inline PointMatrix identity(std::size_t n) {
    PointMatrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

inline IntervalMatrix to_interval(const PointMatrix& a) {
    IntervalMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = Interval(a(i, j));
    return m;
}

/// C = A·B with outward-rounded accumulation.
inline IntervalMatrix imatmul(const IntervalMatrix& a, const IntervalMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("imatmul: inner dimensions differ");
    IntervalMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Interval acc(0.0);
            for (std::size_t u = 0; u < a.cols(); ++u) acc = add(acc, mul(a(i, u), b(u, j)));
            c(i, j) = acc;
        }
    }
    return c;
}

inline std::vector<Interval> imatvec(const IntervalMatrix& a, std::span<const Interval> v) {
    if (a.cols() != v.size()) throw DimensionMismatch("imatvec: dimensions differ");
    std::vector<Interval> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Interval acc(0.0);
        for (std::size_t u = 0; u < a.cols(); ++u) acc = add(acc, mul(a(i, u), v[u]));
        out[i] = acc;
    }
    return out;
}

inline PointMatrix mid_matrix(const IntervalMatrix& a) {
    PointMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = midpoint(a(i, j));
    return m;
}

/// Pivots smaller than this fraction of the largest |entry| count as zero.
inline constexpr double pivot_epsilon = 1e-12;

/**
 * Inverse by Gauss-Jordan elimination on [A | I] with partial (column)
 * pivoting. Plain floating point: the result is an approximate inverse used
 * as a preconditioner, not a rigorous enclosure.
 *
 * Throws SingularMatrix when a selected pivot is below pivot_epsilon·max|A|.
 */
inline PointMatrix gauss_jordan_inverse(const PointMatrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DimensionMismatch("gauss_jordan_inverse: matrix is not square");

    double scale = 0;
    for (double v : a.data()) {
        if (std::isnan(v)) throw InvalidBound("matrix has NaN entries");
        scale = std::max(scale, std::fabs(v));
    }
    const double threshold = pivot_epsilon * scale;

    // Augmented matrix [A | I], n x 2n.
    PointMatrix c(n, 2 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) c(i, j) = a(i, j);
        c(i, n + i) = 1.0;
    }

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(c(i, k)) > std::fabs(c(p, k))) p = i;
        const double pivot = c(p, k);
        if (!(std::fabs(pivot) > threshold) || scale == 0) {
            throw SingularMatrix("pivot below threshold in column " + std::to_string(k));
        }
        if (p != k)
            for (std::size_t j = 0; j < 2 * n; ++j) std::swap(c(k, j), c(p, j));

        for (std::size_t j = k; j < 2 * n; ++j) c(k, j) /= pivot;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const double f = c(i, k);
            if (f == 0) continue;
            for (std::size_t j = k; j < 2 * n; ++j) c(i, j) -= f * c(k, j);
        }
    }

    PointMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = c(i, n + j);
    return inv;
}

}  // namespace hsroot
