#ifndef PHASEKIT_NUMERIC_HPP
#define PHASEKIT_NUMERIC_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

#include "phasekit/errors.hpp"

namespace phasekit {

/// Dense row-major matrix of doubles. Deliberately minimal: the library only
/// needs storage, indexing, and row views.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    const double* row(std::size_t r) const { return data.data() + r * cols; }
    double* row(std::size_t r) { return data.data() + r * cols; }

    bool operator==(const Matrix& other) const = default;
};

/// Sums values in ascending sorted order. The result depends only on the
/// multiset of inputs, never on their arrival order, which keeps fitted
/// models and reported statistics invariant under sample permutations.
inline double ordered_sum(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double total = 0.0;
    for (double v : values) total += v;
    return total;
}

/// Mean with the same order-invariance guarantee as ordered_sum.
inline double ordered_mean(std::vector<double> values) {
    if (values.empty()) throw DataError("mean of empty range");
    const double n = static_cast<double>(values.size());
    return ordered_sum(std::move(values)) / n;
}

}  // namespace phasekit

#endif  // PHASEKIT_NUMERIC_HPP
