// Test-only reference implementations, kept independent of the library's
// computation paths on purpose.
#pragma once

#include "d2v/matrix.hpp"
#include "d2v/rng.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace oracles {

// plain triple-loop matrix multiply
inline d2v::Matrix naive_matmul(const d2v::Matrix& a, const d2v::Matrix& b) {
    d2v::Matrix c(a.rows, b.cols);
    for (size_t i = 0; i < a.rows; ++i) {
        for (size_t j = 0; j < b.cols; ++j) {
            double acc = 0.0;
            for (size_t k = 0; k < a.cols; ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    }
    return c;
}

// central finite difference of a scalar function with respect to one value
inline double central_diff(double& value, const std::function<double()>& f, double h) {
    const double saved = value;
    value = saved + h;
    const double plus = f();
    value = saved - h;
    const double minus = f();
    value = saved;
    return (plus - minus) / (2.0 * h);
}

inline d2v::Matrix random_matrix(size_t rows, size_t cols, d2v::Rng& rng, double lo = -1.0,
                                 double hi = 1.0) {
    d2v::Matrix m(rows, cols);
    for (double& v : m.data) v = rng.uniform(lo, hi);
    return m;
}

inline std::vector<int> random_labels(size_t n, size_t classes, d2v::Rng& rng) {
    std::vector<int> labels(n);
    for (auto& l : labels) l = static_cast<int>(rng.uniform_below(classes));
    return labels;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace oracles
