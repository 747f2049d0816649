#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace d2v {

/// Dense row-major matrix of 64-bit floats; the universal numeric carrier.
struct Matrix {
    size_t rows = 0;
    size_t cols = 0;
    std::vector<double> data; // rows * cols, row-major

    Matrix() = default;
    Matrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(size_t i, size_t j) { return data[i * cols + j]; }
    const double& operator()(size_t i, size_t j) const { return data[i * cols + j]; }

    double* row_ptr(size_t i) { return data.data() + i * cols; }
    const double* row_ptr(size_t i) const { return data.data() + i * cols; }

    size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }

    std::string shape_str() const;
    bool all_finite() const;
};

// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);
// C = A^T * B  (A is m x k, B is m x n, C is k x n)
Matrix matmul_trans_a(const Matrix& a, const Matrix& b);
// C = A * B^T  (A is m x k, B is n x k, C is m x n)
Matrix matmul_trans_b(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);

// per-column sums, length cols
std::vector<double> col_sums(const Matrix& m);

// per-column means computed with compensated summation, so the result is
// stable under row permutation and row duplication to ~1e-15
std::vector<double> col_means_compensated(const Matrix& m);

// rows of `left` concatenated with the same `right_row` appended to each
Matrix hconcat_broadcast(const Matrix& left, const std::vector<double>& right_row);

// argmax per row; ties broken toward the lowest column index
std::vector<int> argmax_rows(const Matrix& m);

} // namespace d2v
