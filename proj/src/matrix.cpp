#include "d2v/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace d2v {

std::string Matrix::shape_str() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

bool Matrix::all_finite() const {
    for (double v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) {
        throw std::invalid_argument("matmul: inner dimensions differ, lhs " + a.shape_str() +
                                    " vs rhs " + b.shape_str());
    }
    Matrix c(a.rows, b.cols);
    for (size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.row_ptr(i);
        double* crow = c.row_ptr(i);
        for (size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = b.row_ptr(k);
            for (size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Matrix matmul_trans_a(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows) {
        throw std::invalid_argument("matmul_trans_a: row counts differ, lhs " + a.shape_str() +
                                    " vs rhs " + b.shape_str());
    }
    Matrix c(a.cols, b.cols);
    for (size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.row_ptr(i);
        const double* brow = b.row_ptr(i);
        for (size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            double* crow = c.row_ptr(k);
            for (size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Matrix matmul_trans_b(const Matrix& a, const Matrix& b) {
    if (a.cols != b.cols) {
        throw std::invalid_argument("matmul_trans_b: column counts differ, lhs " + a.shape_str() +
                                    " vs rhs " + b.shape_str());
    }
    Matrix c(a.rows, b.rows);
    for (size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.row_ptr(i);
        double* crow = c.row_ptr(i);
        for (size_t j = 0; j < b.rows; ++j) {
            const double* brow = b.row_ptr(j);
            double acc = 0.0;
            for (size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            crow[j] = acc;
        }
    }
    return c;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols, m.rows);
    for (size_t i = 0; i < m.rows; ++i) {
        for (size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    }
    return t;
}

std::vector<double> col_sums(const Matrix& m) {
    std::vector<double> sums(m.cols, 0.0);
    for (size_t i = 0; i < m.rows; ++i) {
        const double* row = m.row_ptr(i);
        for (size_t j = 0; j < m.cols; ++j) sums[j] += row[j];
    }
    return sums;
}

std::vector<double> col_means_compensated(const Matrix& m) {
    if (m.rows == 0) throw std::invalid_argument("col_means_compensated: matrix has no rows");
    std::vector<double> sums(m.cols, 0.0);
    std::vector<double> comp(m.cols, 0.0); // Kahan carry
    for (size_t i = 0; i < m.rows; ++i) {
        const double* row = m.row_ptr(i);
        for (size_t j = 0; j < m.cols; ++j) {
            const double y = row[j] - comp[j];
            const double t = sums[j] + y;
            comp[j] = (t - sums[j]) - y;
            sums[j] = t;
        }
    }
    const double inv_n = 1.0 / static_cast<double>(m.rows);
    for (double& s : sums) s *= inv_n;
    return sums;
}

Matrix hconcat_broadcast(const Matrix& left, const std::vector<double>& right_row) {
    Matrix out(left.rows, left.cols + right_row.size());
    for (size_t i = 0; i < left.rows; ++i) {
        double* orow = out.row_ptr(i);
        const double* lrow = left.row_ptr(i);
        for (size_t j = 0; j < left.cols; ++j) orow[j] = lrow[j];
        for (size_t j = 0; j < right_row.size(); ++j) orow[left.cols + j] = right_row[j];
    }
    return out;
}

std::vector<int> argmax_rows(const Matrix& m) {
    if (m.cols == 0) throw std::invalid_argument("argmax_rows: matrix has no columns");
    std::vector<int> out(m.rows, 0);
    for (size_t i = 0; i < m.rows; ++i) {
        const double* row = m.row_ptr(i);
        int best = 0;
        for (size_t j = 1; j < m.cols; ++j) {
            if (row[j] > row[best]) best = static_cast<int>(j);
        }
        out[i] = best;
    }
    return out;
}

} // namespace d2v
