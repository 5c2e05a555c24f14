#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace mwh {

// Dense row-major matrix of doubles. The only numeric container in the
// project: features, weights, activations and gradients all live here.
// No strided views; copies are fine at this scale.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

namespace linalg {

// Primary kernels. Inner loops run under OpenMP when the problem is large
// enough; each output element is accumulated by exactly one thread in the
// same order as the serial code, so results are bit-identical to the
// reference kernels for any thread count.

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix relu(const Matrix& a);
// 1 where a > 0 else 0; multiplied into upstream deltas during backprop.
Matrix relu_grad_mask(const Matrix& a);
// Column sums collapsed to a single row (bias gradients).
Matrix row_sum(const Matrix& a);
// Adds a 1 x cols row vector to every row of a.
Matrix broadcast_add_row(const Matrix& a, const Matrix& row);
// Row-wise softmax with per-row max subtraction; rows sum to 1.
Matrix softmax_rows(const Matrix& logits);

namespace ref {

// Serial reference kernels: naive loops, no OpenMP. Kept so tests can pin
// the parallel kernels against them and the bench target can compare.
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix softmax_rows(const Matrix& logits);
Matrix row_sum(const Matrix& a);

} // namespace ref

} // namespace linalg

} // namespace mwh
