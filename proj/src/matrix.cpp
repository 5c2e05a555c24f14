#include "mwh/matrix.hpp"

#include "mwh/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mwh {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw numeric_error(msg);
}

std::string shape_str(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Below this element count the OpenMP fork costs more than the loop.
constexpr std::size_t kParallelCutoff = 16 * 1024;

} // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        require(row.size() == c, "from_rows: ragged rows");
        std::copy(row.begin(), row.end(), m.row(i++));
    }
    return m;
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

namespace linalg {

Matrix matmul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(),
            "matmul: dimension mismatch " + shape_str(a) + " * " + shape_str(b));
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    Matrix c(n, m);
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = c.data();
    // i-k-j order: streams through b rows, accumulates into c row i. Each
    // c row is owned by one thread, so the FP order matches ref::matmul.
    const bool par = n * k * m >= kParallelCutoff;
#pragma omp parallel for schedule(static) if (par)
    for (std::size_t i = 0; i < n; ++i) {
        double* crow = pc + i * m;
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double av = pa[i * k + kk];
            const double* brow = pb + kk * m;
            for (std::size_t j = 0; j < m; ++j) crow[j] += av * brow[j];
        }
    }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
    return t;
}

Matrix add(const Matrix& a, const Matrix& b) {
    require(a.same_shape(b), "add: shape mismatch " + shape_str(a) + " vs " + shape_str(b));
    Matrix c(a.rows(), a.cols());
    const std::size_t n = a.size();
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (std::size_t i = 0; i < n; ++i) c.data()[i] = a.data()[i] + b.data()[i];
    return c;
}

Matrix sub(const Matrix& a, const Matrix& b) {
    require(a.same_shape(b), "sub: shape mismatch " + shape_str(a) + " vs " + shape_str(b));
    Matrix c(a.rows(), a.cols());
    const std::size_t n = a.size();
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (std::size_t i = 0; i < n; ++i) c.data()[i] = a.data()[i] - b.data()[i];
    return c;
}

Matrix scale(const Matrix& a, double s) {
    Matrix c(a.rows(), a.cols());
    const std::size_t n = a.size();
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (std::size_t i = 0; i < n; ++i) c.data()[i] = a.data()[i] * s;
    return c;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    require(a.same_shape(b), "hadamard: shape mismatch " + shape_str(a) + " vs " + shape_str(b));
    Matrix c(a.rows(), a.cols());
    const std::size_t n = a.size();
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (std::size_t i = 0; i < n; ++i) c.data()[i] = a.data()[i] * b.data()[i];
    return c;
}

Matrix relu(const Matrix& a) {
    Matrix c(a.rows(), a.cols());
    const std::size_t n = a.size();
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    // std::max keeps NaN so a blown-up forward pass surfaces as NaN loss
    for (std::size_t i = 0; i < n; ++i) c.data()[i] = std::max(a.data()[i], 0.0);
    return c;
}

Matrix relu_grad_mask(const Matrix& a) {
    Matrix c(a.rows(), a.cols());
    const std::size_t n = a.size();
#pragma omp parallel for schedule(static) if (n >= kParallelCutoff)
    for (std::size_t i = 0; i < n; ++i) c.data()[i] = a.data()[i] > 0.0 ? 1.0 : 0.0;
    return c;
}

Matrix row_sum(const Matrix& a) {
    Matrix s(1, a.cols());
    // Parallel over columns: each column sum is one thread's sequential
    // accumulation, so the result matches the serial reference bit for bit.
    const std::size_t cols = a.cols();
#pragma omp parallel for schedule(static) if (a.size() >= kParallelCutoff)
    for (std::size_t j = 0; j < cols; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) acc += a.at(i, j);
        s.at(0, j) = acc;
    }
    return s;
}

Matrix broadcast_add_row(const Matrix& a, const Matrix& row) {
    require(row.rows() == 1 && row.cols() == a.cols(),
            "broadcast_add_row: expected 1x" + std::to_string(a.cols()) + " row, got " +
                shape_str(row));
    Matrix c(a.rows(), a.cols());
    const std::size_t rows = a.rows();
#pragma omp parallel for schedule(static) if (a.size() >= kParallelCutoff)
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) + row.at(0, j);
    return c;
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix p(logits.rows(), logits.cols());
    const std::size_t rows = logits.rows();
#pragma omp parallel for schedule(static) if (logits.size() >= kParallelCutoff)
    for (std::size_t i = 0; i < rows; ++i) {
        const double* in = logits.row(i);
        double* out = p.row(i);
        double mx = in[0];
        for (std::size_t j = 1; j < logits.cols(); ++j) mx = std::max(mx, in[j]);
        double z = 0.0;
        for (std::size_t j = 0; j < logits.cols(); ++j) {
            out[j] = std::exp(in[j] - mx);
            z += out[j];
        }
        for (std::size_t j = 0; j < logits.cols(); ++j) out[j] /= z;
    }
    return p;
}

namespace ref {

Matrix matmul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "ref::matmul: dimension mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t kk = 0; kk < a.cols(); ++kk) {
            const double av = a.at(i, kk);
            for (std::size_t j = 0; j < b.cols(); ++j) c.at(i, j) += av * b.at(kk, j);
        }
    return c;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    require(a.same_shape(b), "ref::hadamard: shape mismatch");
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] * b.data()[i];
    return c;
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix p(logits.rows(), logits.cols());
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        double mx = logits.at(i, 0);
        for (std::size_t j = 1; j < logits.cols(); ++j) mx = std::max(mx, logits.at(i, j));
        double z = 0.0;
        for (std::size_t j = 0; j < logits.cols(); ++j) {
            p.at(i, j) = std::exp(logits.at(i, j) - mx);
            z += p.at(i, j);
        }
        for (std::size_t j = 0; j < logits.cols(); ++j) p.at(i, j) /= z;
    }
    return p;
}

Matrix row_sum(const Matrix& a) {
    Matrix s(1, a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) acc += a.at(i, j);
        s.at(0, j) = acc;
    }
    return s;
}

} // namespace ref

} // namespace linalg

} // namespace mwh
