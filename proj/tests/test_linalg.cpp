#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mwh/errors.hpp"
#include "mwh/matrix.hpp"
#include "mwh/rng.hpp"

#include <cmath>
#include <cstring>

using namespace mwh;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    RngStream stream(seed);
    Matrix m(r, c);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = 2.0 * stream.uniform01() - 1.0;
    return m;
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
    return a.same_shape(b) &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("identity times A equals A") {
    const Matrix a = random_matrix(4, 4, 1);
    CHECK(bitwise_equal(linalg::matmul(Matrix::identity(4), a), a));
}

TEST_CASE("matmul hand arithmetic") {
    const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
    const Matrix b = Matrix::from_rows({{1}, {1}});
    const Matrix c = linalg::matmul(a, b);
    CHECK(c.rows() == 2);
    CHECK(c.cols() == 1);
    CHECK(c.at(0, 0) == 3.0);
    CHECK(c.at(1, 0) == 7.0);
}

TEST_CASE("matmul matches naive oracle") {
    const Matrix a = random_matrix(5, 7, 2);
    const Matrix b = random_matrix(7, 3, 3);
    const Matrix fast = linalg::matmul(a, b);
    // independent triple loop, j-inner order different from the kernel
    Matrix oracle(5, 3);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < 7; ++k) acc += a.at(i, k) * b.at(k, j);
            oracle.at(i, j) = acc;
        }
    for (std::size_t i = 0; i < fast.size(); ++i)
        CHECK(std::abs(fast.data()[i] - oracle.data()[i]) < 1e-12);
}

TEST_CASE("matmul dimension mismatch throws") {
    CHECK_THROWS_AS(linalg::matmul(Matrix(2, 3), Matrix(2, 3)), numeric_error);
}

TEST_CASE("matmul associativity within 1e-9 relative") {
    const Matrix a = random_matrix(6, 5, 4);
    const Matrix b = random_matrix(5, 8, 5);
    const Matrix c = random_matrix(8, 4, 6);
    const Matrix left = linalg::matmul(linalg::matmul(a, b), c);
    const Matrix right = linalg::matmul(a, linalg::matmul(b, c));
    for (std::size_t i = 0; i < left.size(); ++i) {
        const double denom = std::max({std::abs(left.data()[i]), std::abs(right.data()[i]), 1e-9});
        CHECK(std::abs(left.data()[i] - right.data()[i]) / denom < 1e-9);
    }
}

TEST_CASE("relu definition") {
    const Matrix a = Matrix::from_rows({{-1, 0, 2}});
    const Matrix r = linalg::relu(a);
    CHECK(r.at(0, 0) == 0.0);
    CHECK(r.at(0, 1) == 0.0);
    CHECK(r.at(0, 2) == 2.0);
    const Matrix m = linalg::relu_grad_mask(a);
    CHECK(m.at(0, 0) == 0.0);
    CHECK(m.at(0, 1) == 0.0);
    CHECK(m.at(0, 2) == 1.0);
}

TEST_CASE("scale by zero annihilates") {
    const Matrix z = linalg::scale(random_matrix(3, 4, 7), 0.0);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(z.data()[i] == 0.0);
}

TEST_CASE("hadamard matches loop oracle") {
    const Matrix a = random_matrix(4, 6, 8);
    const Matrix b = random_matrix(4, 6, 9);
    const Matrix h = linalg::hadamard(a, b);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            CHECK(h.at(i, j) == a.at(i, j) * b.at(i, j));
    CHECK_THROWS_AS(linalg::hadamard(a, Matrix(4, 5)), numeric_error);
}

TEST_CASE("add and sub") {
    const Matrix a = random_matrix(3, 3, 10);
    const Matrix b = random_matrix(3, 3, 11);
    const Matrix s = linalg::sub(linalg::add(a, b), b);
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(std::abs(s.data()[i] - a.data()[i]) < 1e-15);
}

TEST_CASE("transpose involution") {
    const Matrix a = random_matrix(5, 3, 12);
    CHECK(bitwise_equal(linalg::transpose(linalg::transpose(a)), a));
    CHECK(linalg::transpose(a).at(1, 4) == a.at(4, 1));
}

TEST_CASE("row_sum collapses to column sums") {
    const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
    const Matrix s = linalg::row_sum(a);
    CHECK(s.rows() == 1);
    CHECK(s.at(0, 0) == 9.0);
    CHECK(s.at(0, 1) == 12.0);
}

TEST_CASE("broadcast_add_row") {
    const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}});
    const Matrix r = Matrix::from_rows({{10, 20}});
    const Matrix out = linalg::broadcast_add_row(a, r);
    CHECK(out.at(0, 0) == 11.0);
    CHECK(out.at(1, 1) == 24.0);
    CHECK_THROWS_AS(linalg::broadcast_add_row(a, Matrix(1, 3)), numeric_error);
}

TEST_CASE("softmax symmetric row") {
    const Matrix p = linalg::softmax_rows(Matrix::from_rows({{0, 0}}));
    CHECK(p.at(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.at(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("softmax survives extreme logits") {
    const Matrix p = linalg::softmax_rows(Matrix::from_rows({{1000, 0}}));
    CHECK(p.all_finite());
    CHECK(p.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.at(0, 1) < 1e-300);
}

TEST_CASE("softmax rows sum to 1") {
    const Matrix p = linalg::softmax_rows(random_matrix(50, 9, 13));
    for (std::size_t i = 0; i < p.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < p.cols(); ++j) {
            CHECK(p.at(i, j) >= 0.0);
            s += p.at(i, j);
        }
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
}

TEST_CASE("parallel kernels bitwise match the serial references") {
    // sizes above the parallel cutoff so the OpenMP path actually runs
    const Matrix a = random_matrix(160, 160, 14);
    const Matrix b = random_matrix(160, 160, 15);
    CHECK(bitwise_equal(linalg::matmul(a, b), linalg::ref::matmul(a, b)));
    CHECK(bitwise_equal(linalg::hadamard(a, b), linalg::ref::hadamard(a, b)));
    CHECK(bitwise_equal(linalg::softmax_rows(a), linalg::ref::softmax_rows(a)));
    CHECK(bitwise_equal(linalg::row_sum(a), linalg::ref::row_sum(a)));
}

TEST_CASE("all_finite flags bad values") {
    Matrix a(2, 2, 1.0);
    CHECK(a.all_finite());
    a.at(1, 1) = std::nan("");
    CHECK_FALSE(a.all_finite());
}
