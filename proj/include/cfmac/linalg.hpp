#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

// Dense linear algebra sized for the small systems used here (K <= 8).

namespace cfmac {

struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), a(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline Matrix matmul(const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows)
        throw domain_error("matmul: shape mismatch");
    Matrix z(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            const double v = x(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < y.cols; ++j)
                z(i, j) += v * y(k, j);
        }
    return z;
}

inline Matrix transpose(const Matrix& x) {
    Matrix z(x.cols, x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j)
            z(j, i) = x(i, j);
    return z;
}

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
// A pivot at or below pivot_tol aborts, naming the failing index.
inline Matrix cholesky_lower(const Matrix& m, double pivot_tol = 1e-12) {
    if (m.rows != m.cols)
        throw domain_error("cholesky_lower: matrix must be square");
    const std::size_t n = m.rows;
    Matrix L(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
        if (!(d > pivot_tol))
            throw numeric_error("cholesky_lower: pivot " + std::to_string(j) +
                                " not positive (value " + std::to_string(d) + ")");
        L(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            L(i, j) = s / L(j, j);
        }
    }
    return L;
}

// Gaussian elimination with partial pivoting; b is consumed.
inline std::vector<double> solve_linear(Matrix m, std::vector<double> b) {
    if (m.rows != m.cols || m.rows != b.size())
        throw domain_error("solve_linear: shape mismatch");
    const std::size_t n = m.rows;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(m(r, c)) > std::fabs(m(piv, c))) piv = r;
        if (std::fabs(m(piv, c)) < 1e-300)
            throw numeric_error("solve_linear: singular system at column " +
                                std::to_string(c));
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(piv, j));
            std::swap(b[c], b[piv]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m(r, c) / m(c, c);
            if (f == 0.0) continue;
            for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
        x[i] = s / m(i, i);
    }
    return x;
}

// Determinant by LU with partial pivoting; returns 0 for singular input.
inline double det_lu(Matrix m) {
    if (m.rows != m.cols)
        throw domain_error("det_lu: matrix must be square");
    const std::size_t n = m.rows;
    double d = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(m(r, c)) > std::fabs(m(piv, c))) piv = r;
        if (m(piv, c) == 0.0) return 0.0;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(piv, j));
            d = -d;
        }
        d *= m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m(r, c) / m(c, c);
            for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return d;
}

// Columnwise solve M X = RHS; used as an independent path in tests.
inline Matrix solve_linear_matrix(const Matrix& m, const Matrix& rhs) {
    if (m.rows != rhs.rows)
        throw domain_error("solve_linear_matrix: shape mismatch");
    Matrix x(rhs.rows, rhs.cols);
    for (std::size_t j = 0; j < rhs.cols; ++j) {
        std::vector<double> col(rhs.rows);
        for (std::size_t i = 0; i < rhs.rows; ++i) col[i] = rhs(i, j);
        std::vector<double> sol = solve_linear(m, std::move(col));
        for (std::size_t i = 0; i < rhs.rows; ++i) x(i, j) = sol[i];
    }
    return x;
}

// Exact determinant of an integer matrix (fraction-free Bareiss elimination).
// Entries stay within int64 for the small magnitudes used here.
inline long long integer_det(std::size_t n, const std::vector<int>& entries) {
    if (entries.size() != n * n)
        throw domain_error("integer_det: size mismatch");
    std::vector<long long> w(entries.begin(), entries.end());
    auto at = [&](std::size_t i, std::size_t j) -> long long& { return w[i * n + j]; };
    long long prev = 1;
    int sign = 1;
    for (std::size_t c = 0; c + 1 < n; ++c) {
        if (at(c, c) == 0) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < n; ++r)
                if (at(r, c) != 0) { piv = r; break; }
            if (at(piv, c) == 0) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(at(c, j), at(piv, j));
            sign = -sign;
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            for (std::size_t j = c + 1; j < n; ++j)
                at(r, j) = (at(r, j) * at(c, c) - at(r, c) * at(c, j)) / prev;
            at(r, c) = 0;
        }
        prev = at(c, c);
    }
    return sign * at(n - 1, n - 1);
}

} // namespace cfmac
