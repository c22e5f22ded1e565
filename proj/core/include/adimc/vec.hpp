#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace adimc {

using Vec = std::vector<double>;

inline double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2_sq(const Vec& x) { return dot(x, x); }
inline double norm2(const Vec& x) { return std::sqrt(norm2_sq(x)); }

inline bool all_finite(const Vec& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

// Dense row-major matrix; small dimensions only (d <= a few hundred here).
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline Vec matvec(const Matrix& m, const Vec& x) {
    if (x.size() != m.cols) throw std::invalid_argument("matvec: dimension mismatch");
    Vec y(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        double s = 0.0;
        const double* row = &m.a[i * m.cols];
        for (std::size_t j = 0; j < m.cols; ++j) s += row[j] * x[j];
        y[i] = s;
    }
    return y;
}

inline Vec matvec_t(const Matrix& m, const Vec& x) {
    if (x.size() != m.rows) throw std::invalid_argument("matvec_t: dimension mismatch");
    Vec y(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* row = &m.a[i * m.cols];
        for (std::size_t j = 0; j < m.cols; ++j) y[j] += row[j] * x[i];
    }
    return y;
}

}  // namespace adimc
