#include "adimc/model.hpp"

#include <cmath>
#include <stdexcept>

namespace adimc {

namespace {

// Saturating exponential of a log-magnitude.  700 keeps room for a further
// factor ~1e4 before the double range ends, so downstream products stay
// finite and oversized samples are handled by truncation, not by NaN traps.
double exp_sat(double lw) { return std::exp(std::min(lw, 700.0)); }

void check_grid(const Vec& grid) {
    if (grid.empty()) throw std::invalid_argument("time grid is empty");
    double prev = 0.0;
    for (double t : grid) {
        if (!(t > prev)) throw std::invalid_argument("time grid must be strictly increasing from 0");
        prev = t;
    }
}

}  // namespace

DriftMatrix DriftMatrix::identity(std::size_t N, std::size_t D) {
    if (N == 0 || D == 0) throw std::invalid_argument("identity drift needs N, D >= 1");
    DriftMatrix A;
    A.kind = Kind::identity;
    A.N = N;
    A.D = D;
    A.d = N * D;
    return A;
}

DriftMatrix DriftMatrix::cameron_martin(const Vec& grid) {
    check_grid(grid);
    DriftMatrix A;
    A.kind = Kind::cameron_martin;
    A.N = grid.size();
    A.D = 1;
    A.d = 1;
    A.sq_dt.resize(A.N);
    double prev = 0.0;
    for (std::size_t k = 0; k < A.N; ++k) {
        A.sq_dt[k] = std::sqrt(grid[k] - prev);
        prev = grid[k];
    }
    return A;
}

DriftMatrix DriftMatrix::block(const Vec& grid, std::size_t D) {
    if (D == 0) throw std::invalid_argument("block drift needs D >= 1");
    DriftMatrix A = cameron_martin(grid);
    A.kind = Kind::block;
    A.D = D;
    A.d = D;
    return A;
}

DriftMatrix DriftMatrix::from_dense(Matrix m) {
    if (m.rows == 0 || m.cols == 0 || m.rows < m.cols)
        throw std::invalid_argument("dense drift must be tall with at least one column");
    // Full column rank <=> the Gram matrix admits a Cholesky factorization.
    Matrix gram(m.cols, m.cols);
    for (std::size_t i = 0; i < m.cols; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < m.rows; ++k) s += m(k, i) * m(k, j);
            gram(i, j) = gram(j, i) = s;
        }
    double scale = 0.0;
    for (std::size_t i = 0; i < m.cols; ++i) scale = std::max(scale, gram(i, i));
    Matrix chol(m.cols, m.cols);
    for (std::size_t i = 0; i < m.cols; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = gram(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= chol(i, k) * chol(j, k);
            if (i == j) {
                if (!(s > scale * 1e-12))
                    throw std::invalid_argument("drift matrix columns are linearly dependent");
                chol(i, i) = std::sqrt(s);
            } else {
                chol(i, j) = s / chol(j, j);
            }
        }
    DriftMatrix A;
    A.kind = Kind::dense;
    A.N = m.rows;
    A.D = 1;
    A.d = m.cols;
    A.dense = std::move(m);
    return A;
}

Vec DriftMatrix::apply(const Vec& theta) const {
    if (theta.size() != d) throw std::invalid_argument("drift apply: theta has wrong dimension");
    switch (kind) {
        case Kind::identity:
            return theta;
        case Kind::cameron_martin: {
            Vec out(N);
            for (std::size_t k = 0; k < N; ++k) out[k] = sq_dt[k] * theta[0];
            return out;
        }
        case Kind::block: {
            Vec out(N * D);
            for (std::size_t k = 0; k < N; ++k)
                for (std::size_t i = 0; i < D; ++i) out[k * D + i] = sq_dt[k] * theta[i];
            return out;
        }
        case Kind::dense:
            return matvec(dense, theta);
    }
    throw std::logic_error("unreachable");
}

Vec DriftMatrix::apply_t(const Vec& x) const {
    if (x.size() != rows()) throw std::invalid_argument("drift apply_t: x has wrong dimension");
    switch (kind) {
        case Kind::identity:
            return x;
        case Kind::cameron_martin: {
            double s = 0.0;
            for (std::size_t k = 0; k < N; ++k) s += sq_dt[k] * x[k];
            return Vec{s};
        }
        case Kind::block: {
            Vec out(D, 0.0);
            for (std::size_t k = 0; k < N; ++k)
                for (std::size_t i = 0; i < D; ++i) out[i] += sq_dt[k] * x[k * D + i];
            return out;
        }
        case Kind::dense:
            return matvec_t(dense, x);
    }
    throw std::logic_error("unreachable");
}

Matrix DriftMatrix::materialize() const {
    Matrix m(rows(), cols());
    Vec e(cols(), 0.0);
    for (std::size_t j = 0; j < cols(); ++j) {
        e[j] = 1.0;
        Vec col = apply(e);
        for (std::size_t i = 0; i < rows(); ++i) m(i, j) = col[i];
        e[j] = 0.0;
    }
    return m;
}

GaussianShiftModel::GaussianShiftModel(Phi phi, DriftMatrix A) : phi_(std::move(phi)), A_(std::move(A)) {
    if (!phi_) throw std::invalid_argument("payoff function is empty");
}

// Shared evaluation of the xi^2 pair.  h and u2 both read phi at the shifted
// point g + A theta, so one phi call feeds both; routing every caller through
// here is what makes coupled_h_u2 bit-identical to the separate entry points.
void GaussianShiftModel::eval_parts(const Vec& theta, const Vec& g, bool want_h, bool want_u2,
                                    double& h_out, Vec& u2_out) {
    if (g.size() != sample_dim()) throw std::invalid_argument("sample has wrong dimension");
    const Vec at = A_.apply(theta);
    const double s = dot(at, g);
    const double q = dot(at, at);
    Vec y(g);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += at[i];
    const double p = phi_at(y);
    if (!std::isfinite(p)) throw std::runtime_error("payoff evaluation returned a non-finite value");
    if (want_h) {
        if (p == 0.0) {
            h_out = 0.0;
        } else if (q == 0.0) {
            h_out = p;  // theta = 0: exact, no exp/log round trip
        } else {
            const double mag = exp_sat(std::log(std::fabs(p)) - s - 0.5 * q);
            h_out = p < 0.0 ? -mag : mag;
        }
    }
    if (want_u2) {
        if (p == 0.0) {
            u2_out.assign(param_dim(), 0.0);
        } else {
            const double w = q == 0.0 ? p * p : exp_sat(2.0 * std::log(std::fabs(p)) - 2.0 * s - q);
            u2_out = A_.apply_t(g);
            for (double& v : u2_out) v *= -w;
        }
    }
}

double GaussianShiftModel::h_value(const Vec& theta, const Vec& g) {
    double h = 0.0;
    Vec unused;
    eval_parts(theta, g, true, false, h, unused);
    return h;
}

Vec GaussianShiftModel::u2_value(const Vec& theta, const Vec& g) {
    double unused = 0.0;
    Vec u;
    eval_parts(theta, g, false, true, unused, u);
    return u;
}

std::pair<double, Vec> GaussianShiftModel::coupled_h_u2(const Vec& theta, const Vec& g) {
    double h = 0.0;
    Vec u;
    eval_parts(theta, g, true, true, h, u);
    return {h, std::move(u)};
}

Vec GaussianShiftModel::u1_value(const Vec& theta, const Vec& g) {
    if (g.size() != sample_dim()) throw std::invalid_argument("sample has wrong dimension");
    const Vec at = A_.apply(theta);
    const double p = phi_at(g);
    if (!std::isfinite(p)) throw std::runtime_error("payoff evaluation returned a non-finite value");
    if (p == 0.0) return Vec(param_dim(), 0.0);
    const double s = dot(at, g);
    const double q = dot(at, at);
    const double w = q == 0.0 ? p * p : exp_sat(2.0 * std::log(std::fabs(p)) - s + 0.5 * q);
    Vec diff(at);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= g[i];
    Vec u = A_.apply_t(diff);
    for (double& v : u) v *= w;
    return u;
}

}  // namespace adimc
