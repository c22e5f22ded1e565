#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "vec.hpp"

namespace adimc {

// Drift matrix A (N*D rows, d columns) with structured fast paths; the dense
// fallback is for tests and is rank-checked, the builders are full rank by
// construction (positive sqrt(dt) entries).
struct DriftMatrix {
    enum class Kind { identity, cameron_martin, block, dense };
    Kind kind = Kind::identity;
    std::size_t N = 1, D = 1, d = 1;
    Vec sq_dt;     // cameron-martin / block: sqrt(t_k - t_{k-1}), k = 1..N
    Matrix dense;

    std::size_t rows() const { return N * D; }
    std::size_t cols() const { return d; }

    static DriftMatrix identity(std::size_t N, std::size_t D);
    static DriftMatrix cameron_martin(const Vec& grid);
    static DriftMatrix block(const Vec& grid, std::size_t D);
    static DriftMatrix from_dense(Matrix m);  // throws if columns are dependent

    Vec apply(const Vec& theta) const;    // A theta
    Vec apply_t(const Vec& x) const;      // A^T x
    Matrix materialize() const;
};

// Parametric representation (H, U) over a Gaussian noise source: everything
// the adaptive runners need, plus the shared-evaluation fast path for xi^2.
class ParametricRepresentation {
public:
    virtual ~ParametricRepresentation() = default;
    virtual std::size_t sample_dim() const = 0;
    virtual std::size_t param_dim() const = 0;
    virtual double h_value(const Vec& theta, const Vec& g) = 0;
    virtual Vec u1_value(const Vec& theta, const Vec& g) = 0;
    virtual Vec u2_value(const Vec& theta, const Vec& g) = 0;
    virtual std::pair<double, Vec> coupled_h_u2(const Vec& theta, const Vec& g) = 0;
    virtual std::uint64_t payoff_evals() const = 0;
};

// Gaussian drift shift: H(theta,G) = phi(G + A theta) e^{-A theta . G - |A theta|^2/2}.
// The two gradient-of-variance estimators:
//   U1(theta,G) = A^T (A theta - G) phi(G)^2 e^{-A theta . G + |A theta|^2/2}
//   U2(theta,G) = -A^T G phi(G + A theta)^2 e^{-2 A theta . G - |A theta|^2}
// Both have expectation grad v(theta).  Weights are assembled in log space so
// huge payoffs or drifts saturate to finite values instead of producing inf*0.
class GaussianShiftModel final : public ParametricRepresentation {
public:
    using Phi = std::function<double(const Vec&)>;

    GaussianShiftModel(Phi phi, DriftMatrix A);

    std::size_t sample_dim() const override { return A_.rows(); }
    std::size_t param_dim() const override { return A_.cols(); }

    double h_value(const Vec& theta, const Vec& g) override;
    Vec u1_value(const Vec& theta, const Vec& g) override;
    Vec u2_value(const Vec& theta, const Vec& g) override;
    std::pair<double, Vec> coupled_h_u2(const Vec& theta, const Vec& g) override;

    std::uint64_t payoff_evals() const override { return evals_; }
    const DriftMatrix& drift() const { return A_; }

    // Payoff kink locations (as raw-noise coordinates) for 1-D quadrature;
    // empty when unknown or smooth.
    Vec phi_breakpoints;

    double phi_at(const Vec& y) {
        ++evals_;
        return phi_(y);
    }

private:
    struct Parts;  // shared subexpressions of h and u2
    void eval_parts(const Vec& theta, const Vec& g, bool want_h, bool want_u2, double& h_out,
                    Vec& u2_out);

    Phi phi_;
    DriftMatrix A_;
    std::uint64_t evals_ = 0;
};

}  // namespace adimc
