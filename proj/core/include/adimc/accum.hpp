#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "normal.hpp"
#include "vec.hpp"

namespace adimc {

// Online mean of H and of H^2 via the running-mean recursion; the variance
// sigma_n^2 = m2 - xi^2 may legitimately go negative at small n.
struct AdaptiveAccumulator {
    std::uint64_t n = 0;
    double xi = 0.0;
    double m2 = 0.0;

    void update(double h) {
        if (!std::isfinite(h)) throw std::invalid_argument("AdaptiveAccumulator: non-finite sample");
        ++n;
        const double k = static_cast<double>(n);
        xi += (h - xi) / k;
        m2 += (h * h - m2) / k;
    }

    double variance_estimate() const {
        if (n == 0) throw std::logic_error("AdaptiveAccumulator: empty");
        return m2 - xi * xi;
    }
};

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
    bool degenerate = false;  // sigma_n^2 <= 0: interval collapsed to the point estimate
};

inline ConfidenceInterval confidence_interval(const AdaptiveAccumulator& acc, double level) {
    if (acc.n == 0) throw std::logic_error("confidence_interval: empty accumulator");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("confidence_interval: level must be in (0,1)");
    const double var = acc.variance_estimate();
    if (var <= 0.0) return {acc.xi, acc.xi, true};
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double half = z * std::sqrt(var / static_cast<double>(acc.n));
    return {acc.xi - half, acc.xi + half, false};
}

struct EstimateReport {
    double estimate = 0.0;
    double variance = 0.0;  // sigma_n^2
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool ci_degenerate = false;
    std::uint64_t n = 0;
    std::uint64_t payoff_evals = 0;
    std::uint64_t truncations = 0;  // final alpha_n
    Vec theta_final;
};

}  // namespace adimc
