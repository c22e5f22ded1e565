#pragma once

#include <cmath>
#include <stdexcept>

namespace adimc {

// Step sequence gamma_n = gamma/(n+1)^a with 1/2 < a <= 1, so that
// sum gamma_n = inf and sum gamma_n^2 < inf.  gamma = 0 is admitted as a
// degenerate schedule: the iterate never moves and the adaptive estimator
// collapses to crude Monte Carlo, which the tests rely on.
struct GainSchedule {
    double gamma = 1.0;
    double a = 0.75;

    GainSchedule() = default;
    GainSchedule(double gamma_, double a_) : gamma(gamma_), a(a_) {
        if (!(gamma >= 0.0)) throw std::invalid_argument("GainSchedule: gamma must be >= 0");
        if (!(a > 0.5 && a <= 1.0)) throw std::invalid_argument("GainSchedule: a must be in (1/2, 1]");
    }

    double gain_at(std::uint64_t n) const { return gamma / std::pow(static_cast<double>(n) + 1.0, a); }
};

// Increasing balls K_j = {|theta| <= r0 * growth^j}; growth > 1 makes the
// radii diverge, so the union covers R^d and K_j is interior to K_{j+1}.
struct CompactSchedule {
    double r0 = 5.0;
    double growth = 2.0;

    CompactSchedule() = default;
    CompactSchedule(double r0_, double growth_) : r0(r0_), growth(growth_) {
        if (!(r0 > 0.0)) throw std::invalid_argument("CompactSchedule: r0 must be > 0");
        if (!(growth > 1.0)) throw std::invalid_argument("CompactSchedule: growth must be > 1");
    }

    double radius(std::uint64_t j) const { return r0 * std::pow(growth, static_cast<double>(j)); }

    bool contains(std::uint64_t j, double theta_norm_sq) const {
        const double r = radius(j);
        return theta_norm_sq <= r * r;
    }
};

}  // namespace adimc
