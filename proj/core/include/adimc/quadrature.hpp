#pragma once

#include <functional>

#include "model.hpp"
#include "vec.hpp"

namespace adimc {

// Gauss-Legendre rule on [-1,1]; nodes solved by Newton on the Legendre
// recurrence, so no tabulated constants are needed.
struct GaussLegendre {
    Vec x, w;
    explicit GaussLegendre(std::size_t n);
};

// integral of f(x) N(x | mean, 1) dx over mean +/- 13.5 standard deviations,
// composite 20-point panels of width <= 0.25 with extra panel edges at the
// given breakpoints (payoff kinks); the tail truncation error is ~1e-41.
double gaussian_expectation(const std::function<double(double)>& f, double mean,
                            const Vec& breakpoints = {});

// v(theta) = E[phi(G)^2 e^{-mu G + mu^2/2}] = e^{mu^2} E[phi(G - mu)^2] with
// mu the (scalar) drift A theta; this overload takes mu directly.
double quadrature_v(const std::function<double(double)>& phi, double mu,
                    const Vec& breakpoints = {});

// Model form: requires a one-dimensional model (sample and parameter both
// scalar); phi evaluations go through the model and are counted.
double quadrature_v(GaussianShiftModel& model, double theta);

double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tol);

// argmin of quadrature_v over theta in [-10, 10] to within 1e-6.
double quadrature_theta_star(const std::function<double(double)>& phi, const Vec& breakpoints = {});
double quadrature_theta_star(GaussianShiftModel& model);

}  // namespace adimc
