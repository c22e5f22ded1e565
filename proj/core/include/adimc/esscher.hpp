#pragma once

#include <functional>
#include <string>

#include "rng.hpp"

namespace adimc {

// One-dimensional exponential tilt.  X^(theta) has density
// e^{theta x - psi(theta)} p(x); estimating E[f(X)] from tilted draws uses
// h(theta, x) = f(x) e^{-theta x + psi(theta)}.
struct EsscherModel {
    std::function<double(double)> f;
    std::function<double(double)> psi;                     // throws outside the natural domain
    std::function<double(double, double)> tilted_quantile;  // (theta, u) -> sample of X^(theta)
    std::string name;
};

double esscher_h_value(const EsscherModel& m, double theta, double x);
double esscher_sample(const EsscherModel& m, double theta, NormalStream& stream);

// Standard normal base: psi(theta) = theta^2/2, X^(theta) ~ N(theta, 1).
EsscherModel esscher_gaussian(std::function<double(double)> f);

// Exponential(lambda) base: psi(theta) = log(lambda/(lambda-theta)) for
// theta < lambda, X^(theta) ~ Exp(lambda - theta).
EsscherModel esscher_exponential(double lambda, std::function<double(double)> f);

}  // namespace adimc
