#include "adimc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace adimc {

GaussLegendre::GaussLegendre(std::size_t n) {
    if (n < 2) throw std::invalid_argument("Gauss-Legendre order must be >= 2");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - static_cast<double>(j) * p3) / (j + 1.0);
            }
            pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

namespace {

constexpr double kHalfWidth = 13.5;   // integration window in standard deviations
constexpr double kMaxPanel = 0.25;
constexpr std::size_t kOrder = 20;

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

double gaussian_expectation(const std::function<double(double)>& f, double mean,
                            const Vec& breakpoints) {
    static const GaussLegendre rule(kOrder);
    const double lo = mean - kHalfWidth, hi = mean + kHalfWidth;
    Vec edges{lo, hi};
    for (double b : breakpoints)
        if (b > lo && b < hi) edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    double total = 0.0;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const double a = edges[e], b = edges[e + 1];
        const auto panels = static_cast<std::size_t>(std::ceil((b - a) / kMaxPanel));
        const double h = (b - a) / static_cast<double>(panels);
        for (std::size_t p = 0; p < panels; ++p) {
            const double pa = a + h * static_cast<double>(p);
            const double mid = pa + 0.5 * h, half = 0.5 * h;
            double acc = 0.0;
            for (std::size_t k = 0; k < kOrder; ++k) {
                const double xk = mid + half * rule.x[k];
                acc += rule.w[k] * f(xk) * normal_pdf(xk - mean);
            }
            total += acc * half;
        }
    }
    return total;
}

double quadrature_v(const std::function<double(double)>& phi, double mu, const Vec& breakpoints) {
    const double integral = gaussian_expectation([&](double x) {
        const double p = phi(x);
        return p * p;
    }, -mu, breakpoints);
    return std::exp(mu * mu) * integral;
}

double quadrature_v(GaussianShiftModel& model, double theta) {
    if (model.sample_dim() != 1 || model.param_dim() != 1)
        throw std::invalid_argument("quadrature_v needs a one-dimensional model");
    const double mu = model.drift().apply(Vec{theta})[0];
    return quadrature_v([&](double x) { return model.phi_at(Vec{x}); }, mu, model.phi_breakpoints);
}

double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tol) {
    if (!(b > a) || !(tol > 0.0)) throw std::invalid_argument("bad golden-section bracket");
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

namespace {
constexpr double kThetaLo = -10.0, kThetaHi = 10.0, kThetaTol = 1e-6;
}

double quadrature_theta_star(const std::function<double(double)>& phi, const Vec& breakpoints) {
    return golden_section_minimize(
        [&](double th) { return quadrature_v(phi, th, breakpoints); }, kThetaLo, kThetaHi, kThetaTol);
}

double quadrature_theta_star(GaussianShiftModel& model) {
    return golden_section_minimize([&](double th) { return quadrature_v(model, th); }, kThetaLo,
                                   kThetaHi, kThetaTol);
}

}  // namespace adimc
