#include <cmath>

#include "adimc/quadrature.hpp"
#include "doctest.h"

using namespace adimc;

namespace {

double call_phi_1d(double x) {
    const double s = 100.0 * std::exp(0.03 + 0.2 * x);
    return s > 100.0 ? std::exp(-0.05) * (s - 100.0) : 0.0;
}

}  // namespace

TEST_CASE("gauss-legendre nodes and weights") {
    const GaussLegendre rule(5);
    double wsum = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(rule.w[i] > 0.0);
        wsum += rule.w[i];
        CHECK(rule.x[i] == doctest::Approx(-rule.x[4 - i]).epsilon(1e-14));
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));

    // Order n integrates polynomials of degree <= 2n-1 exactly.
    for (int k = 0; k <= 9; ++k) {
        double got = 0.0;
        for (std::size_t i = 0; i < 5; ++i) got += rule.w[i] * std::pow(rule.x[i], k);
        const double want = k % 2 == 1 ? 0.0 : 2.0 / (k + 1.0);
        CHECK(got == doctest::Approx(want).epsilon(1e-13));
    }
    double deg10 = 0.0;
    for (std::size_t i = 0; i < 5; ++i) deg10 += rule.w[i] * std::pow(rule.x[i], 10);
    CHECK(std::fabs(deg10 - 2.0 / 11.0) > 1e-12);  // exactness must stop at 2n-1

    CHECK_THROWS_AS(GaussLegendre(1), std::invalid_argument);
}

TEST_CASE("gaussian_expectation reproduces normal moments") {
    const auto id = [](double x) { return x; };
    CHECK(gaussian_expectation([](double) { return 1.0; }, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gaussian_expectation(id, 1.75) == doctest::Approx(1.75).epsilon(1e-13));
    CHECK(gaussian_expectation([](double x) { return x * x; }, 0.0) ==
          doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gaussian_expectation([](double x) { return x * x * x * x; }, 0.0) ==
          doctest::Approx(3.0).epsilon(1e-13));
    CHECK(gaussian_expectation([](double x) { return (x - 2.5) * (x - 2.5); }, 2.5) ==
          doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("kinked integrands are handled via breakpoints") {
    const double half_mean = 1.0 / std::sqrt(2.0 * 3.14159265358979323846);
    CHECK(gaussian_expectation([](double x) { return x > 0.0 ? x : 0.0; }, 0.0, Vec{0.0}) ==
          doctest::Approx(half_mean).epsilon(1e-12));
    CHECK(gaussian_expectation([](double x) { return std::fabs(x); }, 0.0, Vec{0.0}) ==
          doctest::Approx(2.0 * half_mean).epsilon(1e-12));
    // Breakpoints outside the window are ignored rather than crashing.
    CHECK(gaussian_expectation([](double) { return 1.0; }, 0.0, Vec{-100.0, 100.0}) ==
          doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("closed forms of the second-moment map") {
    // phi = 1: v(mu) = e^{mu^2}.
    CHECK(quadrature_v([](double) { return 1.0; }, 0.7) ==
          doctest::Approx(std::exp(0.49)).epsilon(1e-12));
    // phi = x: v(mu) = e^{mu^2} (1 + mu^2).
    CHECK(quadrature_v([](double x) { return x; }, 0.8) ==
          doctest::Approx(std::exp(0.64) * 1.64).epsilon(1e-12));
    CHECK(quadrature_v([](double x) { return x; }, -0.8) ==
          doctest::Approx(std::exp(0.64) * 1.64).epsilon(1e-12));
}

TEST_CASE("frozen second moments of the at-the-money call") {
    const Vec kinks{-0.15};
    CHECK(quadrature_v(call_phi_1d, -0.5, kinks) ==
          doctest::Approx(887.7103639745037).epsilon(1e-8));
    CHECK(quadrature_v(call_phi_1d, 0.0, kinks) ==
          doctest::Approx(325.8755537973017).epsilon(1e-8));
    CHECK(quadrature_v(call_phi_1d, 0.5, kinks) ==
          doctest::Approx(174.50817367339238).epsilon(1e-8));
    CHECK(quadrature_v(call_phi_1d, 1.0, kinks) ==
          doctest::Approx(133.77399442106224).epsilon(1e-8));
}

TEST_CASE("model overload counts payoff evaluations and checks dimensions") {
    GaussianShiftModel m([](const Vec& x) { return call_phi_1d(x[0]); },
                         DriftMatrix::identity(1, 1));
    m.phi_breakpoints = Vec{-0.15};
    const double via_model = quadrature_v(m, 0.5);
    CHECK(via_model == doctest::Approx(174.50817367339238).epsilon(1e-8));
    CHECK(m.payoff_evals() > 1000);

    GaussianShiftModel wide([](const Vec&) { return 1.0; }, DriftMatrix::identity(1, 2));
    CHECK_THROWS_AS((void)quadrature_v(wide, 0.5), std::invalid_argument);
}

TEST_CASE("variance map is convex in theta for the call") {
    Vec vals;
    for (int i = 0; i <= 40; ++i) {
        const double th = -2.0 + 4.0 * i / 40.0;
        vals.push_back(quadrature_v(call_phi_1d, th, Vec{-0.15}));
    }
    for (std::size_t i = 1; i + 1 < vals.size(); ++i)
        CHECK(vals[i - 1] - 2.0 * vals[i] + vals[i + 1] > 0.0);
}

TEST_CASE("golden-section minimizer") {
    CHECK(golden_section_minimize([](double x) { return (x - 2.0) * (x - 2.0); }, 0.0, 5.0,
                                  1e-8) == doctest::Approx(2.0).epsilon(1e-7));
    CHECK_THROWS_AS((void)golden_section_minimize([](double x) { return x; }, 1.0, 1.0, 1e-8),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)golden_section_minimize([](double x) { return x; }, 0.0, 1.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("optimal drift of the call and its variance level") {
    const double ts = quadrature_theta_star(call_phi_1d, Vec{-0.15});
    CHECK(ts == doctest::Approx(1.1362259213221002).epsilon(5e-6));
    CHECK(quadrature_v(call_phi_1d, ts, Vec{-0.15}) ==
          doctest::Approx(132.1045599274181).epsilon(1e-8));

    GaussianShiftModel m([](const Vec& x) { return call_phi_1d(x[0]); },
                         DriftMatrix::identity(1, 1));
    m.phi_breakpoints = Vec{-0.15};
    CHECK(quadrature_theta_star(m) == doctest::Approx(ts).epsilon(1e-6));
}
