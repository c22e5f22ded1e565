#include <cmath>
#include <vector>

#include "adimc/runner.hpp"
#include "doctest.h"

using namespace adimc;

namespace {

double call_phi(const Vec& x) {
    const double s = 100.0 * std::exp(0.03 + 0.2 * x[0]);
    return s > 100.0 ? std::exp(-0.05) * (s - 100.0) : 0.0;
}

GaussianShiftModel call_model() {
    return GaussianShiftModel(call_phi, DriftMatrix::identity(1, 1));
}

// Scripted representation: returns a fixed h, serves gradient samples from a
// queue, and records which theta each entry point saw.
class ScriptedRep final : public ParametricRepresentation {
public:
    std::size_t sample_dim() const override { return 1; }
    std::size_t param_dim() const override { return 1; }
    double h_value(const Vec& theta, const Vec&) override {
        ++evals_;
        h_thetas.push_back(theta[0]);
        return h_ret;
    }
    Vec u1_value(const Vec& theta, const Vec&) override {
        ++evals_;
        u_thetas.push_back(theta[0]);
        return Vec{next_u()};
    }
    Vec u2_value(const Vec& theta, const Vec&) override {
        ++evals_;
        u_thetas.push_back(theta[0]);
        return Vec{next_u()};
    }
    std::pair<double, Vec> coupled_h_u2(const Vec& theta, const Vec&) override {
        ++evals_;
        h_thetas.push_back(theta[0]);
        u_thetas.push_back(theta[0]);
        return {h_ret, Vec{next_u()}};
    }
    std::uint64_t payoff_evals() const override { return evals_; }

    double h_ret = 1.0;
    std::vector<double> u_seq;
    std::vector<double> h_thetas, u_thetas;

private:
    double next_u() {
        const double v = served_ < u_seq.size() ? u_seq[served_] : 0.0;
        ++served_;
        return v;
    }
    std::size_t served_ = 0;
    std::uint64_t evals_ = 0;
};

AlgoParams base_params(Variant v, std::uint64_t n) {
    AlgoParams p;
    p.variant = v;
    p.n = n;
    p.gain = GainSchedule(1.0, 1.0);
    p.compacts = CompactSchedule(5.0, 2.0);
    p.tau = 1.0;
    p.avg_mode = AvgMode::count;
    return p;
}

}  // namespace

TEST_CASE("variant names round-trip") {
    const Variant all[] = {Variant::crude,       Variant::adis_xi1,  Variant::adis_xi2,
                           Variant::adis_xi1avg, Variant::adis_xi2avg, Variant::nadis_raw,
                           Variant::nadis_avg};
    for (Variant v : all) {
        const auto back = variant_from_name(variant_name(v));
        REQUIRE(back.has_value());
        CHECK(*back == v);
    }
    CHECK(variant_from_name("adis-xi1") == Variant::adis_xi1);
    CHECK(!variant_from_name("xi1").has_value());
    CHECK(!variant_from_name("").has_value());
}

TEST_CASE("payoff-evaluation budget is exact for every variant") {
    const std::uint64_t n = 500;
    CHECK(expected_payoff_evals(Variant::crude, n) == n);
    CHECK(expected_payoff_evals(Variant::adis_xi2, n) == n);
    CHECK(expected_payoff_evals(Variant::adis_xi1, n) == 2 * n);
    CHECK(expected_payoff_evals(Variant::adis_xi1avg, n) == 2 * n);
    CHECK(expected_payoff_evals(Variant::adis_xi2avg, n) == 2 * n);
    CHECK(expected_payoff_evals(Variant::nadis_raw, n) == 2 * n);
    CHECK(expected_payoff_evals(Variant::nadis_avg, n) == 2 * n);

    const Variant all[] = {Variant::crude,       Variant::adis_xi1,  Variant::adis_xi2,
                           Variant::adis_xi1avg, Variant::adis_xi2avg, Variant::nadis_raw,
                           Variant::nadis_avg};
    for (Variant v : all) {
        auto m = call_model();
        auto p = base_params(v, n);
        p.gain = GainSchedule(1.0, 0.75);
        // Confined compacts: a u^2-driven run under wide-open truncation bounds
        // can strand theta where the payoff exponent overflows.
        p.compacts = CompactSchedule(2.5, 1.001);
        const auto rep = run_algorithm(m, p, derive_key(17, 0));
        CHECK(rep.payoff_evals == expected_payoff_evals(v, n));
        CHECK(m.payoff_evals() == rep.payoff_evals);
        CHECK(rep.n == n);
    }
}

TEST_CASE("gamma = 0 collapses every one-pass variant to crude monte carlo") {
    const std::uint64_t n = 2000;
    const std::uint64_t key = derive_key(99, 3);
    auto mc = call_model();
    auto pc = base_params(Variant::crude, n);
    pc.gain = GainSchedule(0.0, 0.75);
    const auto crude = run_algorithm(mc, pc, key);

    for (Variant v : {Variant::adis_xi1, Variant::adis_xi2, Variant::adis_xi1avg,
                      Variant::adis_xi2avg}) {
        auto m = call_model();
        auto p = base_params(v, n);
        p.gain = GainSchedule(0.0, 0.75);
        const auto rep = run_algorithm(m, p, key);
        // Same draws, theta pinned at the origin: bit-identical estimates.
        CHECK(rep.estimate == crude.estimate);
        CHECK(rep.variance == crude.variance);
        CHECK(rep.ci_low == crude.ci_low);
        CHECK(rep.truncations == 0);
        CHECK(rep.theta_final[0] == 0.0);
    }
}

TEST_CASE("runs are a pure function of the run key") {
    auto run = [](std::uint64_t key) {
        auto m = call_model();
        auto p = base_params(Variant::adis_xi2avg, 5000);
        p.gain = GainSchedule(1.0, 0.75);
        p.compacts = CompactSchedule(2.5, 1.001);
        return run_algorithm(m, p, key);
    };
    const auto a = run(42), b = run(42), c = run(43);
    CHECK(a.estimate == b.estimate);
    CHECK(a.variance == b.variance);
    CHECK(a.theta_final[0] == b.theta_final[0]);
    CHECK(a.truncations == b.truncations);
    CHECK(a.estimate != c.estimate);
}

TEST_CASE("non-finite gradient samples truncate instead of throwing") {
    ScriptedRep rep;
    rep.u_seq = {0.1, 0.1, std::numeric_limits<double>::infinity(), 0.1, 0.1};
    auto p = base_params(Variant::adis_xi2, 5);
    NormalStream s(derive_key(1, 0));
    const auto out = adis_run(rep, p, s);
    CHECK(out.truncations == 1);
    // After the reset at step 3: theta = -(1/5)*0.1 - (1/6)*0.1.
    CHECK(out.theta_final[0] == doctest::Approx(-0.11 / 3.0).epsilon(1e-13));
    CHECK(out.estimate == 1.0);
    CHECK(out.ci_degenerate);
}

TEST_CASE("crude variant never touches the stochastic approximation") {
    ScriptedRep rep;
    auto p = base_params(Variant::crude, 10);
    p.theta0 = Vec{0.7};
    NormalStream s(derive_key(2, 0));
    const auto out = adis_run(rep, p, s);
    CHECK(out.truncations == 0);
    CHECK(out.theta_final[0] == 0.7);
    CHECK(rep.u_thetas.empty());
    REQUIRE(rep.h_thetas.size() == 10);
    for (double t : rep.h_thetas) CHECK(t == 0.7);
    CHECK(rep.payoff_evals() == 10);
}

TEST_CASE("averaged variants read H at the prior window average") {
    ScriptedRep rep;
    rep.u_seq = std::vector<double>(4, -1.0);  // push theta upward by gamma_k each step
    auto p = base_params(Variant::adis_xi2avg, 4);
    NormalStream s(derive_key(3, 0));
    (void)adis_run(rep, p, s);

    // Raw iterates theta_k = sum_{j<=k} 1/(j+1): 1/2, 5/6, 13/12.
    REQUIRE(rep.u_thetas.size() == 4);
    CHECK(rep.u_thetas[0] == 0.0);
    CHECK(rep.u_thetas[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(rep.u_thetas[2] == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
    CHECK(rep.u_thetas[3] == doctest::Approx(13.0 / 12.0).epsilon(1e-14));

    // H thetas: theta0 while empty, then the count-normalised window average
    // of the already-pushed iterates.
    REQUIRE(rep.h_thetas.size() == 4);
    CHECK(rep.h_thetas[0] == 0.0);
    CHECK(rep.h_thetas[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rep.h_thetas[2] == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
    CHECK(rep.h_thetas[3] == doctest::Approx(29.0 / 36.0).epsilon(1e-14));
}

TEST_CASE("xi1 average variant drives SA with u1 at the raw iterate") {
    ScriptedRep rep;
    rep.u_seq = {-1.0, -1.0};
    auto p = base_params(Variant::adis_xi1avg, 2);
    NormalStream s(derive_key(4, 0));
    (void)adis_run(rep, p, s);
    REQUIRE(rep.u_thetas.size() == 2);
    CHECK(rep.u_thetas[0] == 0.0);
    CHECK(rep.u_thetas[1] == doctest::Approx(0.5).epsilon(1e-15));
    // 2n payoff evaluations: h + u1 separately each step.
    CHECK(rep.payoff_evals() == 4);
}

TEST_CASE("two-stage variants freeze the plug-in drift for a fresh pass") {
    ScriptedRep rep;
    rep.u_seq = std::vector<double>(3, -1.0);
    auto p = base_params(Variant::nadis_raw, 3);
    NormalStream sa(derive_key(5, 0)), mc(derive_key(5, 1));
    std::vector<TraceRecord> rows;
    const auto out = nadis_run(rep, p, sa, mc, 1, [&](const TraceRecord& r) { rows.push_back(r); });

    const double theta3 = 0.5 + 1.0 / 3.0 + 0.25;
    CHECK(out.theta_final[0] == doctest::Approx(theta3).epsilon(1e-14));
    CHECK(out.payoff_evals == 6);
    REQUIRE(rep.h_thetas.size() == 3);
    for (double t : rep.h_thetas) CHECK(t == doctest::Approx(theta3).epsilon(1e-14));
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) CHECK(r.theta_norm == doctest::Approx(theta3).epsilon(1e-14));

    ScriptedRep rep2;
    rep2.u_seq = std::vector<double>(3, -1.0);
    auto p2 = base_params(Variant::nadis_avg, 3);
    NormalStream sa2(derive_key(5, 0)), mc2(derive_key(5, 1));
    const auto out2 = nadis_run(rep2, p2, sa2, mc2);
    CHECK(out2.theta_final[0] == doctest::Approx(29.0 / 36.0).epsilon(1e-14));
    for (double t : rep2.h_thetas) CHECK(t == doctest::Approx(29.0 / 36.0).epsilon(1e-14));
}

TEST_CASE("trace rows appear every k iterations plus the final one") {
    auto count_rows = [](std::uint64_t n, std::uint64_t every) {
        auto m = call_model();
        auto p = base_params(Variant::adis_xi2, n);
        p.gain = GainSchedule(0.5, 0.75);
        std::vector<TraceRecord> rows;
        const auto rep =
            run_algorithm(m, p, derive_key(7, 0), every, [&](const TraceRecord& r) { rows.push_back(r); });
        return std::pair{rows, rep};
    };

    const auto [r1, rep1] = count_rows(10, 3);
    REQUIRE(r1.size() == 4);
    CHECK(r1[0].iter == 3);
    CHECK(r1[1].iter == 6);
    CHECK(r1[2].iter == 9);
    CHECK(r1[3].iter == 10);
    CHECK(r1[3].xi == rep1.estimate);
    CHECK(r1[3].sigma2 == rep1.variance);
    CHECK(r1[3].alpha == rep1.truncations);
    CHECK(r1[3].payoff_evals == rep1.payoff_evals);

    const auto [r2, rep2] = count_rows(10, 5);
    CHECK(r2.size() == 2);
    const auto [r3, rep3] = count_rows(1000, 100);
    CHECK(r3.size() == 10);
    CHECK(r3.back().iter == 1000);
    const auto [r4, rep4] = count_rows(10, 0);
    CHECK(r4.empty());

    // Monotone iteration numbers and cumulative evaluation counts.
    for (std::size_t i = 1; i < r3.size(); ++i) {
        CHECK(r3[i].iter > r3[i - 1].iter);
        CHECK(r3[i].payoff_evals >= r3[i - 1].payoff_evals);
    }
}

TEST_CASE("parameter validation") {
    auto m = call_model();
    NormalStream s(derive_key(8, 0));

    auto p = base_params(Variant::adis_xi2, 0);
    CHECK_THROWS_AS((void)adis_run(m, p, s), std::invalid_argument);

    p = base_params(Variant::adis_xi2, 10);
    p.tau = 0.0;
    CHECK_THROWS_AS((void)adis_run(m, p, s), std::invalid_argument);

    p = base_params(Variant::adis_xi2, 10);
    p.ci_level = 1.0;
    CHECK_THROWS_AS((void)adis_run(m, p, s), std::invalid_argument);

    p = base_params(Variant::adis_xi2, 10);
    p.theta0 = Vec{1.0, 2.0};
    CHECK_THROWS_AS((void)adis_run(m, p, s), std::invalid_argument);

    p = base_params(Variant::adis_xi2, 10);
    p.theta0 = Vec{10.0};  // outside r0 = 5
    CHECK_THROWS_AS((void)adis_run(m, p, s), std::invalid_argument);

    p = base_params(Variant::nadis_raw, 10);
    CHECK_THROWS_AS((void)adis_run(m, p, s), std::invalid_argument);

    p = base_params(Variant::adis_xi2, 10);
    NormalStream s2(derive_key(8, 1));
    CHECK_THROWS_AS((void)nadis_run(m, p, s, s2), std::invalid_argument);
}

TEST_CASE("confidence level changes only the interval width") {
    auto run_level = [](double level) {
        auto m = call_model();
        auto p = base_params(Variant::adis_xi2, 2000);
        p.gain = GainSchedule(1.0, 0.75);
        p.ci_level = level;
        return run_algorithm(m, p, derive_key(21, 0));
    };
    const auto lo = run_level(0.5), hi = run_level(0.99);
    CHECK(lo.estimate == hi.estimate);
    CHECK(lo.variance == hi.variance);
    CHECK(hi.ci_high - hi.ci_low > lo.ci_high - lo.ci_low);
}
