#include "adimc/runner.hpp"

#include <stdexcept>

#include "adimc/sa.hpp"

namespace adimc {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::crude: return "crude";
        case Variant::adis_xi1: return "adis-xi1";
        case Variant::adis_xi2: return "adis-xi2";
        case Variant::adis_xi1avg: return "adis-xi1avg";
        case Variant::adis_xi2avg: return "adis-xi2avg";
        case Variant::nadis_raw: return "nadis-raw";
        case Variant::nadis_avg: return "nadis-avg";
    }
    throw std::logic_error("unreachable");
}

std::optional<Variant> variant_from_name(std::string_view s) {
    if (s == "crude") return Variant::crude;
    if (s == "adis-xi1") return Variant::adis_xi1;
    if (s == "adis-xi2") return Variant::adis_xi2;
    if (s == "adis-xi1avg") return Variant::adis_xi1avg;
    if (s == "adis-xi2avg") return Variant::adis_xi2avg;
    if (s == "nadis-raw") return Variant::nadis_raw;
    if (s == "nadis-avg") return Variant::nadis_avg;
    return std::nullopt;
}

std::uint64_t expected_payoff_evals(Variant v, std::uint64_t n) {
    switch (v) {
        case Variant::crude:
        case Variant::adis_xi2:
            return n;
        default:
            return 2 * n;
    }
}

namespace {

Vec resolve_theta0(const ParametricRepresentation& rep, const AlgoParams& p) {
    Vec theta0 = p.theta0.empty() ? Vec(rep.param_dim(), 0.0) : p.theta0;
    if (theta0.size() != rep.param_dim())
        throw std::invalid_argument("theta0 has wrong dimension");
    if (!p.compacts.contains(0, norm2_sq(theta0)))
        throw std::invalid_argument("theta0 lies outside the initial compact");
    return theta0;
}

void check_params(const AlgoParams& p) {
    if (p.n == 0) throw std::invalid_argument("run length n must be >= 1");
    if (!(p.tau > 0.0)) throw std::invalid_argument("window width tau must be > 0");
    if (!(p.ci_level > 0.0 && p.ci_level < 1.0))
        throw std::invalid_argument("confidence level must lie in (0,1)");
}

void maybe_trace(std::uint64_t trace_every, const TraceCallback& cb, std::uint64_t i,
                 std::uint64_t n, const AdaptiveAccumulator& acc, double theta_norm,
                 std::uint64_t alpha, std::uint64_t evals) {
    if (!trace_every || !cb) return;
    if (i % trace_every != 0 && i != n) return;
    TraceRecord r;
    r.iter = i;
    r.xi = acc.xi;
    r.sigma2 = acc.variance_estimate();
    r.theta_norm = theta_norm;
    r.alpha = alpha;
    r.payoff_evals = evals;
    cb(r);
}

EstimateReport finish(const AdaptiveAccumulator& acc, const AlgoParams& p, std::uint64_t evals,
                      std::uint64_t truncations, Vec theta_final) {
    EstimateReport rep;
    rep.estimate = acc.xi;
    rep.variance = acc.variance_estimate();
    ConfidenceInterval ci = confidence_interval(acc, p.ci_level);
    rep.ci_low = ci.low;
    rep.ci_high = ci.high;
    rep.ci_degenerate = ci.degenerate;
    rep.n = p.n;
    rep.payoff_evals = evals;
    rep.truncations = truncations;
    rep.theta_final = std::move(theta_final);
    return rep;
}

// Apply one SA update; a non-finite gradient sample is treated as a landing
// outside every compact and resets theta instead of propagating NaNs.
void sa_advance(TruncatedSAState& st, const AlgoParams& p, const Vec& u) {
    if (all_finite(u))
        sa_step(st, p.gain, p.compacts, u);
    else
        sa_force_truncate(st);
}

}  // namespace

EstimateReport adis_run(ParametricRepresentation& rep, const AlgoParams& p, NormalStream& stream,
                        std::uint64_t trace_every, const TraceCallback& on_trace) {
    check_params(p);
    const Vec theta0 = resolve_theta0(rep, p);
    TruncatedSAState st = TruncatedSAState::at(theta0);
    AdaptiveAccumulator acc;
    const bool averaged_h = p.variant == Variant::adis_xi1avg || p.variant == Variant::adis_xi2avg;
    std::optional<IterateHistory> hist;
    if (averaged_h) hist.emplace(p.gain, p.tau, rep.param_dim());
    const std::uint64_t evals0 = rep.payoff_evals();
    Vec g(rep.sample_dim());
    for (std::uint64_t i = 1; i <= p.n; ++i) {
        stream.fill(g);
        double h = 0.0;
        Vec u;
        switch (p.variant) {
            case Variant::crude:
                h = rep.h_value(theta0, g);
                break;
            case Variant::adis_xi2: {
                auto hu = rep.coupled_h_u2(st.theta, g);
                h = hu.first;
                u = std::move(hu.second);
                break;
            }
            case Variant::adis_xi1:
                h = rep.h_value(st.theta, g);
                u = rep.u1_value(st.theta, g);
                break;
            case Variant::adis_xi1avg:
            case Variant::adis_xi2avg: {
                // H reads the window average of the *previous* iterates, so
                // average before this step's push; empty history means theta0.
                const Vec th_avg = hist->count() ? hist->averaged(p.avg_mode) : theta0;
                h = rep.h_value(th_avg, g);
                u = p.variant == Variant::adis_xi1avg ? rep.u1_value(st.theta, g)
                                                      : rep.u2_value(st.theta, g);
                break;
            }
            case Variant::nadis_raw:
            case Variant::nadis_avg:
                throw std::invalid_argument("two-stage variants must go through nadis_run");
        }
        acc.update(h);
        if (!u.empty()) sa_advance(st, p, u);
        if (averaged_h) hist->push(st.theta);
        maybe_trace(trace_every, on_trace, i, p.n, acc, norm2(st.theta), st.alpha,
                    rep.payoff_evals() - evals0);
    }
    return finish(acc, p, rep.payoff_evals() - evals0, st.alpha, st.theta);
}

EstimateReport nadis_run(ParametricRepresentation& rep, const AlgoParams& p, NormalStream& sa_stream,
                         NormalStream& mc_stream, std::uint64_t trace_every,
                         const TraceCallback& on_trace) {
    check_params(p);
    if (p.variant != Variant::nadis_raw && p.variant != Variant::nadis_avg)
        throw std::invalid_argument("nadis_run handles only the two-stage variants");
    const Vec theta0 = resolve_theta0(rep, p);
    TruncatedSAState st = TruncatedSAState::at(theta0);
    std::optional<IterateHistory> hist;
    if (p.variant == Variant::nadis_avg) hist.emplace(p.gain, p.tau, rep.param_dim());
    const std::uint64_t evals0 = rep.payoff_evals();
    Vec g(rep.sample_dim());
    for (std::uint64_t i = 1; i <= p.n; ++i) {
        sa_stream.fill(g);
        sa_advance(st, p, rep.u2_value(st.theta, g));
        if (hist) hist->push(st.theta);
    }
    const Vec plug = hist ? hist->averaged(p.avg_mode) : st.theta;
    const double plug_norm = norm2(plug);
    AdaptiveAccumulator acc;
    for (std::uint64_t i = 1; i <= p.n; ++i) {
        mc_stream.fill(g);
        acc.update(rep.h_value(plug, g));
        maybe_trace(trace_every, on_trace, i, p.n, acc, plug_norm, st.alpha,
                    rep.payoff_evals() - evals0);
    }
    return finish(acc, p, rep.payoff_evals() - evals0, st.alpha, plug);
}

EstimateReport run_algorithm(ParametricRepresentation& rep, const AlgoParams& p, std::uint64_t run_key,
                             std::uint64_t trace_every, const TraceCallback& on_trace) {
    NormalStream phase0(derive_key(run_key, 0));
    if (p.variant == Variant::nadis_raw || p.variant == Variant::nadis_avg) {
        NormalStream phase1(derive_key(run_key, 1));
        return nadis_run(rep, p, phase0, phase1, trace_every, on_trace);
    }
    return adis_run(rep, p, phase0, trace_every, on_trace);
}

}  // namespace adimc
