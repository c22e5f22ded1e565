#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "accum.hpp"
#include "gain.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "trace.hpp"
#include "window.hpp"

namespace adimc {

enum class Variant {
    crude,
    adis_xi1,
    adis_xi2,
    adis_xi1avg,
    adis_xi2avg,
    nadis_raw,
    nadis_avg,
};

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(std::string_view s);

// Exact payoff-evaluation cost per run of length n:
//   crude, adis-xi2: n        (xi2 shares one phi call between H and U)
//   adis-xi1, adis-xi1avg, adis-xi2avg, nadis-*: 2n
std::uint64_t expected_payoff_evals(Variant v, std::uint64_t n);

struct AlgoParams {
    Variant variant = Variant::adis_xi2;
    std::uint64_t n = 0;
    GainSchedule gain{};
    CompactSchedule compacts{};
    double tau = 1.0;
    AvgMode avg_mode = AvgMode::verbatim;
    Vec theta0;  // empty = origin; must lie inside the initial compact
    double ci_level = 0.95;
};

using TraceCallback = std::function<void(const TraceRecord&)>;

// One-pass adaptive runs (crude and the four xi variants).  The estimator and
// the SA recursion see the same draw each iteration; a non-finite gradient
// sample triggers a truncation step instead of poisoning theta.
EstimateReport adis_run(ParametricRepresentation& rep, const AlgoParams& p, NormalStream& stream,
                        std::uint64_t trace_every = 0, const TraceCallback& on_trace = {});

// Two-stage run: U2-driven SA on sa_stream, then a fresh plain pass on
// mc_stream at the frozen raw or window-averaged iterate.  Trace rows cover
// the estimation pass, where theta and alpha are constant.
EstimateReport nadis_run(ParametricRepresentation& rep, const AlgoParams& p, NormalStream& sa_stream,
                         NormalStream& mc_stream, std::uint64_t trace_every = 0,
                         const TraceCallback& on_trace = {});

// Dispatch with the stream convention used everywhere: phase streams are
// NormalStream(derive_key(run_key, phase)), phase 0 = estimation pass,
// phase 1 = the second stage of nadis.
EstimateReport run_algorithm(ParametricRepresentation& rep, const AlgoParams& p, std::uint64_t run_key,
                             std::uint64_t trace_every = 0, const TraceCallback& on_trace = {});

}  // namespace adimc
