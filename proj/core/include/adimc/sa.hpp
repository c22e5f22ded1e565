#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "gain.hpp"
#include "vec.hpp"

namespace adimc {

// Randomly truncated Robbins-Monro state.  The candidate step is accepted
// while it stays in the current compact K_alpha; otherwise the iterate is
// reset to theta0 and alpha grows, enlarging the compact for the next try.
struct TruncatedSAState {
    Vec theta;
    Vec theta0;
    std::uint64_t alpha = 0;
    std::uint64_t n = 0;

    static TruncatedSAState at(Vec start) {
        TruncatedSAState s;
        s.theta = start;
        s.theta0 = std::move(start);
        return s;
    }
};

enum class StepOutcome { accepted, truncated };

// One step of the truncated scheme:
//   candidate = theta_n - gamma_{n+1} * u;
//   inside K_alpha  -> accept;  outside -> reset to theta0, alpha + 1.
// Non-finite gradient samples are a caller error, not a silent truncation:
// they signal a diverged payoff evaluation that must be surfaced.
inline StepOutcome sa_step(TruncatedSAState& st, const GainSchedule& gs, const CompactSchedule& cs,
                           const Vec& u) {
    if (u.size() != st.theta.size()) throw std::invalid_argument("sa_step: u dimension mismatch");
    if (!all_finite(u)) throw std::invalid_argument("sa_step: non-finite gradient sample");

    const double gain = gs.gain_at(st.n + 1);
    double nsq = 0.0;
    Vec cand(st.theta.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        cand[i] = st.theta[i] - gain * u[i];
        nsq += cand[i] * cand[i];
    }
    ++st.n;
    // An overflowed candidate norm (inf) compares outside every radius.
    if (nsq == nsq && cs.contains(st.alpha, nsq)) {
        st.theta = std::move(cand);
        return StepOutcome::accepted;
    }
    st.theta = st.theta0;
    ++st.alpha;
    return StepOutcome::truncated;
}

// Truncation applied without a candidate, used by runners when the gradient
// sample itself is non-finite (the step would be rejected at any scale).
inline void sa_force_truncate(TruncatedSAState& st) {
    ++st.n;
    st.theta = st.theta0;
    ++st.alpha;
}

}  // namespace adimc
