#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>

#include "gain.hpp"
#include "vec.hpp"

namespace adimc {

enum class AvgMode { verbatim, count };

// p(n) = sup{k >= 1 : k + tau/gamma_k <= n} ∧ n, with sup of the empty set
// read as +inf (so p = n until the window first fits).  The left side is
// increasing in k, hence the binary search.
inline std::uint64_t window_start(const GainSchedule& gs, double tau, std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("window_start: n must be >= 1");
    if (!(tau >= 0.0)) throw std::invalid_argument("window_start: tau must be >= 0");
    const auto fits = [&](std::uint64_t k) {
        return static_cast<double>(k) + tau / gs.gain_at(k) <= static_cast<double>(n);
    };
    if (!fits(1)) return n;
    std::uint64_t lo = 1, hi = n;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (fits(mid)) lo = mid;
        else hi = mid - 1;
    }
    return lo;
}

// Upper window index min(p + floor(tau/gamma_p), n); the clamp exists because
// the nominal window overruns n while n is small.
inline std::uint64_t window_end(const GainSchedule& gs, double tau, std::uint64_t p,
                                std::uint64_t n) {
    const double len = std::floor(tau / gs.gain_at(p));
    const double room = static_cast<double>(n - p);
    return p + static_cast<std::uint64_t>(len < room ? len : room);
}

// Stores iterates theta_first..theta_n, dropping everything below the running
// window start so memory stays proportional to the window length.  Also keeps
// a running sum so the hat-estimators can read the current average each step.
class IterateHistory {
public:
    IterateHistory(GainSchedule gs, double tau, std::size_t dim)
        : gs_(gs), tau_(tau), sum_(dim, 0.0) {
        if (!(tau > 0.0)) throw std::invalid_argument("IterateHistory: tau must be > 0");
    }

    void push(const Vec& theta) {
        ++n_;
        buf_.push_back(theta);
        for (std::size_t j = 0; j < sum_.size(); ++j) sum_[j] += theta[j];
        while (static_cast<double>(q_ + 1) + tau_ / gs_.gain_at(q_ + 1) <= static_cast<double>(n_))
            ++q_;
        const std::uint64_t keep_from = q_ >= 1 ? q_ : 1;
        while (first_ < keep_from) {
            const Vec& old = buf_.front();
            for (std::size_t j = 0; j < sum_.size(); ++j) sum_[j] -= old[j];
            buf_.pop_front();
            ++first_;
        }
        // Rebuild the running sum periodically; the add/drop recursion would
        // otherwise accumulate rounding drift over millions of pushes.
        if (++since_resum_ >= 8192) {
            since_resum_ = 0;
            std::fill(sum_.begin(), sum_.end(), 0.0);
            for (const Vec& v : buf_)
                for (std::size_t j = 0; j < sum_.size(); ++j) sum_[j] += v[j];
        }
    }

    std::uint64_t count() const { return n_; }
    std::uint64_t first_index() const { return first_; }
    bool has(std::uint64_t i) const { return i >= first_ && i <= n_; }

    const Vec& at(std::uint64_t i) const {
        if (!has(i)) throw std::out_of_range("IterateHistory: index outside stored range");
        return buf_[static_cast<std::size_t>(i - first_)];
    }

    // Current-window average in O(n - window_end) per call.
    Vec averaged(AvgMode mode) const {
        if (n_ == 0) throw std::logic_error("IterateHistory: no iterates pushed");
        const std::uint64_t p = q_ >= 1 ? q_ : n_;
        const std::uint64_t b = window_end(gs_, tau_, p, n_);
        Vec s(sum_.size(), 0.0);
        if (q_ == 0) {
            s = buf_.back();
        } else {
            s = sum_;
            for (std::uint64_t i = b + 1; i <= n_; ++i) {
                const Vec& v = buf_[static_cast<std::size_t>(i - first_)];
                for (std::size_t j = 0; j < s.size(); ++j) s[j] -= v[j];
            }
        }
        scale_window(s, mode, p, b);
        return s;
    }

    const GainSchedule& gain() const { return gs_; }
    double tau() const { return tau_; }

private:
    void scale_window(Vec& s, AvgMode mode, std::uint64_t p, std::uint64_t b) const {
        const double w = mode == AvgMode::verbatim
                             ? gs_.gain_at(p) / tau_
                             : 1.0 / static_cast<double>(b - p + 1);
        for (double& x : s) x *= w;
    }

    GainSchedule gs_;
    double tau_;
    std::deque<Vec> buf_;
    Vec sum_;
    std::uint64_t first_ = 1, n_ = 0, q_ = 0, since_resum_ = 0;
};

// Freshly summed window average over hist; the reference implementation used
// by reports and tests (the incremental one above differs only by rounding).
inline Vec averaged_iterate(const IterateHistory& hist, const GainSchedule& gs, double tau,
                            std::uint64_t n, AvgMode mode = AvgMode::verbatim) {
    if (!(tau > 0.0)) throw std::invalid_argument("averaged_iterate: tau must be > 0");
    const std::uint64_t p = window_start(gs, tau, n);
    const std::uint64_t b = window_end(gs, tau, p, n);
    if (!hist.has(p) || !hist.has(b))
        throw std::out_of_range("averaged_iterate: window not covered by history");
    Vec s(hist.at(p).size(), 0.0);
    for (std::uint64_t i = p; i <= b; ++i) {
        const Vec& v = hist.at(i);
        for (std::size_t j = 0; j < s.size(); ++j) s[j] += v[j];
    }
    const double w = mode == AvgMode::verbatim ? gs.gain_at(p) / tau
                                               : 1.0 / static_cast<double>(b - p + 1);
    for (double& x : s) x *= w;
    return s;
}

}  // namespace adimc
