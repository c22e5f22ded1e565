#include "adimc/market.hpp"

#include <cmath>
#include <string>

#include "adimc/normal.hpp"

namespace adimc {

Matrix cholesky_factor(std::size_t D, double rho) {
    if (D == 0) throw std::invalid_argument("cholesky_factor: D must be >= 1");
    if (D > 1) {
        const double lo = -1.0 / (static_cast<double>(D) - 1.0);
        if (!(rho > lo && rho < 1.0))
            throw std::invalid_argument("cholesky_factor: rho must lie in (" + std::to_string(lo) +
                                        ", 1) for D=" + std::to_string(D));
    }
    Matrix gamma(D, D);
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j) gamma(i, j) = i == j ? 1.0 : rho;

    Matrix L(D, D);
    for (std::size_t i = 0; i < D; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = gamma(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            if (i == j) {
                if (s <= 0.0) throw std::invalid_argument("cholesky_factor: matrix not positive definite");
                L(i, i) = std::sqrt(s);
            } else {
                L(i, j) = s / L(j, j);
            }
        }
    }
    return L;
}

MarketModel make_market(std::size_t D, Vec spots, Vec vols, double r, double rho, Vec grid) {
    if (spots.size() != D || vols.size() != D)
        throw std::invalid_argument("make_market: spots/vols must have D entries");
    for (double s : spots)
        if (!(s > 0.0)) throw std::invalid_argument("make_market: spots must be > 0");
    for (double v : vols)
        if (!(v > 0.0)) throw std::invalid_argument("make_market: vols must be > 0");
    if (grid.empty()) throw std::invalid_argument("make_market: empty time grid");
    double prev = 0.0;
    for (double t : grid) {
        if (!(t > prev)) throw std::invalid_argument("make_market: grid must be strictly increasing from 0");
        prev = t;
    }
    MarketModel mm;
    mm.D = D;
    mm.spots = std::move(spots);
    mm.vols = std::move(vols);
    mm.r = r;
    mm.rho = rho;
    mm.grid = std::move(grid);
    mm.chol = cholesky_factor(D, rho);
    return mm;
}

Matrix simulate_path(const MarketModel& mm, const Vec& g) {
    const std::size_t N = mm.steps(), D = mm.D;
    if (g.size() != N * D) throw std::invalid_argument("simulate_path: noise length != N*D");
    Matrix S(N, D);
    Vec s = mm.spots;
    Vec z(D);
    double t_prev = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        const double dt = mm.grid[k] - t_prev;
        t_prev = mm.grid[k];
        const double sqdt = std::sqrt(dt);
        // z = chol * g_k correlates the k-th D-block of the driving noise
        for (std::size_t i = 0; i < D; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j <= i; ++j) acc += mm.chol(i, j) * g[k * D + j];
            z[i] = acc;
        }
        for (std::size_t i = 0; i < D; ++i) {
            const double sig = mm.vols[i];
            s[i] *= std::exp((mm.r - 0.5 * sig * sig) * dt + sig * sqdt * z[i]);
            S(k, i) = s[i];
        }
    }
    return S;
}

double payoff_value(const MarketModel& mm, const Payoff& p, const Vec& g) {
    const std::size_t N = mm.steps(), D = mm.D;
    if (p.weights.size() != D) throw std::invalid_argument("payoff_value: weights must have D entries");

    const Matrix S = simulate_path(mm, g);
    if (p.kind == Payoff::Kind::down_out_basket_call) {
        if (p.barriers.size() != D)
            throw std::invalid_argument("payoff_value: barriers must have D entries");
        for (std::size_t k = 0; k < N; ++k)
            for (std::size_t i = 0; i < D; ++i)
                if (S(k, i) < p.barriers[i]) return 0.0;
    }
    double basket = -p.strike;
    for (std::size_t i = 0; i < D; ++i) basket += p.weights[i] * S(N - 1, i);
    if (basket <= 0.0) return 0.0;
    return p.discount ? basket * std::exp(-mm.r * mm.maturity()) : basket;
}

double bs_call_price(double s, double K, double r, double sigma, double T) {
    if (!(s > 0.0 && K > 0.0 && sigma > 0.0 && T > 0.0))
        throw std::invalid_argument("bs_call_price: s, K, sigma, T must be > 0");
    const double sig_sqt = sigma * std::sqrt(T);
    const double d1 = (std::log(s / K) + (r + 0.5 * sigma * sigma) * T) / sig_sqt;
    const double d2 = d1 - sig_sqt;
    return s * normal_cdf(d1) - K * std::exp(-r * T) * normal_cdf(d2);
}

}  // namespace adimc
