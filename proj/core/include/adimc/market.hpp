#pragma once

#include <cstdint>
#include <stdexcept>

#include "vec.hpp"

namespace adimc {

// Multi-asset Black-Scholes market on a fixed time grid with equicorrelated
// driving noise.  Paths use the exact lognormal step (constant vols), so table
// reproduction is purely a Monte Carlo error question, not a bias one.
struct MarketModel {
    std::size_t D = 1;
    Vec spots;            // s^i > 0
    Vec vols;             // sigma^i > 0
    double r = 0.0;
    double rho = 0.0;     // equicorrelation, in (-1/(D-1), 1)
    Vec grid;             // 0 < t_1 < ... < t_N = T
    Matrix chol;          // lower factor of the correlation matrix

    std::size_t steps() const { return grid.size(); }
    std::size_t noise_dim() const { return steps() * D; }
    double maturity() const { return grid.back(); }
};

Matrix cholesky_factor(std::size_t D, double rho);

MarketModel make_market(std::size_t D, Vec spots, Vec vols, double r, double rho, Vec grid);

// S^i at every grid date; row k holds S_{t_{k+1}}.  Pure function of g.
Matrix simulate_path(const MarketModel& mm, const Vec& g);

struct Payoff {
    enum class Kind { basket_call, down_out_basket_call };
    Kind kind = Kind::basket_call;
    Vec weights;   // algebraic; signed weights admit exchange options
    double strike = 0.0;
    Vec barriers;  // down-and-out levels, one per asset
    bool discount = true;
};

double payoff_value(const MarketModel& mm, const Payoff& p, const Vec& g);

double bs_call_price(double s, double K, double r, double sigma, double T);

}  // namespace adimc
