#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "market.hpp"
#include "model.hpp"
#include "runner.hpp"
#include "trace.hpp"

namespace adimc {

// Everything needed to execute one configured run.  The payoff closure owns
// copies of the market and payoff, so a BuiltExperiment is self-contained and
// cheap to build per replicate (thread safety by construction).
struct BuiltExperiment {
    MarketModel market;
    Payoff payoff;
    GaussianShiftModel model;
    AlgoParams algo;
};

BuiltExperiment build_experiment(const ExperimentConfig& cfg);

// Closed-form reference when one exists (run.reference, else Black-Scholes
// for a single-asset vanilla call); nullopt otherwise.
std::optional<double> reference_price(const ExperimentConfig& cfg);

struct PriceResult {
    EstimateReport report;
    double wall_seconds = 0.0;
    std::string variant;
    std::optional<double> reference;
    std::vector<TraceRecord> trace;  // filled when tracing is on
};

PriceResult run_price(const ExperimentConfig& cfg,
                      std::optional<std::uint64_t> seed_override = std::nullopt,
                      std::optional<std::uint64_t> trace_every_override = std::nullopt);

// Replicate i draws from streams keyed by derive_key(seed, i); runs are
// independent and executed on a small thread pool, results ordered by i.
struct ReplicateSummary {
    std::size_t runs = 0;
    double mean_estimate = 0.0;
    double sd_estimate = 0.0;      // sample standard deviation across runs
    double mean_variance = 0.0;    // average sigma_n^2
    std::optional<double> reference;
    double coverage = 0.0;         // fraction of CIs containing the reference
    std::vector<EstimateReport> reports;
};

ReplicateSummary run_replicates(const ExperimentConfig& cfg, std::size_t runs,
                                std::optional<std::uint64_t> seed_override = std::nullopt);

// One table row per scenario config: crude, adis-xi2, adis-xi2avg and
// nadis-avg at the scenario's parameters, i.e. the columns
// price | Var MC | Var xi2 | Var xi2-avg | Var nadis.  Rows must share n.
struct TableRow {
    std::string label;
    std::uint64_t n = 0;
    double price = 0.0;       // adis-xi2 estimate
    double var_mc = 0.0;
    double var_xi2 = 0.0;
    double var_xi2avg = 0.0;
    double var_nadis = 0.0;
    double wall_seconds = 0.0;
    std::uint64_t payoff_evals = 0;  // all four runs combined
};

std::vector<TableRow> run_table(const std::vector<ExperimentConfig>& rows);
std::string format_table_csv(const std::vector<TableRow>& rows);
std::string format_report(const PriceResult& r);  // key=value lines

}  // namespace adimc
