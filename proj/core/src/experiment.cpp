#include "adimc/experiment.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace adimc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Vec uniform_grid(double maturity, std::size_t steps) {
    Vec g(steps);
    for (std::size_t k = 0; k < steps; ++k)
        g[k] = maturity * static_cast<double>(k + 1) / static_cast<double>(steps);
    return g;
}

// Raw-noise locations where the payoff loses smoothness, for the 1-D
// quadrature oracle: strike crossing and, for knock-outs, the barrier.
Vec kink_locations(const ExperimentConfig& cfg) {
    if (cfg.model.d != 1 || cfg.model.steps != 1) return {};
    const double s = cfg.model.spot[0], sigma = cfg.model.vol[0];
    const double T = cfg.model.maturity, r = cfg.model.r;
    const double drift = (r - 0.5 * sigma * sigma) * T, sg = sigma * std::sqrt(T);
    Vec out;
    const double w = cfg.payoff.weight[0];
    if (w > 0.0 && cfg.payoff.strike > 0.0)
        out.push_back((std::log(cfg.payoff.strike / (w * s)) - drift) / sg);
    if (cfg.payoff.kind == PayoffKind::down_out_basket_call && !cfg.payoff.barrier.empty() &&
        cfg.payoff.barrier[0] > 0.0)
        out.push_back((std::log(cfg.payoff.barrier[0] / s) - drift) / sg);
    return out;
}

}  // namespace

BuiltExperiment build_experiment(const ExperimentConfig& cfg) {
    const std::size_t N = cfg.model.steps, D = cfg.model.d;
    MarketModel market = make_market(D, cfg.model.spot, cfg.model.vol, cfg.model.r, cfg.model.rho,
                                     uniform_grid(cfg.model.maturity, N));
    Payoff payoff;
    payoff.kind = cfg.payoff.kind == PayoffKind::basket_call ? Payoff::Kind::basket_call
                                                             : Payoff::Kind::down_out_basket_call;
    payoff.weights = cfg.payoff.weight;
    payoff.strike = cfg.payoff.strike;
    payoff.barriers = cfg.payoff.barrier;
    payoff.discount = cfg.payoff.discount;

    DriftMatrix A;
    switch (cfg.algorithm.drift) {
        case DriftMatrix::Kind::identity:
            A = DriftMatrix::identity(N, D);
            break;
        case DriftMatrix::Kind::cameron_martin:
            A = DriftMatrix::cameron_martin(market.grid);
            break;
        case DriftMatrix::Kind::block:
            A = DriftMatrix::block(market.grid, D);
            break;
        case DriftMatrix::Kind::dense:
            throw std::invalid_argument("dense drift is not configurable");
    }

    GaussianShiftModel model(
        [market, payoff](const Vec& g) { return payoff_value(market, payoff, g); }, A);
    model.phi_breakpoints = kink_locations(cfg);

    AlgoParams algo;
    algo.variant = cfg.algorithm.variant;
    algo.n = cfg.algorithm.n;
    algo.gain = GainSchedule(cfg.algorithm.gamma, cfg.algorithm.a);
    algo.compacts = CompactSchedule(cfg.algorithm.r0, cfg.algorithm.growth);
    algo.tau = cfg.algorithm.tau;
    algo.avg_mode = cfg.algorithm.avg_mode;
    algo.theta0 = cfg.algorithm.theta0;

    return BuiltExperiment{std::move(market), std::move(payoff), std::move(model), std::move(algo)};
}

std::optional<double> reference_price(const ExperimentConfig& cfg) {
    if (cfg.run.reference) return cfg.run.reference;
    if (cfg.model.d != 1 || cfg.payoff.kind != PayoffKind::basket_call) return std::nullopt;
    const double w = cfg.payoff.weight[0];
    if (!(w > 0.0)) return std::nullopt;
    double price = w * bs_call_price(cfg.model.spot[0], cfg.payoff.strike / w, cfg.model.r,
                                     cfg.model.vol[0], cfg.model.maturity);
    if (!cfg.payoff.discount) price *= std::exp(cfg.model.r * cfg.model.maturity);
    return price;
}

PriceResult run_price(const ExperimentConfig& cfg, std::optional<std::uint64_t> seed_override,
                      std::optional<std::uint64_t> trace_every_override) {
    BuiltExperiment be = build_experiment(cfg);
    const std::uint64_t seed = seed_override.value_or(cfg.run.seed);
    const std::uint64_t every = trace_every_override.value_or(cfg.run.trace_every);
    PriceResult out;
    out.variant = variant_name(be.algo.variant);
    out.reference = reference_price(cfg);
    const auto t0 = Clock::now();
    const std::uint64_t run_key = derive_key(seed, 0);
    if (every > 0) {
        out.trace.reserve(static_cast<std::size_t>(be.algo.n / every + 1));
        out.report = run_algorithm(be.model, be.algo, run_key, every,
                                   [&](const TraceRecord& r) { out.trace.push_back(r); });
    } else {
        out.report = run_algorithm(be.model, be.algo, run_key);
    }
    out.wall_seconds = seconds_since(t0);
    return out;
}

ReplicateSummary run_replicates(const ExperimentConfig& cfg, std::size_t runs,
                                std::optional<std::uint64_t> seed_override) {
    if (runs == 0) throw std::invalid_argument("run_replicates: need at least one run");
    const std::uint64_t seed = seed_override.value_or(cfg.run.seed);
    ReplicateSummary sum;
    sum.runs = runs;
    sum.reference = reference_price(cfg);
    sum.reports.resize(runs);

    const std::size_t workers =
        std::min<std::size_t>(runs, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < runs; i += workers) {
                BuiltExperiment be = build_experiment(cfg);
                sum.reports[i] =
                    run_algorithm(be.model, be.algo, derive_key(seed, static_cast<std::uint64_t>(i)));
            }
        });
    for (std::thread& t : pool) t.join();

    double mean = 0.0, mean_var = 0.0;
    for (const EstimateReport& r : sum.reports) {
        mean += r.estimate;
        mean_var += r.variance;
    }
    mean /= static_cast<double>(runs);
    mean_var /= static_cast<double>(runs);
    double ss = 0.0;
    for (const EstimateReport& r : sum.reports) ss += (r.estimate - mean) * (r.estimate - mean);
    sum.mean_estimate = mean;
    sum.mean_variance = mean_var;
    sum.sd_estimate = runs > 1 ? std::sqrt(ss / static_cast<double>(runs - 1)) : 0.0;
    if (sum.reference) {
        std::size_t covered = 0;
        for (const EstimateReport& r : sum.reports)
            if (r.ci_low <= *sum.reference && *sum.reference <= r.ci_high) ++covered;
        sum.coverage = static_cast<double>(covered) / static_cast<double>(runs);
    }
    return sum;
}

std::vector<TableRow> run_table(const std::vector<ExperimentConfig>& rows) {
    if (rows.empty()) throw std::invalid_argument("run_table: no scenarios");
    for (const ExperimentConfig& cfg : rows)
        if (cfg.algorithm.n != rows.front().algorithm.n)
            throw std::invalid_argument("run_table: scenarios must share the same n");

    std::vector<TableRow> out;
    out.reserve(rows.size());
    for (const ExperimentConfig& cfg : rows) {
        TableRow row;
        row.label = cfg.run.label;
        row.n = cfg.algorithm.n;
        const auto t0 = Clock::now();
        const std::uint64_t run_key = derive_key(cfg.run.seed, 0);
        const Variant columns[] = {Variant::crude, Variant::adis_xi2, Variant::adis_xi2avg,
                                   Variant::nadis_avg};
        for (Variant v : columns) {
            BuiltExperiment be = build_experiment(cfg);
            be.algo.variant = v;
            EstimateReport rep = run_algorithm(be.model, be.algo, run_key);
            row.payoff_evals += rep.payoff_evals;
            switch (v) {
                case Variant::crude: row.var_mc = rep.variance; break;
                case Variant::adis_xi2:
                    row.var_xi2 = rep.variance;
                    row.price = rep.estimate;
                    break;
                case Variant::adis_xi2avg: row.var_xi2avg = rep.variance; break;
                default: row.var_nadis = rep.variance; break;
            }
        }
        row.wall_seconds = seconds_since(t0);
        out.push_back(std::move(row));
    }
    return out;
}

std::string format_table_csv(const std::vector<TableRow>& rows) {
    std::ostringstream os;
    os << "label,n,price,var_mc,var_xi2,var_xi2avg,var_nadis,wall_seconds,payoff_evals\n";
    for (const TableRow& r : rows) {
        os << r.label << ',' << r.n << ',' << format_double(r.price) << ','
           << format_double(r.var_mc) << ',' << format_double(r.var_xi2) << ','
           << format_double(r.var_xi2avg) << ',' << format_double(r.var_nadis) << ','
           << format_double(r.wall_seconds) << ',' << r.payoff_evals << '\n';
    }
    return os.str();
}

std::string format_report(const PriceResult& r) {
    std::ostringstream os;
    os << "variant=" << r.variant << '\n'
       << "estimate=" << format_double(r.report.estimate) << '\n'
       << "variance=" << format_double(r.report.variance) << '\n'
       << "ci_low=" << format_double(r.report.ci_low) << '\n'
       << "ci_high=" << format_double(r.report.ci_high) << '\n'
       << "ci_degenerate=" << (r.report.ci_degenerate ? "true" : "false") << '\n'
       << "n=" << r.report.n << '\n'
       << "payoff_evals=" << r.report.payoff_evals << '\n'
       << "truncations=" << r.report.truncations << '\n'
       << "theta_norm=" << format_double(norm2(r.report.theta_final)) << '\n'
       << "wall_seconds=" << format_double(r.wall_seconds) << '\n';
    if (r.reference) os << "reference=" << format_double(*r.reference) << '\n';
    return os.str();
}

}  // namespace adimc
