// Command-line front end: price one config, reproduce a whole table from a
// directory of scenario configs, study replicate coverage, or dump a
// per-iteration trace.  All randomness is keyed by --seed / run.seed.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adimc/config.hpp"
#include "adimc/experiment.hpp"
#include "adimc/trace.hpp"

namespace fs = std::filesystem;
using namespace adimc;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string avg_normalize;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool wants_config = true) {
    if (wants_config)
        cmd->add_option("config", o.config_path, "experiment config file")->required();
    cmd->add_option("--seed", o.seed, "override run.seed");
    cmd->add_option("--out", o.out, "write the primary artifact to this file");
    cmd->add_option("--avg-normalize", o.avg_normalize, "override window normalization")
        ->check(CLI::IsMember({"verbatim", "count"}));
}

ExperimentConfig load_with_overrides(const CommonOpts& o) {
    ExperimentConfig cfg = load_config(o.config_path);
    if (o.avg_normalize == "verbatim") cfg.algorithm.avg_mode = AvgMode::verbatim;
    if (o.avg_normalize == "count") cfg.algorithm.avg_mode = AvgMode::count;
    return cfg;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << text;
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

int cmd_price(const CommonOpts& o, std::optional<std::uint64_t> trace_every) {
    ExperimentConfig cfg = load_with_overrides(o);
    PriceResult res = run_price(cfg, o.seed, trace_every);
    const std::string report = format_report(res);
    std::cout << report;
    if (!o.out.empty()) write_text(o.out, report);
    // The trace, when requested, is a side artifact routed to run.out so it
    // does not collide with the report stream.
    if (!res.trace.empty() && !cfg.run.out.empty()) write_trace_file(cfg.run.out, res.trace);
    return 0;
}

int cmd_trace(const CommonOpts& o, std::uint64_t every) {
    if (every == 0) throw std::runtime_error("--every must be >= 1");
    ExperimentConfig cfg = load_with_overrides(o);
    PriceResult res = run_price(cfg, o.seed, every);
    const std::string path = !o.out.empty() ? o.out : cfg.run.out;
    if (path.empty()) {
        write_trace(std::cout, res.trace);
    } else {
        write_trace_file(path, res.trace);
        std::cout << "trace=" << path << "\nrows=" << res.trace.size() << '\n';
    }
    return 0;
}

int cmd_table(const CommonOpts& o) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(o.config_path))
        if (e.is_regular_file() && e.path().extension() == ".cfg") files.push_back(e.path());
    if (files.empty())
        throw std::runtime_error("no .cfg files in '" + o.config_path + "'");
    std::sort(files.begin(), files.end());
    std::vector<ExperimentConfig> rows;
    for (const fs::path& f : files) {
        ExperimentConfig cfg = load_config(f.string());
        if (cfg.run.label.empty()) cfg.run.label = f.stem().string();
        if (o.avg_normalize == "verbatim") cfg.algorithm.avg_mode = AvgMode::verbatim;
        if (o.avg_normalize == "count") cfg.algorithm.avg_mode = AvgMode::count;
        if (o.seed) cfg.run.seed = *o.seed;
        rows.push_back(std::move(cfg));
    }
    const std::string csv = format_table_csv(run_table(rows));
    std::cout << csv;
    if (!o.out.empty()) write_text(o.out, csv);
    return 0;
}

int cmd_replicate(const CommonOpts& o, std::uint64_t runs) {
    ExperimentConfig cfg = load_with_overrides(o);
    const std::size_t r = runs > 0 ? runs : cfg.run.replicates;
    ReplicateSummary sum = run_replicates(cfg, r, o.seed);
    std::cout << "runs=" << sum.runs << '\n'
              << "mean_estimate=" << format_double(sum.mean_estimate) << '\n'
              << "sd_estimate=" << format_double(sum.sd_estimate) << '\n'
              << "mean_variance=" << format_double(sum.mean_variance) << '\n';
    if (sum.reference) {
        std::cout << "reference=" << format_double(*sum.reference) << '\n'
                  << "coverage=" << format_double(sum.coverage) << '\n';
    }
    if (!o.out.empty()) {
        std::ostringstream os;
        os << "run,estimate,variance,ci_low,ci_high,truncations\n";
        for (std::size_t i = 0; i < sum.reports.size(); ++i) {
            const EstimateReport& rep = sum.reports[i];
            os << i << ',' << format_double(rep.estimate) << ',' << format_double(rep.variance)
               << ',' << format_double(rep.ci_low) << ',' << format_double(rep.ci_high) << ','
               << rep.truncations << '\n';
        }
        write_text(o.out, os.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive importance-sampling Monte Carlo pricer"};
    app.require_subcommand(1);

    CommonOpts price_o, table_o, repl_o, trace_o;
    std::optional<std::uint64_t> price_trace_every;
    std::uint64_t repl_runs = 0, trace_every = 0;

    CLI::App* price = app.add_subcommand("price", "estimate one configured price");
    add_common(price, price_o);
    price->add_option("--trace-every", price_trace_every, "also record every k-th iteration");

    CLI::App* table = app.add_subcommand("table", "run every scenario config in a directory");
    table->add_option("config-dir", table_o.config_path, "directory of .cfg scenarios")->required();
    add_common(table, table_o, false);

    CLI::App* repl = app.add_subcommand("replicate", "independent replicates and coverage");
    add_common(repl, repl_o);
    repl->add_option("--runs", repl_runs, "number of replicates (default run.replicates)");

    CLI::App* trace = app.add_subcommand("trace", "write a per-iteration CSV trace");
    add_common(trace, trace_o);
    trace->add_option("--every", trace_every, "record every k-th iteration")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (price->parsed()) return cmd_price(price_o, price_trace_every);
        if (table->parsed()) return cmd_table(table_o);
        if (repl->parsed()) return cmd_replicate(repl_o, repl_runs);
        if (trace->parsed()) return cmd_trace(trace_o, trace_every);
    } catch (const ConfigParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
