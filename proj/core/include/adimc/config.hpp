#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"
#include "runner.hpp"
#include "vec.hpp"

namespace adimc {

struct ConfigIssue {
    std::string path;     // section.key, or section for structural problems
    std::string message;
};

// Thrown after the whole file has been examined; carries every violation so a
// user can fix a config in one pass.
class ConfigParseError : public std::runtime_error {
public:
    explicit ConfigParseError(std::vector<ConfigIssue> issues);
    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

struct ModelSection {
    std::size_t d = 1;
    Vec spot, vol;            // broadcast to d entries
    double r = 0.0;
    double rho = 0.0;
    double maturity = 0.0;
    double steps_per_year = 1.0;
    std::size_t steps = 1;    // derived: steps_per_year * maturity
};

enum class PayoffKind { basket_call, down_out_basket_call };

struct PayoffSection {
    PayoffKind kind = PayoffKind::basket_call;
    Vec weight;               // defaults to 1/d each
    double strike = 0.0;
    Vec barrier;              // down-and-out only
    bool discount = true;
};

struct AlgorithmSection {
    Variant variant = Variant::adis_xi2;
    std::uint64_t n = 0;
    double gamma = 0.0;
    double a = 0.75;
    double tau = 1.0;
    double r0 = 5.0;
    double growth = 2.0;
    Vec theta0;               // empty = origin, else broadcast to the drift dimension
    DriftMatrix::Kind drift = DriftMatrix::Kind::identity;
    AvgMode avg_mode = AvgMode::verbatim;
};

struct RunSection {
    std::uint64_t seed = 1;
    std::uint64_t replicates = 1;
    std::uint64_t trace_every = 0;
    std::string out;
    std::string label;
    std::optional<double> reference;  // true value for coverage reports
};

struct ExperimentConfig {
    ModelSection model;
    PayoffSection payoff;
    AlgorithmSection algorithm;
    RunSection run;

    std::size_t param_dim() const;  // theta dimension implied by drift kind
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace adimc
