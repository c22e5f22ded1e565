#include "adimc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace adimc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string join_issues(const std::vector<ConfigIssue>& issues) {
    std::ostringstream os;
    os << "invalid config (" << issues.size() << (issues.size() == 1 ? " issue)" : " issues)");
    for (const ConfigIssue& i : issues) os << "\n  " << i.path << ": " << i.message;
    return os.str();
}

std::optional<double> parse_double(const std::string& s) {
    const std::string t = trim(s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

std::optional<std::uint64_t> parse_u64(const std::string& s) {
    const std::string t = trim(s);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

using Section = std::map<std::string, std::string>;

// Typed access to one section; remembers which keys were consumed so leftover
// (misspelled) keys can be reported, and records every failure instead of
// stopping at the first.
class Extractor {
public:
    Extractor(std::string name, const Section* sec, std::vector<ConfigIssue>& issues)
        : name_(std::move(name)), sec_(sec), issues_(&issues) {}

    bool has(const std::string& key) const { return sec_ && sec_->count(key); }

    std::optional<std::string> str(const std::string& key) {
        if (!has(key)) return std::nullopt;
        used_.insert(key);
        return sec_->at(key);
    }

    std::optional<double> number(const std::string& key) {
        auto raw = str(key);
        if (!raw) return std::nullopt;
        auto v = parse_double(*raw);
        if (!v) issue(key, "not a number: '" + trim(*raw) + "'");
        return v;
    }

    std::optional<std::uint64_t> integer(const std::string& key) {
        auto raw = str(key);
        if (!raw) return std::nullopt;
        auto v = parse_u64(*raw);
        if (!v) issue(key, "not a non-negative integer: '" + trim(*raw) + "'");
        return v;
    }

    std::optional<bool> boolean(const std::string& key) {
        auto raw = str(key);
        if (!raw) return std::nullopt;
        const std::string t = trim(*raw);
        if (t == "true") return true;
        if (t == "false") return false;
        issue(key, "expected true or false, got '" + t + "'");
        return std::nullopt;
    }

    std::optional<Vec> list(const std::string& key) {
        auto raw = str(key);
        if (!raw) return std::nullopt;
        Vec out;
        std::size_t start = 0;
        const std::string& s = *raw;
        bool ok = true;
        while (true) {
            const std::size_t pos = s.find(',', start);
            const std::string item = s.substr(start, pos == std::string::npos ? pos : pos - start);
            auto v = parse_double(item);
            if (!v) {
                issue(key, "not a number: '" + trim(item) + "'");
                ok = false;
            } else {
                out.push_back(*v);
            }
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        if (!ok) return std::nullopt;
        return out;
    }

    void require(const std::string& key) {
        if (!has(key)) issue(key, "missing required key");
    }

    void issue(const std::string& key, const std::string& msg) {
        issues_->push_back({name_ + "." + key, msg});
    }

    void report_unknown_keys() {
        if (!sec_) return;
        for (const auto& [k, v] : *sec_)
            if (!used_.count(k)) issue(k, "unknown key");
    }

private:
    std::string name_;
    const Section* sec_;
    std::vector<ConfigIssue>* issues_;
    std::set<std::string> used_;
};

// Broadcast a scalar to `dim` entries; any other size mismatch is an error.
bool broadcast(Vec& v, std::size_t dim, Extractor& ex, const std::string& key) {
    if (v.size() == dim) return true;
    if (v.size() == 1) {
        v.assign(dim, v[0]);
        return true;
    }
    ex.issue(key, "expected 1 or " + std::to_string(dim) + " entries, got " +
                      std::to_string(v.size()));
    return false;
}

}  // namespace

ConfigParseError::ConfigParseError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::size_t ExperimentConfig::param_dim() const {
    switch (algorithm.drift) {
        case DriftMatrix::Kind::identity:
            return model.steps * model.d;
        case DriftMatrix::Kind::cameron_martin:
            return 1;
        case DriftMatrix::Kind::block:
            return model.d;
        case DriftMatrix::Kind::dense:
            break;
    }
    throw std::logic_error("drift kind not reachable from config");
}

ExperimentConfig parse_config_text(const std::string& text) {
    std::vector<ConfigIssue> issues;
    std::map<std::string, Section> sections;
    const std::set<std::string> known_sections{"model", "payoff", "algorithm", "run"};

    std::istringstream is(text);
    std::string line, current;
    bool in_unknown_section = false;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            current.clear();
            in_unknown_section = false;
            if (t.back() != ']') {
                issues.push_back({"line " + std::to_string(lineno), "malformed section header"});
                continue;
            }
            const std::string name = trim(t.substr(1, t.size() - 2));
            if (!known_sections.count(name)) {
                issues.push_back({name.empty() ? "line " + std::to_string(lineno) : name,
                                  "unknown section"});
                in_unknown_section = true;  // swallow its keys; the section was reported
            } else {
                current = name;
                sections[current];
            }
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            issues.push_back({"line " + std::to_string(lineno), "expected key = value"});
            continue;
        }
        if (current.empty()) {
            if (!in_unknown_section)
                issues.push_back({"line " + std::to_string(lineno), "key outside any section"});
            continue;
        }
        sections[current][trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }

    auto section_ptr = [&](const char* name) -> const Section* {
        auto it = sections.find(name);
        return it == sections.end() ? nullptr : &it->second;
    };

    ExperimentConfig cfg;

    // --- model ---
    Extractor m("model", section_ptr("model"), issues);
    if (auto v = m.integer("d")) {
        if (*v == 0)
            m.issue("d", "must be >= 1");
        else
            cfg.model.d = static_cast<std::size_t>(*v);
    }
    m.require("spot");
    m.require("vol");
    m.require("r");
    m.require("maturity");
    if (auto v = m.list("spot")) cfg.model.spot = *v;
    if (auto v = m.list("vol")) cfg.model.vol = *v;
    if (auto v = m.number("r")) cfg.model.r = *v;
    if (auto v = m.number("rho")) cfg.model.rho = *v;
    if (auto v = m.number("maturity")) {
        if (*v > 0.0)
            cfg.model.maturity = *v;
        else
            m.issue("maturity", "must be > 0");
    }
    if (auto v = m.number("steps-per-year")) {
        if (*v > 0.0)
            cfg.model.steps_per_year = *v;
        else
            m.issue("steps-per-year", "must be > 0");
    }
    if (!cfg.model.spot.empty() && !broadcast(cfg.model.spot, cfg.model.d, m, "spot")) {
    }
    if (!cfg.model.vol.empty() && !broadcast(cfg.model.vol, cfg.model.d, m, "vol")) {
    }
    for (double s : cfg.model.spot)
        if (!(s > 0.0)) {
            m.issue("spot", "entries must be > 0");
            break;
        }
    for (double s : cfg.model.vol)
        if (!(s > 0.0)) {
            m.issue("vol", "entries must be > 0");
            break;
        }
    if (cfg.model.d == 1) {
        if (cfg.model.rho != 0.0) m.issue("rho", "correlation requires d >= 2");
    } else {
        const double lo = -1.0 / (static_cast<double>(cfg.model.d) - 1.0);
        if (!(cfg.model.rho > lo && cfg.model.rho < 1.0))
            m.issue("rho", "must lie in (-1/(d-1), 1)");
    }
    if (cfg.model.maturity > 0.0) {
        const double n_real = cfg.model.steps_per_year * cfg.model.maturity;
        const double n_round = std::round(n_real);
        if (n_round < 1.0 || std::fabs(n_real - n_round) > 1e-9)
            m.issue("steps-per-year", "steps-per-year * maturity must be a whole number >= 1");
        else
            cfg.model.steps = static_cast<std::size_t>(n_round);
    }
    m.report_unknown_keys();

    // --- payoff ---
    Extractor p("payoff", section_ptr("payoff"), issues);
    p.require("variant");
    p.require("strike");
    bool down_out = false;
    if (auto v = p.str("variant")) {
        if (*v == "basket-call")
            cfg.payoff.kind = PayoffKind::basket_call;
        else if (*v == "down-out-basket-call") {
            cfg.payoff.kind = PayoffKind::down_out_basket_call;
            down_out = true;
        } else
            p.issue("variant", "unknown payoff variant '" + *v + "'");
    }
    if (auto v = p.number("strike")) {
        if (*v > 0.0)
            cfg.payoff.strike = *v;
        else
            p.issue("strike", "must be > 0");
    }
    if (auto v = p.list("weight"))
        cfg.payoff.weight = *v;
    else if (!p.has("weight"))
        cfg.payoff.weight.assign(cfg.model.d, 1.0 / static_cast<double>(cfg.model.d));
    if (!cfg.payoff.weight.empty()) broadcast(cfg.payoff.weight, cfg.model.d, p, "weight");
    if (down_out) {
        p.require("barrier");
        if (auto v = p.list("barrier")) cfg.payoff.barrier = *v;
        if (!cfg.payoff.barrier.empty() && broadcast(cfg.payoff.barrier, cfg.model.d, p, "barrier") &&
            cfg.model.spot.size() == cfg.model.d) {
            for (std::size_t i = 0; i < cfg.model.d; ++i)
                if (!(cfg.payoff.barrier[i] >= 0.0 && cfg.payoff.barrier[i] < cfg.model.spot[i])) {
                    p.issue("barrier", "entries must satisfy 0 <= barrier < spot");
                    break;
                }
        }
    } else if (p.has("barrier")) {
        p.str("barrier");
        p.issue("barrier", "only valid for down-out-basket-call");
    }
    if (auto v = p.boolean("discount")) cfg.payoff.discount = *v;
    p.report_unknown_keys();

    // --- algorithm ---
    Extractor a("algorithm", section_ptr("algorithm"), issues);
    a.require("variant");
    a.require("n");
    a.require("gamma");
    if (auto v = a.str("variant")) {
        if (auto var = variant_from_name(*v))
            cfg.algorithm.variant = *var;
        else
            a.issue("variant", "unknown algorithm variant '" + *v + "'");
    }
    if (auto v = a.integer("n")) {
        if (*v == 0)
            a.issue("n", "must be >= 1");
        else
            cfg.algorithm.n = *v;
    }
    if (auto v = a.number("gamma")) {
        if (*v >= 0.0)
            cfg.algorithm.gamma = *v;
        else
            a.issue("gamma", "must be >= 0");
    }
    if (auto v = a.number("a")) {
        if (*v > 0.5 && *v <= 1.0)
            cfg.algorithm.a = *v;
        else
            a.issue("a", "must lie in (1/2, 1]");
    }
    if (auto v = a.number("tau")) {
        if (*v > 0.0)
            cfg.algorithm.tau = *v;
        else
            a.issue("tau", "must be > 0");
    }
    if (auto v = a.number("r0")) {
        if (*v > 0.0)
            cfg.algorithm.r0 = *v;
        else
            a.issue("r0", "must be > 0");
    }
    if (auto v = a.number("growth")) {
        if (*v > 1.0)
            cfg.algorithm.growth = *v;
        else
            a.issue("growth", "must be > 1");
    }
    if (auto v = a.str("drift-matrix")) {
        if (*v == "identity")
            cfg.algorithm.drift = DriftMatrix::Kind::identity;
        else if (*v == "cameron-martin")
            cfg.algorithm.drift = DriftMatrix::Kind::cameron_martin;
        else if (*v == "block")
            cfg.algorithm.drift = DriftMatrix::Kind::block;
        else
            a.issue("drift-matrix", "unknown drift matrix '" + *v + "'");
    }
    if (auto v = a.str("avg-normalize")) {
        if (*v == "verbatim")
            cfg.algorithm.avg_mode = AvgMode::verbatim;
        else if (*v == "count")
            cfg.algorithm.avg_mode = AvgMode::count;
        else
            a.issue("avg-normalize", "unknown normalization '" + *v + "'");
    }
    if (cfg.algorithm.drift == DriftMatrix::Kind::cameron_martin && cfg.model.d != 1)
        a.issue("drift-matrix", "cameron-martin drift requires a single-asset model");
    if (auto v = a.list("theta0")) cfg.algorithm.theta0 = *v;
    if (!cfg.algorithm.theta0.empty() && cfg.model.steps >= 1) {
        if (broadcast(cfg.algorithm.theta0, cfg.param_dim(), a, "theta0")) {
            const double r0 = cfg.algorithm.r0;
            if (norm2_sq(cfg.algorithm.theta0) > r0 * r0)
                a.issue("theta0", "must lie inside the initial compact (|theta0| <= r0)");
        }
    }
    a.report_unknown_keys();

    // --- run ---
    Extractor r("run", section_ptr("run"), issues);
    if (auto v = r.integer("seed")) cfg.run.seed = *v;
    if (auto v = r.integer("replicates")) {
        if (*v == 0)
            r.issue("replicates", "must be >= 1");
        else
            cfg.run.replicates = *v;
    }
    if (auto v = r.integer("trace-every")) cfg.run.trace_every = *v;
    if (auto v = r.str("out")) cfg.run.out = *v;
    if (auto v = r.str("label")) cfg.run.label = *v;
    if (auto v = r.number("reference")) cfg.run.reference = *v;
    r.report_unknown_keys();

    if (!issues.empty()) throw ConfigParseError(std::move(issues));
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigParseError({{path, "cannot open file"}});
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace adimc
