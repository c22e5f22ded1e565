#include "adimc/trace.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace adimc {

namespace {

constexpr const char* kHeader = "iter,xi,sigma2,theta_norm,alpha,payoff_evals";

double parse_double(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("trace: bad numeric field '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("trace: bad integer field '" + s + "'");
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("trace: formatting failed");
    return std::string(buf, ptr);
}

void write_trace(std::ostream& os, const std::vector<TraceRecord>& records) {
    os << kHeader << '\n';
    for (const TraceRecord& r : records) {
        os << r.iter << ',' << format_double(r.xi) << ',' << format_double(r.sigma2) << ','
           << format_double(r.theta_norm) << ',' << r.alpha << ',' << r.payoff_evals << '\n';
    }
}

void write_trace_file(const std::string& path, const std::vector<TraceRecord>& records) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("trace: cannot open '" + path + "' for writing");
    write_trace(os, records);
    if (!os) throw std::runtime_error("trace: write to '" + path + "' failed");
}

std::vector<TraceRecord> read_trace(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("trace: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) throw std::runtime_error("trace: unexpected header '" + line + "'");
    std::vector<TraceRecord> out;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t pos = line.find(',', start);
            if (pos == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        if (fields.size() != 6)
            throw std::runtime_error("trace: expected 6 fields, got " + std::to_string(fields.size()));
        TraceRecord r;
        r.iter = parse_u64(fields[0]);
        r.xi = parse_double(fields[1]);
        r.sigma2 = parse_double(fields[2]);
        r.theta_norm = parse_double(fields[3]);
        r.alpha = parse_u64(fields[4]);
        r.payoff_evals = parse_u64(fields[5]);
        out.push_back(r);
    }
    return out;
}

std::vector<TraceRecord> read_trace_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("trace: cannot open '" + path + "'");
    return read_trace(is);
}

}  // namespace adimc
