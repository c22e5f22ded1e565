#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace adimc {

struct TraceRecord {
    std::uint64_t iter = 0;
    double xi = 0.0;
    double sigma2 = 0.0;
    double theta_norm = 0.0;
    std::uint64_t alpha = 0;
    std::uint64_t payoff_evals = 0;
};

// CSV layout: header "iter,xi,sigma2,theta_norm,alpha,payoff_evals", doubles
// written with shortest round-trip formatting so read_trace(write_trace(r)) == r.
void write_trace(std::ostream& os, const std::vector<TraceRecord>& records);
void write_trace_file(const std::string& path, const std::vector<TraceRecord>& records);
std::vector<TraceRecord> read_trace(std::istream& is);
std::vector<TraceRecord> read_trace_file(const std::string& path);

std::string format_double(double v);  // shortest representation that round-trips

}  // namespace adimc
