#include "lovesim/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lovesim {

namespace {

void put(std::ostream& os, double v, char sep) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  os.write(buf, n);
  if (sep) os.put(sep);
}

double get(const std::string& tok) {
  double v = 0;
  const auto* end = tok.data() + tok.size();
  const auto [p, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || p != end)
    throw ConfigError("malformed trace value: " + tok);
  return v;
}

}  // namespace

void write_trace(std::ostream& os, const Trace& trace) {
  os << kTraceHeader << '\n';
  for (const auto& s : trace) {
    put(os, s.t, ',');
    put(os, s.E, ',');
    put(os, s.J, ',');
    put(os, s.I, ',');
    put(os, s.phi, ',');
    put(os, s.xi, ',');
    put(os, s.L, ',');
    put(os, s.mu_tail, ',');
    put(os, s.mu_prime_tail, ',');
    put(os, s.kin, ',');
    put(os, s.kin_grad, ',');
    put(os, s.lp_grad, ',');
    put(os, s.lp_val, ',');
    put(os, s.dE_dt, ',');
    put(os, s.bound_rhs, 0);
    os.put('\n');
  }
}

void write_trace_file(const std::string& path, const Trace& trace) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open trace file for writing: " + path);
  write_trace(os, trace);
}

Trace read_trace(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTraceHeader)
    throw ConfigError("unexpected trace header");
  Trace out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    double f[15];
    for (int i = 0; i < 15; ++i) {
      if (!std::getline(ls, tok, ','))
        throw ConfigError("trace row has too few columns");
      f[i] = get(tok);
    }
    EnergySample s;
    s.t = f[0];
    s.E = f[1];
    s.J = f[2];
    s.I = f[3];
    s.phi = f[4];
    s.xi = f[5];
    s.L = f[6];
    s.mu_tail = f[7];
    s.mu_prime_tail = f[8];
    s.kin = f[9];
    s.kin_grad = f[10];
    s.lp_grad = f[11];
    s.lp_val = f[12];
    s.dE_dt = f[13];
    s.bound_rhs = f[14];
    out.push_back(s);
  }
  return out;
}

Trace read_trace_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open trace file: " + path);
  return read_trace(is);
}

}  // namespace lovesim
