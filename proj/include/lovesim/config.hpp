#ifndef LOVESIM_CONFIG_HPP
#define LOVESIM_CONFIG_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "lovesim/grid.hpp"
#include "lovesim/history.hpp"
#include "lovesim/kernel.hpp"
#include "lovesim/solver.hpp"

namespace lovesim {

inline constexpr int kSchemaVersion = 1;

struct InitialSpec {
  double amplitude = 0.1;
  int mode = 1;  // sine mode number of y(., 0)
  double velocity_amplitude = 0;
  int velocity_mode = 1;
};

struct HistorySpec {
  enum class Family { Zero, Stationary, Decaying, Harmonic };
  Family family = Family::Stationary;
  double rate = 1.0;  // decay rate or angular frequency
};

struct OutputSpec {
  std::string trace_path = "trace.csv";
  std::string report_path = "report.json";
};

struct FitSpec {
  bool enabled = true;
  double eps2 = 1.0;
  std::optional<double> eps1;  // default: fitted from the trace
};

struct CertifySpec {
  bool hyp1 = true;
  bool condition_h = true;
  int samples = 64;
  double s_max = 0;  // 0: per-family default
  double tol = 1e-10;
};

/// Parsed run configuration. The initial displacement doubles as the
/// history profile Y, so y(., 0) = y0(., 0) holds by construction; a Zero
/// history therefore requires zero initial amplitude.
struct RunConfig {
  Grid grid{1.0, 200};
  MemoryKernel kernel = MemoryKernel::exponential(0.5, 1.0);
  std::optional<ConvexModulus> modulus;
  HistorySpec history;
  InitialSpec initial;
  SolverConfig solver;
  OutputSpec outputs;
  FitSpec fit;
  CertifySpec certify;
  nlohmann::json sweep;  // raw lists, consumed by the sweep command

  static RunConfig from_json(const nlohmann::json& j);

  Field initial_y() const;
  Field initial_v() const;
  PrescribedHistory make_history(const Field& y0) const;
};

/// Apply "a.b.c=value" style overrides; values parse as JSON when possible,
/// falling back to plain strings.
void apply_override(nlohmann::json& config, const std::string& spec);

}  // namespace lovesim

#endif
