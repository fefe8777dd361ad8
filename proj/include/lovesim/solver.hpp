#ifndef LOVESIM_SOLVER_HPP
#define LOVESIM_SOLVER_HPP

#include <memory>
#include <optional>

#include "lovesim/functionals.hpp"
#include "lovesim/grid.hpp"
#include "lovesim/history.hpp"
#include "lovesim/kernel.hpp"
#include "lovesim/memory_engine.hpp"

namespace lovesim {

enum class SourceMode { PowerNonlinearity, ManufacturedForcing, None };

/// Manufactured exact solution y*(x,t) = A T(t) sin(pi x / L) with
/// T = e^{-rate t} or cos(rate t); the prescribed past extends T to t < 0.
struct ManufacturedCase {
  enum class TimeProfile { DecayingExp, Cosine };
  TimeProfile profile = TimeProfile::DecayingExp;
  double rate = 1.0;
  double amplitude = 0.1;

  double T(double t) const;
  double T_prime(double t) const;
  double T_second(double t) const;
  Field shape(const Grid& g) const;  // A sin(pi x / L)
  Field exact(const Grid& g, double t) const;
  PrescribedHistory history(const Grid& g) const;
  /// int_0^inf mu(s) T(t-s) ds; exponential kernels only.
  double conv_T(const MemoryKernel& k, double t) const;
};

/// Power source S(y) = |y|^{p-2} y + d/dx(|y_x|^{p-2} y_x), evaluated as
/// sign(y)|y|^{p-1} nodally plus a centered difference of sign(w)|w|^{p-1}
/// with w the centered gradient. The unique nodal source whose pairings
/// against y and y' reproduce the signed lp terms of the energy.
Field source_eval(const Field& y, double p);

/// Forcing that makes the manufactured solution satisfy the equation with
/// the analytic spatial symbol; the measured error is then the genuine
/// O(dx^2) + O(dt) discretization error.
Field mms_forcing(const ManufacturedCase& mc, const MemoryKernel& k, double p,
                  double t, const Grid& g);

struct SimState {
  Field y, v, a;
  double t = 0;
};

struct SolverConfig {
  double dt = 0;
  double p = 2;
  SourceMode source_mode = SourceMode::PowerNonlinearity;
  bool damping_implicit = true;
  double T_final = 1;
  int sample_stride = 1;
  bool allow_cfl_override = false;
  bool keep_history = false;  // retain the full record buffer for diagnostics
  std::optional<ManufacturedCase> mms;
};

/// One semi-implicit Euler step against the record buffer (reference path):
/// a = (I - (1+alpha)D2)^{-1}[D2 y + D2 v - conv + S + f], v += dt a,
/// y += dt v, push the new gradient. Throws DivergedError on NaN/Inf.
SimState step(const SimState& s, const SolverConfig& cfg, HistoryBuffer& buf,
              const MemoryKernel& k);

struct RunResult {
  Trace trace;
  SimState final_state;
  bool diverged = false;
  long diverged_step = -1;
  bool cfl_overridden = false;
  double max_mms_error = 0;  // max-norm error vs the exact manufactured field
  std::shared_ptr<HistoryBuffer> buffer;  // set when keep_history
};

/// Time-step to T_final, sampling the functionals every sample_stride steps.
/// Uses the exponential-mode engine for Exponential/Polynomial kernels and
/// the record buffer for Tabulated ones. Divergence truncates the trace and
/// sets the flag instead of throwing.
RunResult run(const SolverConfig& cfg, const Grid& g, const MemoryKernel& k,
              const PrescribedHistory& h, const Field& y0, const Field& v0);

struct HistoryBoundReport {
  double bound = 0;      // 8/(1-l) E0 + 2 m0^2
  double max_norm = 0;   // worst sampled squared state difference
  bool pass = false;
  bool m0_infinite = false;
};
/// Check the uniform history bound at the given ages over sampled times.
HistoryBoundReport history_bound_check(const HistoryBuffer& buf, double E0,
                                       double m0, double ell,
                                       const std::vector<double>& ages,
                                       int time_samples);

}  // namespace lovesim

#endif
