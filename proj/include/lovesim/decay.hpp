#ifndef LOVESIM_DECAY_HPP
#define LOVESIM_DECAY_HPP

#include <json.hpp>

#include "lovesim/functionals.hpp"
#include "lovesim/kernel.hpp"

namespace lovesim {

/// Rate function H1(tau) = int_tau^1 ds / (s H'(kappa s)), tau in (0, 1].
/// Closed forms: Linear -> ln(1/tau)/c; Power -> (tau^{1-r}-1) scaled.
double h1(double tau, const ConvexModulus& h, double kappa);

/// Inverse of h1 on [0, inf) -> (0, 1], decreasing.
double h1_inverse(double z, const ConvexModulus& h, double kappa);

/// Quadrature evaluation of the same integral, for cross-checks.
double h1_quadrature(double tau, const ConvexModulus& h, double kappa);

struct DecayFit {
  double kappa = 0, kappa0 = 0, kappa1 = 0;
  double max_violation = 0;  // <= 0 when the bound holds
  std::vector<double> bound_curve;
  double terminal_bound = 0;
  double terminal_energy = 0;
  bool exponential_family = false;  // Linear modulus -> exponential regression
  double empirical_rate = 0;        // decay rate or algebraic exponent
  double empirical_r2 = 0;
  bool degenerate = false;     // E identically <= 0
  bool non_decaying = false;   // bound fails to halve over the trace
  nlohmann::json to_json() const;
};

/// Fit E(t_n) <= kappa1 H1^{-1}(kappa t_n + kappa0) by grid search over
/// (kappa, kappa0) with the minimal admissible kappa1, selecting the
/// tightest terminal bound. Also reports a trailing-half least-squares
/// regression: ln E vs t for Linear moduli, ln E vs ln(1+t) for Power.
DecayFit fit_bound(const Trace& trace, const ConvexModulus& h);

/// Write kappa1 H1^{-1}(kappa t + kappa0) into each sample's bound_rhs.
void apply_bound_column(Trace& trace, const DecayFit& fit,
                        const ConvexModulus& h);

}  // namespace lovesim

#endif
