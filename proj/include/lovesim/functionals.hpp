#ifndef LOVESIM_FUNCTIONALS_HPP
#define LOVESIM_FUNCTIONALS_HPP

#include <optional>
#include <vector>

#include <json.hpp>

#include "lovesim/grid.hpp"
#include "lovesim/history.hpp"
#include "lovesim/kernel.hpp"

namespace lovesim {

/// One traced time slice. bound_rhs is filled by the decay fit.
struct EnergySample {
  double t = 0;
  double E = 0, J = 0, I = 0;
  double phi = 0, xi = 0, L = 0;
  double mu_tail = 0, mu_prime_tail = 0;
  double kin = 0, kin_grad = 0;
  double lp_grad = 0, lp_val = 0;
  double dE_dt = 0;
  double bound_rhs = 0;
};

using Trace = std::vector<EnergySample>;

/// Scalar memory inputs for one slice, however they were produced
/// (fast engine or history buffer).
struct MemoryTerms {
  double mu_tail = 0;
  double mu_prime_tail = 0;
};

/// E = kin + kin_grad + J with
/// J = (1-mass)/2 ||y_x||^2 + mu_tail/2 + lp_grad/p - lp_val/p,
/// I = (1-mass) ||y_x||^2 + mu_tail + lp_grad - lp_val.
/// Fills everything except xi, L, dE_dt, bound_rhs.
EnergySample energy_components(const Field& y, const Field& v,
                               const MemoryTerms& mem, double mass, double p,
                               double t);

/// Full energy from a history buffer (reference path).
EnergySample energy(const Field& y, const Field& v, const HistoryBuffer& buf,
                    double p, double t);
double modified_energy_I(const Field& y, const HistoryBuffer& buf, double p,
                         double t);

/// phi = int y y' + 1/2 ||y_x||^2 + int y_x y'_x.
double phi_functional(const Field& y, const Field& v);

/// Running accumulators for xi(t) = -int y'(mu<>y)
///   - int_0^t int y'_x (mu<>y_x) - int_0^t int y''_x (mu<>y_x),
/// where (mu<>w)(t) = mass w(t) - int mu(s) w(t-s) ds. The two time
/// integrals advance by trapezoid at step resolution.
class XiAccumulator {
 public:
  /// diamond_g = mu<>y_x on edges at the current time.
  void start(const Field& v, const Field& a, const EdgeField& diamond_g);
  void step(double dt, const Field& v, const Field& a,
            const EdgeField& diamond_g);
  /// Instantaneous term plus the accumulated integrals.
  double value(const Field& v, const EdgeField& diamond_g, double mass) const;

 private:
  double acc2_ = 0, acc3_ = 0;
  double h2_prev_ = 0, h3_prev_ = 0;
  bool started_ = false;
};

double lyapunov_L(double E, double phi, double xi, double eps1, double eps2);

/// eps1 making |phi + eps2 xi| <= eps1 E / 2 over the trace, so that
/// L/E lies in [eps1/2, 3 eps1/2] and c2/c1 <= 3.
double fit_eps1(const Trace& trace, double eps2);

struct EquivalenceFit {
  double c1 = 0, c2 = 0;
  bool valid = false;
};
/// c1 = min L/E, c2 = max L/E over samples with E > 0; throws DomainError
/// if some sample has E <= 0 but L != 0.
EquivalenceFit equivalence_fit(const Trace& trace, double eps1, double eps2);

struct DissipationReport {
  double max_energy_increase = 0;  // max over steps of E_{n+1} - E_n
  double max_violation = 0;        // dE/dt minus the traced bound
  bool skipped = false;            // forced runs carry no dissipation law
};
DissipationReport dissipation_check(const Trace& trace, bool forced = false);

struct NehariResult {
  bool bounded = false;  // P < 0: the ray functional has a finite max
  double nu_star = 0;
  double j_at_nu_star = 0;
  double Q = 0, P = 0;
};
/// Maximize j(nu) = J(nu y) = nu^2 Q + nu^p P over nu >= 0.
NehariResult nehari_scale(const Field& y, const MemoryTerms& mem, double mass,
                          double p);

enum class ExponentVariant { HalfPminus2, Pminus2 };
struct GlobalConditionResult {
  bool applicable = false;  // p > 2 required
  double lhs = 0, rhs = 0;
  bool pass = false;
};
/// C^p l^{1-p} (2p/(p-2) E0)^e < l with e = (p-2)/2 or (p-2).
GlobalConditionResult global_condition(double E0, double ell, double C,
                                       double p, ExponentVariant variant);

struct LemmaConstants {
  double a = 0, b = 0;
  bool a_positive = false, b_positive = false;
};
/// Diagnostic constants of the phi/xi estimates; c_nu and c_embed default 1.
LemmaConstants lemma_constants(double nu, double ell, double p, double E0,
                               double m0, double c_embed = 1.0,
                               double c_nu = 1.0);

nlohmann::json dissipation_to_json(const DissipationReport& r);

}  // namespace lovesim

#endif
