#include "lovesim/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace lovesim {

EnergySample energy_components(const Field& y, const Field& v,
                               const MemoryTerms& mem, double mass, double p,
                               double t) {
  EnergySample s;
  s.t = t;
  const EdgeField gy = forward_gradient(y);
  const EdgeField gv = forward_gradient(v);
  s.kin = 0.5 * inner(v, v);
  s.kin_grad = 0.5 * inner(gv, gv);
  s.mu_tail = mem.mu_tail;
  s.mu_prime_tail = mem.mu_prime_tail;
  s.lp_grad = lp_norm(gy, p);
  s.lp_val = lp_norm(y, p);
  const double ng2 = inner(gy, gy);
  const double ell = 1.0 - mass;
  s.J = 0.5 * ell * ng2 + 0.5 * s.mu_tail + s.lp_grad / p - s.lp_val / p;
  s.E = s.kin + s.kin_grad + s.J;
  s.I = ell * ng2 + s.mu_tail + s.lp_grad - s.lp_val;
  s.phi = phi_functional(y, v);
  return s;
}

EnergySample energy(const Field& y, const Field& v, const HistoryBuffer& buf,
                    double p, double t) {
  MemoryTerms mem;
  mem.mu_tail = mu_tail_norm(buf, t);
  mem.mu_prime_tail = mu_prime_tail_norm(buf, t);
  return energy_components(y, v, mem, buf.kernel().mass(), p, t);
}

double modified_energy_I(const Field& y, const HistoryBuffer& buf, double p,
                         double t) {
  Field zero(y.grid);
  return energy(y, zero, buf, p, t).I;
}

double phi_functional(const Field& y, const Field& v) {
  const EdgeField gy = forward_gradient(y);
  const EdgeField gv = forward_gradient(v);
  return inner(y, v) + 0.5 * inner(gy, gy) + inner(gy, gv);
}

void XiAccumulator::start(const Field& v, const Field& a,
                          const EdgeField& diamond_g) {
  const EdgeField gv = forward_gradient(v);
  const EdgeField ga = forward_gradient(a);
  h2_prev_ = inner(gv, diamond_g);
  h3_prev_ = inner(ga, diamond_g);
  acc2_ = acc3_ = 0;
  started_ = true;
}

void XiAccumulator::step(double dt, const Field& v, const Field& a,
                         const EdgeField& diamond_g) {
  if (!started_) throw DomainError("xi accumulator not started");
  const EdgeField gv = forward_gradient(v);
  const EdgeField ga = forward_gradient(a);
  const double h2 = inner(gv, diamond_g);
  const double h3 = inner(ga, diamond_g);
  acc2_ += 0.5 * dt * (h2_prev_ + h2);
  acc3_ += 0.5 * dt * (h3_prev_ + h3);
  h2_prev_ = h2;
  h3_prev_ = h3;
}

double XiAccumulator::value(const Field& v, const EdgeField& diamond_g,
                            double mass) const {
  (void)mass;
  // mu<>y nodal = integral of the edge diamond (zero left boundary)
  const Field diamond_y = integrate_gradient(diamond_g);
  return -inner(v, diamond_y) - acc2_ - acc3_;
}

double lyapunov_L(double E, double phi, double xi, double eps1, double eps2) {
  if (eps1 <= 0 || eps2 < 0) throw DomainError("lyapunov weights must be positive");
  return eps1 * E + phi + eps2 * xi;
}

double fit_eps1(const Trace& trace, double eps2) {
  double ratio = 0;
  for (const auto& s : trace) {
    if (s.E <= 0) continue;
    ratio = std::max(ratio, std::abs(s.phi + eps2 * s.xi) / s.E);
  }
  return 1.0 + 2.0 * ratio;
}

EquivalenceFit equivalence_fit(const Trace& trace, double eps1, double eps2) {
  EquivalenceFit out;
  double c1 = std::numeric_limits<double>::infinity(), c2 = 0;
  for (const auto& s : trace) {
    const double L = lyapunov_L(s.E, s.phi, s.xi, eps1, eps2);
    if (s.E <= 0) {
      if (std::abs(L) > 1e-14)
        throw DomainError("equivalence undefined: E <= 0 with L != 0");
      continue;
    }
    const double r = L / s.E;
    c1 = std::min(c1, r);
    c2 = std::max(c2, r);
  }
  if (c2 > 0 && std::isfinite(c1)) {
    out.c1 = c1;
    out.c2 = c2;
    out.valid = c1 > 0;
  }
  return out;
}

DissipationReport dissipation_check(const Trace& trace, bool forced) {
  DissipationReport r;
  if (forced) {
    r.skipped = true;
    return r;
  }
  for (std::size_t n = 1; n < trace.size(); ++n) {
    const auto& a = trace[n - 1];
    const auto& b = trace[n];
    const double dt = b.t - a.t;
    if (dt <= 0) continue;
    r.max_energy_increase = std::max(r.max_energy_increase, b.E - a.E);
    const double slope = (b.E - a.E) / dt;
    // bound -2 kin_grad + mu_prime_tail/2, interval-averaged
    const double bound = 0.5 * ((-2 * a.kin_grad + 0.5 * a.mu_prime_tail) +
                                (-2 * b.kin_grad + 0.5 * b.mu_prime_tail));
    r.max_violation = std::max(r.max_violation, slope - bound);
  }
  return r;
}

NehariResult nehari_scale(const Field& y, const MemoryTerms& mem, double mass,
                          double p) {
  bool zero = true;
  for (double x : y.v)
    if (x != 0) zero = false;
  if (zero) throw DomainError("ray scaling undefined for the zero state");
  NehariResult out;
  const EdgeField g = forward_gradient(y);
  out.Q = 0.5 * ((1.0 - mass) * inner(g, g) + mem.mu_tail);
  out.P = (lp_norm(g, p) - lp_norm(y, p)) / p;
  if (out.P >= 0) return out;  // j unbounded along the ray
  out.bounded = true;
  out.nu_star = std::pow(-2.0 * out.Q / (p * out.P), 1.0 / (p - 2.0));
  out.j_at_nu_star = out.Q * out.nu_star * out.nu_star +
                     out.P * std::pow(out.nu_star, p);
  return out;
}

GlobalConditionResult global_condition(double E0, double ell, double C,
                                       double p, ExponentVariant variant) {
  GlobalConditionResult out;
  if (p <= 2) return out;
  out.applicable = true;
  const double e =
      variant == ExponentVariant::HalfPminus2 ? (p - 2) / 2 : (p - 2);
  out.lhs = std::pow(C, p) * std::pow(ell, 1.0 - p) *
            std::pow(2 * p / (p - 2) * E0, e);
  out.rhs = ell;
  out.pass = out.lhs < out.rhs;
  return out;
}

LemmaConstants lemma_constants(double nu, double ell, double p, double E0,
                               double m0, double c_embed, double c_nu) {
  if (!(nu > 0 && nu < 1 - ell))
    throw DomainError("lemma constants need 0 < nu < 1 - l");
  if (!(ell > 0 && ell < 1 && p > 2))
    throw DomainError("lemma constants need l in (0,1) and p > 2");
  LemmaConstants out;
  const double oml = 1 - ell;
  out.a = c_nu * (1 + 2 * oml * oml -
                  std::pow(2 * p / ((p - 2) * ell) * E0, (p - 2) / 2));
  out.b = oml / (4 * nu) + (2 * nu + 1 / (4 * nu)) * oml +
          2 * nu * std::pow(oml, p - 1) * c_embed *
              std::pow(8 / (1 - ell) * E0 + 2 * m0 * m0, (p - 2) / 2);
  out.a_positive = out.a > 0;
  out.b_positive = out.b > 0;
  return out;
}

nlohmann::json dissipation_to_json(const DissipationReport& r) {
  return {{"skipped", r.skipped},
          {"max_energy_increase", r.max_energy_increase},
          {"max_violation", r.max_violation}};
}

}  // namespace lovesim
