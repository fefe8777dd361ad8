#include "lovesim/decay.hpp"

#include <algorithm>
#include <cmath>

#include "lovesim/quadrature.hpp"

namespace lovesim {

double h1(double tau, const ConvexModulus& h, double kappa) {
  if (!(tau > 0 && tau <= 1)) throw DomainError("h1 requires tau in (0, 1]");
  if (kappa <= 0) throw DomainError("h1 requires kappa > 0");
  if (h.family() == ModulusFamily::Linear)
    return std::log(1.0 / tau) / h.param_c();
  const double r = h.param_r(), c = h.param_c();
  const double scale = c * r * std::pow(kappa, r - 1) * (r - 1);
  return (std::pow(tau, 1.0 - r) - 1.0) / scale;
}

double h1_inverse(double z, const ConvexModulus& h, double kappa) {
  if (z < 0) throw DomainError("h1_inverse requires z >= 0");
  if (kappa <= 0) throw DomainError("h1_inverse requires kappa > 0");
  if (h.family() == ModulusFamily::Linear)
    return std::exp(-h.param_c() * z);
  const double r = h.param_r(), c = h.param_c();
  const double scale = c * r * std::pow(kappa, r - 1) * (r - 1);
  return std::pow(1.0 + z * scale, -1.0 / (r - 1.0));
}

double h1_quadrature(double tau, const ConvexModulus& h, double kappa) {
  if (!(tau > 0 && tau <= 1)) throw DomainError("h1 requires tau in (0, 1]");
  // substitute s = e^u to tame the 1/s factor near tau
  return integrate([&](double u) { return 1.0 / h.H_prime(kappa * std::exp(u)); },
                   std::log(tau), 0.0);
}

DecayFit fit_bound(const Trace& trace, const ConvexModulus& h) {
  DecayFit fit;
  fit.exponential_family = h.family() == ModulusFamily::Linear;
  if (trace.empty()) {
    fit.degenerate = true;
    return fit;
  }
  double Emax = 0;
  for (const auto& s : trace) Emax = std::max(Emax, s.E);
  if (Emax <= 0) {
    fit.degenerate = true;
    return fit;
  }

  const double T = trace.back().t;
  double best_terminal = std::numeric_limits<double>::infinity();
  constexpr int kNk = 61, kNk0 = 21;
  for (int i = 0; i < kNk; ++i) {
    const double kappa = std::pow(10.0, -3.0 + 5.0 * i / (kNk - 1));
    for (int j = 0; j < kNk0; ++j) {
      const double kappa0 = 10.0 * j / (kNk0 - 1);
      double kappa1 = 0;
      for (const auto& s : trace) {
        if (s.E <= 0) continue;
        kappa1 = std::max(kappa1,
                          s.E / h1_inverse(kappa * s.t + kappa0, h, kappa));
      }
      const double terminal = kappa1 * h1_inverse(kappa * T + kappa0, h, kappa);
      if (terminal < best_terminal) {
        best_terminal = terminal;
        fit.kappa = kappa;
        fit.kappa0 = kappa0;
        fit.kappa1 = kappa1;
      }
    }
  }
  fit.terminal_bound = best_terminal;
  fit.terminal_energy = trace.back().E;

  fit.bound_curve.reserve(trace.size());
  fit.max_violation = -std::numeric_limits<double>::infinity();
  for (const auto& s : trace) {
    const double b =
        fit.kappa1 * h1_inverse(fit.kappa * s.t + fit.kappa0, h, fit.kappa);
    fit.bound_curve.push_back(b);
    fit.max_violation = std::max(fit.max_violation, s.E - b);
  }
  const double initial_bound = fit.bound_curve.front();
  fit.non_decaying = !(fit.terminal_bound <= 0.5 * initial_bound);

  // trailing-half regression on positive-energy samples
  std::vector<double> xs, ys;
  for (std::size_t n = trace.size() / 2; n < trace.size(); ++n) {
    if (trace[n].E <= 0) continue;
    xs.push_back(fit.exponential_family ? trace[n].t
                                        : std::log1p(trace[n].t));
    ys.push_back(std::log(trace[n].E));
  }
  if (xs.size() >= 2) {
    const std::size_t m = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double denom = m * sxx - sx * sx;
    if (denom > 0) {
      const double slope = (m * sxy - sx * sy) / denom;
      const double icept = (sy - slope * sx) / m;
      double ss_res = 0, ss_tot = 0;
      const double ymean = sy / m;
      for (std::size_t i = 0; i < m; ++i) {
        const double p = slope * xs[i] + icept;
        ss_res += (ys[i] - p) * (ys[i] - p);
        ss_tot += (ys[i] - ymean) * (ys[i] - ymean);
      }
      fit.empirical_rate = -slope;
      fit.empirical_r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    }
  }
  return fit;
}

void apply_bound_column(Trace& trace, const DecayFit& fit,
                        const ConvexModulus& h) {
  if (fit.degenerate || fit.kappa <= 0) return;
  for (auto& s : trace)
    s.bound_rhs =
        fit.kappa1 * h1_inverse(fit.kappa * s.t + fit.kappa0, h, fit.kappa);
}

nlohmann::json DecayFit::to_json() const {
  return {{"kappa", kappa},
          {"kappa0", kappa0},
          {"kappa1", kappa1},
          {"max_violation", max_violation},
          {"terminal_bound", terminal_bound},
          {"terminal_energy", terminal_energy},
          {"empirical_kind", exponential_family ? "exponential" : "algebraic"},
          {"empirical_rate", empirical_rate},
          {"empirical_r2", empirical_r2},
          {"degenerate", degenerate},
          {"non_decaying", non_decaying}};
}

}  // namespace lovesim
