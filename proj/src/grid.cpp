#include "lovesim/grid.hpp"

#include <cmath>
#include <numbers>

namespace lovesim {

EdgeField forward_gradient(const Field& u) {
  EdgeField g(u.grid);
  const double inv = 1.0 / u.grid.dx();
  const int n = u.size();
  g[0] = u[0] * inv;
  for (int e = 1; e < n; ++e) g[e] = (u[e] - u[e - 1]) * inv;
  g[n] = -u[n - 1] * inv;
  return g;
}

Field divergence(const EdgeField& g) {
  Field d(g.grid);
  const double inv = 1.0 / g.grid.dx();
  for (int i = 0; i < d.size(); ++i) d[i] = (g[i + 1] - g[i]) * inv;
  return d;
}

Field d2_apply(const Field& u) { return divergence(forward_gradient(u)); }

Field d1_apply(const Field& u) {
  Field d(u.grid);
  const int n = u.size();
  const double inv = 1.0 / (2.0 * u.grid.dx());
  for (int i = 0; i < n; ++i) {
    const double left = (i == 0) ? 0.0 : u[i - 1];
    const double right = (i == n - 1) ? 0.0 : u[i + 1];
    d[i] = (right - left) * inv;
  }
  return d;
}

Field solve_shifted(const Field& rhs, double alpha) {
  if (alpha < 0) throw DomainError("solve_shifted requires alpha >= 0");
  const int n = rhs.size();
  const double dx = rhs.grid.dx();
  const double c = (1.0 + alpha) / (dx * dx);
  const double diag = 1.0 + 2.0 * c;
  const double off = -c;
  std::vector<double> cp(n), dp(n);
  cp[0] = off / diag;
  dp[0] = rhs[0] / diag;
  for (int i = 1; i < n; ++i) {
    const double m = diag - off * cp[i - 1];
    cp[i] = off / m;
    dp[i] = (rhs[i] - off * dp[i - 1]) / m;
  }
  Field w(rhs.grid);
  w[n - 1] = dp[n - 1];
  for (int i = n - 2; i >= 0; --i) w[i] = dp[i] - cp[i] * w[i + 1];
  return w;
}

double lp_norm(const Field& u, double p) {
  if (p < 1) throw DomainError("lp_norm requires p >= 1");
  double s = 0.0;
  for (double x : u.v) s += std::pow(std::abs(x), p);
  return s * u.grid.dx();  // trapezoid with zero boundary values
}

double lp_norm(const EdgeField& g, double p) {
  if (p < 1) throw DomainError("lp_norm requires p >= 1");
  double s = 0.0;
  for (double x : g.v) s += std::pow(std::abs(x), p);
  return s * g.grid.dx();
}

double inner(const Field& a, const Field& b) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid.dx();
}

double inner(const EdgeField& a, const EdgeField& b) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid.dx();
}

double poincare_constant(const Grid& g) { return g.L / std::numbers::pi; }

Field integrate_gradient(const EdgeField& g) {
  Field u(g.grid);
  const double dx = g.grid.dx();
  double acc = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    acc += g[i] * dx;
    u[i] = acc;
  }
  return u;
}

bool all_finite(const Field& u) {
  for (double x : u.v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace lovesim
