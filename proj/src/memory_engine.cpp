#include "lovesim/memory_engine.hpp"

#include <cmath>

namespace lovesim {

namespace {

// Laplace-point fit mu(s) = a(1+s)^(-q) ~ sum_m c_m e^{-lambda_m s} with
// lambda_m = e^{u_m} on a uniform u grid. Relative accuracy ~2e-9 over the
// s range that carries kernel mass.
std::vector<std::pair<double, double>> soe_polynomial(double a, double q) {
  constexpr double kUmin = -18.0, kUmax = 4.0, kStep = 0.35;
  std::vector<std::pair<double, double>> out;
  const double scale = a / std::tgamma(q) * kStep;
  for (double u = kUmin; u <= kUmax + 0.5 * kStep; u += kStep) {
    const double lam = std::exp(u);
    out.emplace_back(lam, scale * std::pow(lam, q) * std::exp(-lam));
  }
  return out;
}

}  // namespace

ExpModesMemory::ExpModesMemory(const MemoryKernel& k,
                               const PrescribedHistory& h, const Grid& grid)
    : grid_(grid), grad_Y_(grid), g_prev_(grid) {
  std::vector<std::pair<double, double>> lc;
  switch (k.family()) {
    case KernelFamily::Exponential:
      lc.emplace_back(k.param_b(), k.param_a());
      break;
    case KernelFamily::Polynomial:
      lc = soe_polynomial(k.param_a(), k.param_q());
      break;
    case KernelFamily::Tabulated:
      throw UnsupportedError(
          "tabulated kernels have no exponential-mode representation");
  }
  grad_Y_ = h.gradient_Y();
  const auto fam = h.family();
  const double rho = h.rate();
  for (auto [lam, c] : lc) {
    Mode m;
    m.lambda = lam;
    m.c = c;
    switch (fam) {
      case PrescribedHistory::Family::Zero:
        break;
      case PrescribedHistory::Family::Stationary:
        m.f1 = m.f2 = 1.0 / lam;
        break;
      case PrescribedHistory::Family::Decaying:
        if (lam + rho <= 0)
          throw UnsupportedError(
              "divergent hereditary integral: past grows faster than the "
              "kernel decays");
        m.f1 = 1.0 / (lam + rho);
        if (lam + 2 * rho > 0)
          m.f2 = 1.0 / (lam + 2 * rho);
        else
          f2_valid_ = false;
        break;
      case PrescribedHistory::Family::Harmonic:
        m.f1 = lam / (lam * lam + rho * rho);
        m.f2 = 0.5 * (1.0 / lam + lam / (lam * lam + 4 * rho * rho));
        break;
    }
    mass_ += c / lam;
    modes_.push_back(m);
  }
  P_.assign(modes_.size(), std::vector<double>(grid_.N + 1, 0.0));
  Q_.assign(modes_.size(), std::vector<double>(grid_.N + 1, 0.0));
}

void ExpModesMemory::reset(const EdgeField& g0) {
  t_ = 0;
  g_prev_ = g0;
  for (auto& p : P_) std::fill(p.begin(), p.end(), 0.0);
  for (auto& q : Q_) std::fill(q.begin(), q.end(), 0.0);
}

void ExpModesMemory::advance(double dt, const EdgeField& g_new) {
  if (dt <= 0) throw DomainError("memory advance requires dt > 0");
  const int ne = grid_.N + 1;
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const double decay = std::exp(-modes_[m].lambda * dt);
    const double half = 0.5 * modes_[m].c * dt;
    auto& p = P_[m];
    auto& q = Q_[m];
    for (int e = 0; e < ne; ++e) {
      p[e] = decay * (p[e] + half * g_prev_[e]) + half * g_new[e];
      q[e] = decay * (q[e] + half * g_prev_[e] * g_prev_[e]) +
             half * g_new[e] * g_new[e];
    }
  }
  g_prev_ = g_new;
  t_ += dt;
}

EdgeField ExpModesMemory::weighted_gradient() const {
  EdgeField w(grid_);
  const int ne = grid_.N + 1;
  double pres = 0;
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const auto& p = P_[m];
    for (int e = 0; e < ne; ++e) w[e] += p[e];
    pres += modes_[m].c * std::exp(-modes_[m].lambda * t_) * modes_[m].f1;
  }
  for (int e = 0; e < ne; ++e) w[e] += pres * grad_Y_[e];
  return w;
}

Field ExpModesMemory::convolution() const {
  return divergence(weighted_gradient());
}

double ExpModesMemory::mu_tail(const EdgeField& g_now) const {
  if (!f2_valid_)
    throw UnsupportedError(
        "divergent squared-history integral for this growing past");
  const int ne = grid_.N + 1;
  double acc = 0;
  // mass * g^2 - 2 g W + Qtot, with the prescribed parts folded into W, Qtot
  double pres1 = 0, pres2 = 0;
  std::vector<double> w(ne, 0.0), qt(ne, 0.0);
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const auto& p = P_[m];
    const auto& q = Q_[m];
    for (int e = 0; e < ne; ++e) {
      w[e] += p[e];
      qt[e] += q[e];
    }
    const double em = modes_[m].c * std::exp(-modes_[m].lambda * t_);
    pres1 += em * modes_[m].f1;
    pres2 += em * modes_[m].f2;
  }
  for (int e = 0; e < ne; ++e) {
    const double g = g_now[e], gy = grad_Y_[e];
    acc += mass_ * g * g - 2 * g * (w[e] + pres1 * gy) +
           (qt[e] + pres2 * gy * gy);
  }
  return acc * grid_.dx();
}

double ExpModesMemory::mu_prime_tail(const EdgeField& g_now) const {
  if (!f2_valid_)
    throw UnsupportedError(
        "divergent squared-history integral for this growing past");
  const int ne = grid_.N + 1;
  // mu'(s) = -sum c lambda e^{-lambda s}: scale each mode by -lambda
  double mu0 = 0, pres1 = 0, pres2 = 0;
  std::vector<double> w(ne, 0.0), qt(ne, 0.0);
  for (std::size_t m = 0; m < modes_.size(); ++m) {
    const double lam = modes_[m].lambda;
    const auto& p = P_[m];
    const auto& q = Q_[m];
    for (int e = 0; e < ne; ++e) {
      w[e] += lam * p[e];
      qt[e] += lam * q[e];
    }
    const double em = modes_[m].c * std::exp(-lam * t_);
    mu0 += modes_[m].c;
    pres1 += lam * em * modes_[m].f1;
    pres2 += lam * em * modes_[m].f2;
  }
  double acc = 0;
  for (int e = 0; e < ne; ++e) {
    const double g = g_now[e], gy = grad_Y_[e];
    acc += mu0 * g * g - 2 * g * (w[e] + pres1 * gy) +
           (qt[e] + pres2 * gy * gy);
  }
  return -acc * grid_.dx();
}

EdgeField ExpModesMemory::mu_diamond(const EdgeField& g_now) const {
  EdgeField w = weighted_gradient();
  for (int e = 0; e < w.size(); ++e) w[e] = mass_ * g_now[e] - w[e];
  return w;
}

}  // namespace lovesim
