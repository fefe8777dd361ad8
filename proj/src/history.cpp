#include "lovesim/history.hpp"

#include <algorithm>
#include <cmath>

#include "lovesim/quadrature.hpp"

namespace lovesim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PrescribedHistory PrescribedHistory::zero(const Grid& g) {
  PrescribedHistory h;
  h.family_ = Family::Zero;
  h.Y_ = Field(g);
  h.grad_Y_ = EdgeField(g);
  return h;
}

PrescribedHistory PrescribedHistory::stationary(const Field& Y) {
  PrescribedHistory h;
  h.family_ = Family::Stationary;
  h.Y_ = Y;
  h.grad_Y_ = forward_gradient(Y);
  h.grad_norm2_ = inner(h.grad_Y_, h.grad_Y_);
  return h;
}

PrescribedHistory PrescribedHistory::decaying(const Field& Y, double rate) {
  if (rate == 0) return stationary(Y);
  PrescribedHistory h;
  h.family_ = Family::Decaying;
  h.rate_ = rate;
  h.Y_ = Y;
  h.grad_Y_ = forward_gradient(Y);
  h.grad_norm2_ = inner(h.grad_Y_, h.grad_Y_);
  return h;
}

PrescribedHistory PrescribedHistory::harmonic(const Field& Y, double omega) {
  if (omega <= 0) throw ConfigError("harmonic history requires omega > 0");
  PrescribedHistory h;
  h.family_ = Family::Harmonic;
  h.rate_ = omega;
  h.Y_ = Y;
  h.grad_Y_ = forward_gradient(Y);
  h.grad_norm2_ = inner(h.grad_Y_, h.grad_Y_);
  return h;
}

double PrescribedHistory::profile(double tau) const {
  switch (family_) {
    case Family::Zero:
      return 0.0;
    case Family::Stationary:
      return 1.0;
    case Family::Decaying:
      return std::exp(-rate_ * tau);
    case Family::Harmonic:
      return std::cos(rate_ * tau);
  }
  return 0.0;
}

Field PrescribedHistory::value_at(double tau) const {
  Field f = Y_;
  const double p = profile(tau);
  for (double& x : f.v) x *= p;
  return f;
}

double PrescribedHistory::m0() const {
  switch (family_) {
    case Family::Zero:
      return 0.0;
    case Family::Decaying:
      if (rate_ < 0) return kInf;
      return grad_norm2_;
    default:
      return grad_norm2_;
  }
}

WeightedTailIntegrals prescribed_integrals(const MemoryKernel& k,
                                           const PrescribedHistory& h, double t,
                                           bool use_mu_prime) {
  WeightedTailIntegrals out;
  out.i0 = use_mu_prime ? -k.mu(t) : k.tail_mass(t);
  const auto fam = h.family();
  if (fam == PrescribedHistory::Family::Zero) return out;
  if (fam == PrescribedHistory::Family::Stationary) {
    out.i1 = out.i2 = out.i0;
    return out;
  }

  if (k.family() == KernelFamily::Exponential) {
    // int_t^inf a e^{-bs} P(s-t)^k ds in closed form; mu' = -b mu.
    const double a = k.param_a(), b = k.param_b();
    const double base = a * std::exp(-b * t);
    double i1, i2;
    if (fam == PrescribedHistory::Family::Decaying) {
      const double rho = h.rate();
      if (b + rho <= 0 || b + 2 * rho <= 0)
        throw UnsupportedError(
            "divergent hereditary integral: growing history faster than the "
            "kernel decays");
      i1 = base / (b + rho);
      i2 = base / (b + 2 * rho);
    } else {  // Harmonic
      const double w = h.rate();
      i1 = base * b / (b * b + w * w);
      i2 = base * 0.5 * (1.0 / b + b / (b * b + 4 * w * w));
    }
    const double f = use_mu_prime ? -b : 1.0;
    out.i1 = f * i1;
    out.i2 = f * i2;
    return out;
  }

  // Generic kernels: growing histories have no convergent integral.
  if (fam == PrescribedHistory::Family::Decaying && h.rate() < 0)
    throw UnsupportedError(
        "divergent hereditary integral: growing history with a "
        "sub-exponential kernel");

  auto weight = [&](double s) { return use_mu_prime ? k.mu_prime(s) : k.mu(s); };
  double horizon;
  if (fam == PrescribedHistory::Family::Decaying) {
    horizon = 35.0 / h.rate();  // profile below 6e-16 beyond this
  } else {
    // Harmonic: truncate where the kernel mass itself is negligible.
    horizon = k.default_s_max();
    while (k.tail_mass(t + horizon) > 1e-9 && horizon < 1e6) horizon *= 2;
  }
  out.i1 = integrate([&](double s) { return weight(s) * h.profile(s - t); }, t,
                     t + horizon);
  out.i2 = integrate(
      [&](double s) {
        const double p = h.profile(s - t);
        return weight(s) * p * p;
      },
      t, t + horizon);
  return out;
}

HistoryBuffer::HistoryBuffer(MemoryKernel kernel, PrescribedHistory prescribed,
                             double eps_coarsen)
    : kernel_(std::move(kernel)),
      prescribed_(std::move(prescribed)),
      eps_coarsen_(eps_coarsen) {}

const HistoryRecord& HistoryBuffer::newest() const {
  if (records_.empty()) throw DomainError("history buffer is empty");
  return records_.back();
}

void HistoryBuffer::push(double t, EdgeField g) {
  if (!records_.empty()) {
    const double t_prev = records_.back().t;
    if (t <= t_prev)
      throw DomainError("history push requires strictly increasing timestamps");
    const double half = 0.5 * (t - t_prev);
    records_.back().weight += half;
    records_.push_back({t, half, std::move(g)});
  } else {
    records_.push_back({t, 0.0, std::move(g)});
  }
  if (auto_coarsen_ && ++pushes_since_coarsen_ >= 64) {
    pushes_since_coarsen_ = 0;
    coarsen();
  }
}

void HistoryBuffer::coarsen() {
  if (records_.size() < 4) return;
  const double t_now = records_.back().t;
  const double mass = kernel_.mass();
  const double threshold = eps_coarsen_ * mass;
  std::deque<HistoryRecord> out;
  std::size_t i = 0;
  // keep the two newest records intact
  while (i + 3 < records_.size()) {
    HistoryRecord& a = records_[i];
    HistoryRecord& b = records_[i + 1];
    const double ma = a.weight * kernel_.mu(t_now - a.t);
    const double mb = b.weight * kernel_.mu(t_now - b.t);
    if (ma + mb < threshold) {
      HistoryRecord m;
      m.weight = a.weight + b.weight;
      const double wsum = ma + mb;
      if (wsum > 0) {
        m.t = (ma * a.t + mb * b.t) / wsum;
        m.g = a.g;
        for (int e = 0; e < m.g.size(); ++e)
          m.g[e] = (ma * a.g[e] + mb * b.g[e]) / wsum;
      } else {
        m.t = 0.5 * (a.t + b.t);
        m.g = a.g;
        for (int e = 0; e < m.g.size(); ++e) m.g[e] = 0.5 * (a.g[e] + b.g[e]);
      }
      out.push_back(std::move(m));
      i += 2;
    } else {
      out.push_back(std::move(a));
      ++i;
    }
  }
  for (; i < records_.size(); ++i) out.push_back(std::move(records_[i]));
  records_ = std::move(out);
}

EdgeField HistoryBuffer::gradient_at_age(double age) const {
  if (records_.empty()) {
    if (age >= 0) {
      EdgeField g = prescribed_.gradient_Y();
      const double p = prescribed_.profile(age);
      for (double& x : g.v) x *= p;
      return g;
    }
    throw DomainError("history buffer is empty");
  }
  const double tq = records_.back().t - age;
  if (tq < records_.front().t) {
    if (tq < 0) {
      EdgeField g = prescribed_.gradient_Y();
      const double p = prescribed_.profile(-tq);
      for (double& x : g.v) x *= p;
      return g;
    }
    return records_.front().g;  // within coarsening resolution
  }
  auto it = std::lower_bound(records_.begin(), records_.end(), tq,
                             [](const HistoryRecord& r, double v) { return r.t < v; });
  if (it == records_.begin()) return it->g;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (tq - lo.t) / (hi.t - lo.t);
  EdgeField g = lo.g;
  for (int e = 0; e < g.size(); ++e) g[e] = lo.g[e] * (1 - w) + hi.g[e] * w;
  return g;
}

Field HistoryBuffer::state_at_age(double age) const {
  const double t_now = records_.empty() ? 0.0 : records_.back().t;
  const double tq = t_now - age;
  if (tq < 0) return prescribed_.value_at(-tq);
  return integrate_gradient(gradient_at_age(age));
}

namespace {

void check_coverage(const HistoryBuffer& buf, double t) {
  if (t < 0) throw DomainError("memory evaluation requires t >= 0");
  if (buf.empty()) {
    if (t > 0)
      throw DomainError("missing history: buffer does not cover [0, t]");
    return;
  }
  const double newest = buf.newest().t;
  if (std::abs(t - newest) > 1e-9 * std::max(1.0, std::abs(t)))
    throw DomainError("missing history: buffer newest record is not at t");
}

}  // namespace

EdgeField memory_weighted_gradient(const HistoryBuffer& buf, double t) {
  check_coverage(buf, t);
  const auto& pres = buf.prescribed();
  EdgeField acc(pres.gradient_Y().grid);
  const auto& k = buf.kernel();
  for (const auto& r : buf.records()) {
    const double w = r.weight * k.mu(t - r.t);
    if (w == 0) continue;
    for (int e = 0; e < acc.size(); ++e) acc[e] += w * r.g[e];
  }
  const auto ti = prescribed_integrals(k, pres, t, false);
  const auto& gy = pres.gradient_Y();
  for (int e = 0; e < acc.size(); ++e) acc[e] += ti.i1 * gy[e];
  return acc;
}

Field memory_convolution(const HistoryBuffer& buf, double t) {
  return divergence(memory_weighted_gradient(buf, t));
}

namespace {

double tail_norm_impl(const HistoryBuffer& buf, double t, bool use_mu_prime) {
  check_coverage(buf, t);
  const auto& k = buf.kernel();
  const auto& pres = buf.prescribed();
  const EdgeField g_now =
      buf.empty() ? [&] {
        EdgeField g = pres.gradient_Y();
        const double p = pres.profile(0.0);
        for (double& x : g.v) x *= p;
        return g;
      }()
                  : buf.newest().g;
  double acc = 0;
  for (const auto& r : buf.records()) {
    const double w =
        r.weight * (use_mu_prime ? k.mu_prime(t - r.t) : k.mu(t - r.t));
    if (w == 0) continue;
    double s = 0;
    for (int e = 0; e < g_now.size(); ++e) {
      const double d = g_now[e] - r.g[e];
      s += d * d;
    }
    acc += w * s;
  }
  const auto ti = prescribed_integrals(k, pres, t, use_mu_prime);
  const auto& gy = pres.gradient_Y();
  double s0 = 0, s1 = 0, s2 = 0;
  for (int e = 0; e < g_now.size(); ++e) {
    s0 += g_now[e] * g_now[e];
    s1 += g_now[e] * gy[e];
    s2 += gy[e] * gy[e];
  }
  acc += ti.i0 * s0 - 2.0 * ti.i1 * s1 + ti.i2 * s2;
  return acc * g_now.grid.dx();
}

}  // namespace

double mu_tail_norm(const HistoryBuffer& buf, double t) {
  return tail_norm_impl(buf, t, false);
}

double mu_prime_tail_norm(const HistoryBuffer& buf, double t) {
  return tail_norm_impl(buf, t, true);
}

double state_difference_norm(const HistoryBuffer& buf, const Field& y_now,
                             double age) {
  const Field past = buf.state_at_age(age);
  double s = 0;
  for (int i = 0; i < y_now.size(); ++i) {
    const double d = y_now[i] - past[i];
    s += d * d;
  }
  return s * y_now.grid.dx();
}

}  // namespace lovesim
