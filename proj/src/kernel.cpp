#include "lovesim/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lovesim/quadrature.hpp"

namespace lovesim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  const double r = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = lo * std::exp(r * i);
  return g;
}
}  // namespace

MemoryKernel MemoryKernel::exponential(double a, double b) {
  if (a < 0 || b <= 0)
    throw ConfigError("exponential kernel requires a >= 0, b > 0");
  MemoryKernel k;
  k.family_ = KernelFamily::Exponential;
  k.a_ = a;
  k.b_ = b;
  return k;
}

MemoryKernel MemoryKernel::polynomial(double a, double q) {
  if (a <= 0 || q <= 0)
    throw ConfigError("polynomial kernel requires a > 0, q > 0");
  MemoryKernel k;
  k.family_ = KernelFamily::Polynomial;
  k.a_ = a;
  k.q_ = q;
  return k;
}

MemoryKernel MemoryKernel::tabulated(std::vector<double> s,
                                     std::vector<double> mu,
                                     TabulatedTail tail) {
  if (s.size() != mu.size() || s.size() < 2)
    throw ConfigError("tabulated kernel needs >= 2 matching samples");
  if (s.front() != 0.0) throw ConfigError("tabulated samples must start at s=0");
  for (size_t i = 1; i < s.size(); ++i)
    if (s[i] <= s[i - 1]) throw ConfigError("tabulated samples must increase");
  if (tail.param <= 0) throw ConfigError("tabulated tail parameter must be > 0");
  MemoryKernel k;
  k.family_ = KernelFamily::Tabulated;
  k.s_ = std::move(s);
  k.mu_ = std::move(mu);
  k.tail_ = tail;
  return k;
}

double MemoryKernel::mu(double s) const {
  if (s < 0) throw DomainError("mu defined for s >= 0");
  switch (family_) {
    case KernelFamily::Exponential:
      return a_ * std::exp(-b_ * s);
    case KernelFamily::Polynomial:
      return a_ * std::pow(1.0 + s, -q_);
    case KernelFamily::Tabulated: {
      if (s >= s_.back()) {
        const double m = mu_.back();
        if (tail_.type == TabulatedTail::Type::Exponential)
          return m * std::exp(-tail_.param * (s - s_.back()));
        return m * std::pow((1.0 + s) / (1.0 + s_.back()), -tail_.param);
      }
      auto it = std::upper_bound(s_.begin(), s_.end(), s);
      size_t i = it - s_.begin();  // s_[i-1] <= s < s_[i]
      const double w = (s - s_[i - 1]) / (s_[i] - s_[i - 1]);
      return mu_[i - 1] * (1 - w) + mu_[i] * w;
    }
  }
  return 0;
}

double MemoryKernel::mu_prime(double s) const {
  if (s < 0) throw DomainError("mu_prime defined for s >= 0");
  switch (family_) {
    case KernelFamily::Exponential:
      return -b_ * mu(s);
    case KernelFamily::Polynomial:
      return -q_ / (1.0 + s) * mu(s);
    case KernelFamily::Tabulated: {
      if (s >= s_.back()) {
        if (tail_.type == TabulatedTail::Type::Exponential)
          return -tail_.param * mu(s);
        return -tail_.param / (1.0 + s) * mu(s);
      }
      auto it = std::upper_bound(s_.begin(), s_.end(), s);
      size_t i = it - s_.begin();
      return (mu_[i] - mu_[i - 1]) / (s_[i] - s_[i - 1]);
    }
  }
  return 0;
}

double MemoryKernel::mass() const {
  switch (family_) {
    case KernelFamily::Exponential:
      return a_ / b_;
    case KernelFamily::Polynomial:
      if (q_ <= 1)
        throw DomainError("non-integrable kernel: polynomial with q <= 1");
      return a_ / (q_ - 1.0);
    case KernelFamily::Tabulated: {
      if (tail_.type == TabulatedTail::Type::Polynomial && tail_.param <= 1)
        throw DomainError("non-integrable kernel: polynomial tail with q <= 1");
      double m = 0;
      for (size_t i = 1; i < s_.size(); ++i)
        m += 0.5 * (mu_[i] + mu_[i - 1]) * (s_[i] - s_[i - 1]);
      return m + tail_mass(s_.back());
    }
  }
  return 0;
}

double MemoryKernel::tail_mass(double t) const {
  if (t < 0) t = 0;
  switch (family_) {
    case KernelFamily::Exponential:
      return a_ / b_ * std::exp(-b_ * t);
    case KernelFamily::Polynomial:
      if (q_ <= 1)
        throw DomainError("non-integrable kernel: polynomial with q <= 1");
      return a_ / (q_ - 1.0) * std::pow(1.0 + t, 1.0 - q_);
    case KernelFamily::Tabulated: {
      if (t >= s_.back()) {
        const double m = mu(t);
        if (tail_.type == TabulatedTail::Type::Exponential)
          return m / tail_.param;
        if (tail_.param <= 1)
          throw DomainError("non-integrable kernel: polynomial tail with q <= 1");
        return m * (1.0 + t) / (tail_.param - 1.0);
      }
      // trapezoid from t to last sample, then analytic tail
      double m = 0;
      auto it = std::upper_bound(s_.begin(), s_.end(), t);
      size_t i = it - s_.begin();
      double prev_s = t, prev_mu = mu(t);
      for (; i < s_.size(); ++i) {
        m += 0.5 * (prev_mu + mu_[i]) * (s_[i] - prev_s);
        prev_s = s_[i];
        prev_mu = mu_[i];
      }
      return m + tail_mass(s_.back());
    }
  }
  return 0;
}

double MemoryKernel::default_s_max() const {
  switch (family_) {
    case KernelFamily::Exponential:
      return 50.0;
    case KernelFamily::Polynomial:
      return 1e3;
    case KernelFamily::Tabulated:
      return std::max(s_.back(), 50.0);
  }
  return 50.0;
}

ConvexModulus ConvexModulus::linear(double c) {
  if (c <= 0) throw ConfigError("linear modulus requires c > 0");
  ConvexModulus h;
  h.family_ = ModulusFamily::Linear;
  h.c_ = c;
  return h;
}

ConvexModulus ConvexModulus::power(double r, double c) {
  if (c <= 0 || r <= 1) throw ConfigError("power modulus requires r > 1, c > 0");
  ConvexModulus h;
  h.family_ = ModulusFamily::Power;
  h.c_ = c;
  h.r_ = r;
  return h;
}

double ConvexModulus::H(double t) const {
  if (t < 0) throw DomainError("H defined for t >= 0");
  return family_ == ModulusFamily::Linear ? c_ * t : c_ * std::pow(t, r_);
}

double ConvexModulus::H_prime(double t) const {
  if (t < 0) throw DomainError("H' defined for t >= 0");
  return family_ == ModulusFamily::Linear ? c_ : c_ * r_ * std::pow(t, r_ - 1.0);
}

double ConvexModulus::H_inv(double u) const {
  if (u < 0) throw DomainError("H^{-1} defined for u >= 0");
  return family_ == ModulusFamily::Linear ? u / c_ : std::pow(u / c_, 1.0 / r_);
}

double ConvexModulus::H_prime_inv(double s) const {
  if (family_ == ModulusFamily::Linear)
    throw UnsupportedError("(H')^{-1} undefined for linear modulus");
  if (s < 0) throw DomainError("(H')^{-1} defined for s >= 0");
  return std::pow(s / (c_ * r_), 1.0 / (r_ - 1.0));
}

nlohmann::json CertReport::to_json() const {
  nlohmann::json j;
  j["pass"] = pass;
  j["ell"] = ell;
  j["clauses"] = nlohmann::json::array();
  for (const auto& c : clauses)
    j["clauses"].push_back({{"name", c.name},
                            {"pass", c.pass},
                            {"value", c.value},
                            {"detail", c.detail}});
  return j;
}

CertReport certify_hyp1(const MemoryKernel& k, int sample_count) {
  if (sample_count < 16) throw DomainError("certify_hyp1 needs sample_count >= 16");
  CertReport rep;
  std::vector<double> grid = geometric_grid(1e-6, k.default_s_max(), sample_count);
  grid.insert(grid.begin(), 0.0);

  bool nonneg = true, mono = true;
  for (size_t i = 0; i < grid.size(); ++i) {
    const double m = k.mu(grid[i]);
    if (m < 0) nonneg = false;
    if (i > 0 && m > k.mu(grid[i - 1]) + 1e-12) mono = false;
  }
  rep.clauses.push_back({"nonnegativity", nonneg, 0, ""});
  rep.clauses.push_back({"monotonicity", mono, 0, ""});

  double ell;
  bool ell_ok;
  std::string detail;
  try {
    ell = k.ell();
    ell_ok = ell > 0;
  } catch (const DomainError& e) {
    ell = -kInf;
    ell_ok = false;
    detail = e.what();
  }
  rep.ell = ell;
  rep.clauses.push_back({"l>0", ell_ok, ell, detail});

  const double m0 = k.mu0();
  rep.clauses.push_back({"mu(0)>0", m0 > 0, m0, ""});

  rep.pass = true;
  for (const auto& c : rep.clauses) rep.pass = rep.pass && c.pass;
  return rep;
}

nlohmann::json ConditionHReport::to_json() const {
  return {{"integral", std::isfinite(integral) ? integral : -1.0},
          {"integral_finite", integral_finite},
          {"sup", std::isfinite(sup) ? sup : -1.0},
          {"sup_finite", sup_finite},
          {"pass", pass},
          {"relaxed_modulus", relaxed_modulus},
          {"note", note}};
}

ConditionHReport certify_condition_h(const MemoryKernel& k,
                                     const ConvexModulus& h, double s_max,
                                     double tol) {
  if (s_max <= 0) throw DomainError("certify_condition_h needs s_max > 0");
  ConditionHReport rep;
  rep.relaxed_modulus = h.relaxed();

  auto ratio = [&](double s) {
    const double neg_mup = -k.mu_prime(s);
    if (neg_mup < 0)
      throw DomainError("mu' > 0 encountered: kernel not non-increasing");
    const double denom = h.H_inv(neg_mup);
    if (denom == 0) return k.mu(s) == 0 ? 0.0 : kInf;
    return k.mu(s) / denom;
  };

  // sup over {0} U geometric grid
  std::vector<double> grid = geometric_grid(1e-6, s_max, 512);
  grid.insert(grid.begin(), 0.0);
  double sup = 0;
  for (double s : grid) sup = std::max(sup, ratio(s));

  // Tail classification. Asymptotically the kernel behaves exponentially
  // (rate beta) or polynomially (exponent q); the ratio then decays like
  // exp(-beta(1-1/r)s) or (1+s)^(q/r - q + 1/r), and is constant or growing
  // for the linear modulus.
  bool tail_exp;
  double beta = 0, q = 0;
  switch (k.family()) {
    case KernelFamily::Exponential:
      tail_exp = true;
      beta = k.param_b();
      break;
    case KernelFamily::Polynomial:
      tail_exp = false;
      q = k.param_q();
      break;
    case KernelFamily::Tabulated:
      tail_exp = k.tail().type == TabulatedTail::Type::Exponential;
      (tail_exp ? beta : q) = k.tail().param;
      break;
  }

  double tail = 0;
  bool tail_finite;
  bool sup_bounded_at_inf;
  if (h.family() == ModulusFamily::Linear) {
    // ratio -> c/beta (exponential) or grows like c(1+s)/q (polynomial)
    tail_finite = false;
    sup_bounded_at_inf = tail_exp;
    if (!tail_exp) sup = kInf;
  } else {
    const double r = h.param_r();
    if (tail_exp) {
      const double rate = beta * (1.0 - 1.0 / r);
      tail = ratio(s_max) / rate;
      tail_finite = true;
      sup_bounded_at_inf = true;
    } else {
      const double e = q - (q + 1.0) / r;  // ratio ~ (1+s)^{-e}
      tail_finite = e > 1;
      sup_bounded_at_inf = e >= 0;
      if (tail_finite) tail = ratio(s_max) * (1.0 + s_max) / (e - 1.0);
      if (!sup_bounded_at_inf) sup = kInf;
    }
  }

  if (tail_finite) {
    rep.integral = integrate(ratio, 0.0, s_max, tol) + tail;
    rep.integral_finite = std::isfinite(rep.integral);
  } else {
    rep.integral = kInf;
    rep.integral_finite = false;
    rep.note = "integral divergent: ratio does not decay integrably";
  }
  rep.sup = sup;
  rep.sup_finite = sup_bounded_at_inf && std::isfinite(sup);
  rep.pass = rep.integral_finite && rep.sup_finite;
  return rep;
}

double young_conjugate(const ConvexModulus& h, double s) {
  if (h.family() == ModulusFamily::Linear)
    throw UnsupportedError("Young conjugate undefined for linear modulus");
  if (s < 0) throw DomainError("young_conjugate defined for s >= 0");
  if (s == 0) return 0.0;
  const double u = h.H_prime_inv(s);
  return s * u - h.H(u);
}

bool young_inequality_check(const ConvexModulus& h,
                            const std::vector<std::pair<double, double>>& ab) {
  for (const auto& [A, B] : ab) {
    if (B < 0) throw DomainError("young_inequality_check needs B >= 0");
    if (A * B > young_conjugate(h, A) + h.H(B) + 1e-12) return false;
  }
  return true;
}

MemoryKernel kernel_from_json(const nlohmann::json& spec) try {
  const std::string family = spec.at("family").get<std::string>();
  if (family == "exponential")
    return MemoryKernel::exponential(spec.at("a").get<double>(),
                                     spec.at("b").get<double>());
  if (family == "polynomial")
    return MemoryKernel::polynomial(spec.at("a").get<double>(),
                                    spec.at("q").get<double>());
  if (family == "tabulated") {
    TabulatedTail tail;
    const auto& tj = spec.at("tail");
    const std::string tt = tj.at("type").get<std::string>();
    if (tt == "exponential") {
      tail.type = TabulatedTail::Type::Exponential;
      tail.param = tj.at("rate").get<double>();
    } else if (tt == "polynomial") {
      tail.type = TabulatedTail::Type::Polynomial;
      tail.param = tj.at("exponent").get<double>();
    } else {
      throw ConfigError("unknown tabulated tail type: " + tt);
    }
    return MemoryKernel::tabulated(spec.at("s").get<std::vector<double>>(),
                                   spec.at("mu").get<std::vector<double>>(),
                                   tail);
  }
  throw ConfigError("unknown kernel family: " + family);
} catch (const nlohmann::json::exception& e) {
  throw ConfigError(std::string("malformed kernel spec: ") + e.what());
}

ConvexModulus modulus_from_json(const nlohmann::json& spec) try {
  const std::string family = spec.at("family").get<std::string>();
  if (family == "linear") return ConvexModulus::linear(spec.at("c").get<double>());
  if (family == "power")
    return ConvexModulus::power(spec.at("r").get<double>(),
                                spec.value("c", 1.0));
  throw ConfigError("unknown modulus family: " + family);
} catch (const nlohmann::json::exception& e) {
  throw ConfigError(std::string("malformed modulus spec: ") + e.what());
}

}  // namespace lovesim
