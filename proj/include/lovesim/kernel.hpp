#ifndef LOVESIM_KERNEL_HPP
#define LOVESIM_KERNEL_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lovesim/errors.hpp"

namespace lovesim {

enum class KernelFamily { Exponential, Polynomial, Tabulated };

/// Declared analytic tail of a tabulated kernel beyond its last sample.
struct TabulatedTail {
  enum class Type { Exponential, Polynomial };
  Type type = Type::Exponential;
  double param = 1.0;  // decay rate (exponential) or exponent q (polynomial)
};

/// Relaxation kernel mu(s), s >= 0. Immutable after construction.
///
/// Families:
///   Exponential: mu(s) = a exp(-b s)
///   Polynomial:  mu(s) = a (1+s)^(-q)
///   Tabulated:   piecewise-linear samples plus a declared analytic tail
class MemoryKernel {
 public:
  static MemoryKernel exponential(double a, double b);
  static MemoryKernel polynomial(double a, double q);
  static MemoryKernel tabulated(std::vector<double> s, std::vector<double> mu,
                                TabulatedTail tail);

  double mu(double s) const;
  double mu_prime(double s) const;
  double mu0() const { return mu(0.0); }

  /// Total mass int_0^inf mu(s) ds; throws DomainError when divergent.
  double mass() const;
  double ell() const { return 1.0 - mass(); }

  /// int_t^inf mu(s) ds.
  double tail_mass(double t) const;

  /// Horizon beyond which the remaining mass is below quadrature tolerance.
  double default_s_max() const;

  KernelFamily family() const { return family_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }
  double param_q() const { return q_; }
  const TabulatedTail& tail() const { return tail_; }
  const std::vector<double>& sample_s() const { return s_; }
  const std::vector<double>& sample_mu() const { return mu_; }

 private:
  MemoryKernel() = default;
  KernelFamily family_ = KernelFamily::Exponential;
  double a_ = 0, b_ = 1, q_ = 0;
  std::vector<double> s_, mu_;
  TabulatedTail tail_;
};

enum class ModulusFamily { Linear, Power };

/// Convex modulus H used in the kernel growth condition and the rate
/// function. Linear H is a documented relaxation (H'(0) = c > 0); its
/// certification reports carry a "relaxed-modulus" flag.
class ConvexModulus {
 public:
  static ConvexModulus linear(double c);
  static ConvexModulus power(double r, double c);

  double H(double t) const;
  double H_prime(double t) const;
  double H_inv(double u) const;        // throws DomainError for u < 0
  double H_prime_inv(double s) const;  // Power only; Linear -> UnsupportedError

  ModulusFamily family() const { return family_; }
  double param_c() const { return c_; }
  double param_r() const { return r_; }
  bool relaxed() const { return family_ == ModulusFamily::Linear; }

 private:
  ConvexModulus() = default;
  ModulusFamily family_ = ModulusFamily::Linear;
  double c_ = 1, r_ = 2;
};

struct ClauseResult {
  std::string name;
  bool pass = false;
  double value = 0;
  std::string detail;
};

struct CertReport {
  bool pass = false;
  double ell = 0;
  std::vector<ClauseResult> clauses;
  nlohmann::json to_json() const;
};

/// Check nonnegativity, monotonicity, l > 0 and mu(0) > 0 on a geometric
/// sample grid. Failures are report entries, never exceptions.
CertReport certify_hyp1(const MemoryKernel& k, int sample_count);

struct ConditionHReport {
  double integral = 0;  // kappa_2 estimate (infinite when divergent)
  double sup = 0;       // kappa_1 estimate
  bool integral_finite = false;
  bool sup_finite = false;
  bool pass = false;
  bool relaxed_modulus = false;
  std::string note;
  nlohmann::json to_json() const;
};

/// Estimate int mu/H^{-1}(-mu') ds and sup mu/H^{-1}(-mu'): quadrature on
/// [0, s_max] plus an analytic tail classification per family pairing.
ConditionHReport certify_condition_h(const MemoryKernel& k,
                                     const ConvexModulus& h, double s_max,
                                     double tol);

/// Young conjugate H*(s) = s (H')^{-1}(s) - H((H')^{-1}(s)).
double young_conjugate(const ConvexModulus& h, double s);

/// A*B <= H*(A) + H(B) + 1e-12 for every sampled pair.
bool young_inequality_check(const ConvexModulus& h,
                            const std::vector<std::pair<double, double>>& ab);

MemoryKernel kernel_from_json(const nlohmann::json& spec);
ConvexModulus modulus_from_json(const nlohmann::json& spec);

}  // namespace lovesim

#endif
