#ifndef LOVESIM_HISTORY_HPP
#define LOVESIM_HISTORY_HPP

#include <deque>
#include <limits>

#include "lovesim/grid.hpp"
#include "lovesim/kernel.hpp"

namespace lovesim {

/// Prescribed past y(x,-tau) = y0(x,tau) = profile(tau) * Y(x), tau >= 0.
///
/// Families with closed-form time dependence:
///   Zero        y0 = 0
///   Stationary  profile = 1
///   Decaying    profile = exp(-rate*tau); rate < 0 is admitted for
///               manufactured-solution runs (the past then grows and m0
///               is reported as infinite)
///   Harmonic    profile = cos(rate*tau)
class PrescribedHistory {
 public:
  enum class Family { Zero, Stationary, Decaying, Harmonic };

  static PrescribedHistory zero(const Grid& g);
  static PrescribedHistory stationary(const Field& Y);
  static PrescribedHistory decaying(const Field& Y, double rate);
  static PrescribedHistory harmonic(const Field& Y, double omega);

  Family family() const { return family_; }
  double rate() const { return rate_; }
  double profile(double tau) const;
  const EdgeField& gradient_Y() const { return grad_Y_; }
  Field value_at(double tau) const;  // nodal y0(., tau)

  /// sup over tau >= 0 of the squared gradient norm of y0(., tau);
  /// infinite for a growing (rate < 0) past.
  double m0() const;

 private:
  Family family_ = Family::Zero;
  double rate_ = 0;
  EdgeField grad_Y_;
  Field Y_;
  double grad_norm2_ = 0;  // dx-weighted squared norm of grad_Y
};

/// Scalar integrals int_t^inf w(s) * profile(s-t)^k ds for k = 0,1,2,
/// where w is mu or mu'. Closed forms for exponential kernels; adaptive
/// quadrature plus an analytic tail bound otherwise.
struct WeightedTailIntegrals {
  double i0 = 0, i1 = 0, i2 = 0;
};
WeightedTailIntegrals prescribed_integrals(const MemoryKernel& k,
                                           const PrescribedHistory& h, double t,
                                           bool use_mu_prime);

struct HistoryRecord {
  double t = 0;
  double weight = 0;  // composite-trapezoid measure in time
  EdgeField g;        // edge gradient of y at time t
};

/// Ring of edge-gradient records for the computed trajectory on [0, t],
/// backed by the prescribed history for older times. Coarsening merges
/// old record pairs by mu-weighted averaging once their combined mu-weight
/// drops below eps_coarsen times the kernel mass.
class HistoryBuffer {
 public:
  HistoryBuffer(MemoryKernel kernel, PrescribedHistory prescribed,
                double eps_coarsen = 1e-9);

  void push(double t, EdgeField g);  // t must exceed the newest record
  void coarsen();
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const HistoryRecord& newest() const;
  const std::deque<HistoryRecord>& records() const { return records_; }
  const MemoryKernel& kernel() const { return kernel_; }
  const PrescribedHistory& prescribed() const { return prescribed_; }
  double eps_coarsen() const { return eps_coarsen_; }
  void set_auto_coarsen(bool on) { auto_coarsen_ = on; }

  /// Edge gradient of the state at the given age t_now - tau... age >= 0;
  /// linear interpolation between records, prescribed history beyond.
  EdgeField gradient_at_age(double age) const;
  Field state_at_age(double age) const;

 private:
  MemoryKernel kernel_;
  PrescribedHistory prescribed_;
  double eps_coarsen_;
  bool auto_coarsen_ = true;
  int pushes_since_coarsen_ = 0;
  std::deque<HistoryRecord> records_;
};

/// mu-weighted gradient int_0^inf mu(s) y_x(t-s) ds on edges.
EdgeField memory_weighted_gradient(const HistoryBuffer& buf, double t);

/// Divergence form of the hereditary term int_0^inf mu(s) y_xx(t-s) ds.
Field memory_convolution(const HistoryBuffer& buf, double t);

/// int_Omega int_0^inf mu(s) |y_x(t) - y_x(t-s)|^2 ds dx  (>= 0).
double mu_tail_norm(const HistoryBuffer& buf, double t);

/// Same with mu'(s) as weight (<= 0).
double mu_prime_tail_norm(const HistoryBuffer& buf, double t);

/// int_Omega |y(t) - y(t-s)|^2 dx for one age s, for the history bound.
double state_difference_norm(const HistoryBuffer& buf, const Field& y_now,
                             double age);

}  // namespace lovesim

#endif
