#ifndef LOVESIM_MEMORY_ENGINE_HPP
#define LOVESIM_MEMORY_ENGINE_HPP

#include <vector>

#include "lovesim/grid.hpp"
#include "lovesim/history.hpp"
#include "lovesim/kernel.hpp"

namespace lovesim {

/// Per-step hereditary evaluation through a sum-of-exponentials view of the
/// kernel: exact single mode for Exponential, a Laplace-quadrature fit for
/// Polynomial. Each mode carries trapezoid recursions for the mu-weighted
/// gradient and squared gradient, so one step costs O(modes * N) regardless
/// of the trajectory length. Tabulated kernels are not representable here;
/// callers fall back to the HistoryBuffer path.
class ExpModesMemory {
 public:
  ExpModesMemory(const MemoryKernel& k, const PrescribedHistory& h,
                 const Grid& grid);

  /// Rebind the trajectory start: state at t = 0 with edge gradient g0.
  void reset(const EdgeField& g0);
  void advance(double dt, const EdgeField& g_new);

  double t() const { return t_; }
  double mass() const { return mass_; }

  /// int_0^inf mu(s) y_x(t-s) ds on edges (stored plus prescribed part).
  EdgeField weighted_gradient() const;
  Field convolution() const;

  /// int int mu(s) |g_now - y_x(t-s)|^2; g_now is the current edge gradient.
  double mu_tail(const EdgeField& g_now) const;
  double mu_prime_tail(const EdgeField& g_now) const;

  /// (mu diamond y_x)(t) = mass * g_now - weighted_gradient.
  EdgeField mu_diamond(const EdgeField& g_now) const;

 private:
  struct Mode {
    double lambda = 1, c = 0;
    double f1 = 0, f2 = 0;  // prescribed factors: i_k = c e^{-lambda t} f_k
  };
  std::vector<Mode> modes_;
  bool f2_valid_ = true;  // i2 can diverge for growing manufactured pasts
  Grid grid_;
  EdgeField grad_Y_;
  double mass_ = 0;
  double t_ = 0;
  // recursion state, one edge-sized vector per mode
  std::vector<std::vector<double>> P_;  // int_0^t c e^{-lambda(t-tau)} g
  std::vector<std::vector<double>> Q_;  // same with g^2
  EdgeField g_prev_;
};

}  // namespace lovesim

#endif
