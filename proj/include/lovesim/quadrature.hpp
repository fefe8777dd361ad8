#ifndef LOVESIM_QUADRATURE_HPP
#define LOVESIM_QUADRATURE_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lovesim {

/// Adaptive Gauss-Kronrod (15-point) on a finite interval.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-10) {
  if (a >= b) return 0.0;
  double error = 0.0;
  double r = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, 12, abs_tol, &error);
  return r;
}

}  // namespace lovesim

#endif
