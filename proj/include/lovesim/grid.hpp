#ifndef LOVESIM_GRID_HPP
#define LOVESIM_GRID_HPP

#include <vector>

#include "lovesim/errors.hpp"

namespace lovesim {

/// Uniform 1D grid on (0, L) with homogeneous Dirichlet boundaries.
/// Fields live on the N interior nodes x_i = i*dx, i = 1..N; edge fields
/// live on the N+1 cell edges between consecutive nodes (boundary included).
struct Grid {
  double L = 1.0;
  int N = 3;

  Grid() = default;
  Grid(double length, int interior) : L(length), N(interior) {
    if (length <= 0 || interior < 3)
      throw ConfigError("grid requires L > 0 and N >= 3");
  }
  double dx() const { return L / (N + 1); }
  double node(int i) const { return (i + 1) * dx(); }  // i = 0..N-1
  bool operator==(const Grid& o) const { return L == o.L && N == o.N; }
};

/// Nodal field: interior values only, boundary pinned to zero.
struct Field {
  Grid grid;
  std::vector<double> v;

  Field() = default;
  explicit Field(const Grid& g) : grid(g), v(g.N, 0.0) {}
  Field(const Grid& g, std::vector<double> values) : grid(g), v(std::move(values)) {
    if (static_cast<int>(v.size()) != g.N)
      throw ConfigError("field length does not match grid");
  }
  int size() const { return grid.N; }
  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
};

/// Edge field: N+1 values on cell edges.
struct EdgeField {
  Grid grid;
  std::vector<double> v;

  EdgeField() = default;
  explicit EdgeField(const Grid& g) : grid(g), v(g.N + 1, 0.0) {}
  int size() const { return grid.N + 1; }
  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
};

/// Forward-difference gradient on cell edges with zero Dirichlet ghosts.
EdgeField forward_gradient(const Field& u);

/// Divergence of an edge field back onto nodes; adjoint of -forward_gradient.
Field divergence(const EdgeField& g);

/// Standard second difference (u_{i-1} - 2u_i + u_{i+1})/dx^2, zero ghosts.
Field d2_apply(const Field& u);

/// Centered first difference (u_{i+1} - u_{i-1})/(2dx), zero ghosts.
Field d1_apply(const Field& u);

/// Solve (I - (1+alpha) D2) w = rhs by the Thomas algorithm.
Field solve_shifted(const Field& rhs, double alpha);

/// Trapezoidal approximation of the integral of |u|^p over (0, L),
/// boundary values zero. Returns the integral itself, not its p-th root.
double lp_norm(const Field& u, double p);

/// Midpoint approximation of the integral of |g|^p for an edge field.
double lp_norm(const EdgeField& g, double p);

/// Discrete L2 inner products (dx-weighted sums).
double inner(const Field& a, const Field& b);
double inner(const EdgeField& a, const EdgeField& b);

/// Best constant C with ||y||_2 <= C ||y_x||_2 on H_0^1(0, L), i.e. L/pi.
double poincare_constant(const Grid& g);

/// Reconstruct nodal values from an edge gradient by cumulative summation
/// (exact inverse of forward_gradient thanks to the zero left boundary).
Field integrate_gradient(const EdgeField& g);

bool all_finite(const Field& u);

}  // namespace lovesim

#endif
