#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lovesim/solver.hpp"

using namespace lovesim;

namespace {

Field sine(const Grid& g, double amp = 1.0) {
  Field f(g);
  const double k = std::numbers::pi / g.L;
  for (int i = 0; i < g.N; ++i) f[i] = amp * std::sin(k * g.node(i));
  return f;
}

// Dense Gaussian elimination for the oracle solver.
std::vector<double> dense_solve(std::vector<std::vector<double>> A,
                                std::vector<double> b) {
  const int n = (int)b.size();
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return x;
}

}  // namespace

TEST_CASE("power source closed forms") {
  Grid g(1.0, 99);
  const Field y = sine(g);

  SUBCASE("p = 2 is y plus the twice-centered difference") {
    const Field s = source_eval(y, 2.0);
    const Field d1y = d1_apply(y);
    const Field dd = d1_apply(d1y);
    for (int i = 0; i < g.N; ++i)
      CHECK(s[i] == doctest::Approx(y[i] + dd[i]).epsilon(1e-13));
  }

  SUBCASE("p = 3 matches the symbolic source away from sign changes") {
    // S = y^2 + d/dx(|y_x| y_x); for y = sin(pi x) on x < 1/2:
    // S = sin^2 - 2 pi^3 sin cos, up to O(dx^2).
    const Field s = source_eval(y, 3.0);
    const double pi = std::numbers::pi;
    for (int i = 5; i < g.N / 2 - 5; ++i) {
      const double x = g.node(i);
      const double exact =
          std::sin(pi * x) * std::sin(pi * x) -
          2 * pi * pi * pi * std::sin(pi * x) * std::cos(pi * x);
      CHECK(s[i] == doctest::Approx(exact).epsilon(2e-2));
    }
  }

  SUBCASE("zero field maps to zero") {
    const Field s = source_eval(Field(g), 4.0);
    for (double v : s.v) CHECK(v == 0.0);
  }
  CHECK_THROWS_AS(source_eval(y, 1.5), ConfigError);
}

TEST_CASE("zero data stays identically zero") {
  Grid g(1.0, 20);
  const auto k = MemoryKernel::exponential(0.5, 1.0);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.T_final = 0.5;
  const auto res =
      run(cfg, g, k, PrescribedHistory::zero(g), Field(g), Field(g));
  CHECK(!res.diverged);
  for (const auto& s : res.trace) {
    CHECK(s.E == 0.0);
    CHECK(s.mu_tail == 0.0);
  }
  for (double v : res.final_state.y.v) CHECK(v == 0.0);
}

TEST_CASE("T_final = 0 produces exactly the initial sample") {
  Grid g(1.0, 20);
  const auto k = MemoryKernel::exponential(0.5, 1.0);
  const Field y0 = sine(g, 0.1);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.T_final = 0.0;
  const auto res =
      run(cfg, g, k, PrescribedHistory::stationary(y0), y0, Field(g));
  REQUIRE(res.trace.size() == 1);
  CHECK(res.trace[0].t == 0.0);
  CHECK(res.trace[0].E > 0.0);
  CHECK(res.trace[0].mu_tail == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("CFL guard") {
  Grid g(1.0, 20);  // dx about 0.0476
  const auto k = MemoryKernel::exponential(0.5, 1.0);
  const Field y0 = sine(g, 0.1);
  SolverConfig cfg;
  cfg.dt = 0.1;  // above 0.5 dx
  cfg.T_final = 0.2;
  CHECK_THROWS_AS(
      run(cfg, g, k, PrescribedHistory::stationary(y0), y0, Field(g)),
      ConfigError);
  cfg.allow_cfl_override = true;
  const auto res =
      run(cfg, g, k, PrescribedHistory::stationary(y0), y0, Field(g));
  CHECK(res.cfl_overridden);
}

TEST_CASE("step throws on non-finite states") {
  Grid g(1.0, 10);
  const auto k = MemoryKernel::exponential(0.5, 1.0);
  SimState st;
  st.y = Field(g);
  st.v = Field(g);
  st.a = Field(g);
  st.y[5] = 1e200;  // p = 5 source overflows instantly
  HistoryBuffer buf(k, PrescribedHistory::zero(g));
  buf.push(0.0, forward_gradient(st.y));
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.p = 5.0;
  CHECK_THROWS_AS(step(st, cfg, buf, k), DivergedError);
}

TEST_CASE("run flags divergence instead of throwing") {
  Grid g(1.0, 50);
  const auto k = MemoryKernel::exponential(0.5, 1.0);
  const Field y0 = sine(g, 50.0);
  SolverConfig cfg;
  cfg.dt = 0.5;
  cfg.T_final = 20.0;
  cfg.p = 3.0;
  cfg.allow_cfl_override = true;
  const auto res =
      run(cfg, g, k, PrescribedHistory::stationary(y0), y0, Field(g));
  CHECK(res.diverged);
  CHECK(res.diverged_step > 0);
  CHECK(!res.trace.empty());
}

TEST_CASE("two steps match a dense-matrix reimplementation") {
  const int N = 4;
  Grid g(1.0, N);
  const double dx = g.dx();
  const auto k = MemoryKernel::exponential(0.5, 1.0);
  const Field y0 = sine(g, 0.1);
  const auto hist = PrescribedHistory::stationary(y0);

  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.p = 2.0;
  cfg.T_final = 1.0;

  // library path
  HistoryBuffer buf(k, hist);
  buf.push(0.0, forward_gradient(y0));
  SimState st;
  st.y = y0;
  st.v = Field(g);
  st.a = Field(g);
  st.t = 0;
  SimState s1 = step(st, cfg, buf, k);
  SimState s2 = step(s1, cfg, buf, k);

  // oracle: everything dense and explicit
  auto d2 = [&](const std::vector<double>& u) {
    std::vector<double> r(N);
    for (int i = 0; i < N; ++i) {
      const double um = i > 0 ? u[i - 1] : 0.0;
      const double up = i < N - 1 ? u[i + 1] : 0.0;
      r[i] = (um - 2 * u[i] + up) / (dx * dx);
    }
    return r;
  };
  auto d1 = [&](const std::vector<double>& u) {
    std::vector<double> r(N);
    for (int i = 0; i < N; ++i) {
      const double um = i > 0 ? u[i - 1] : 0.0;
      const double up = i < N - 1 ? u[i + 1] : 0.0;
      r[i] = (up - um) / (2 * dx);
    }
    return r;
  };
  auto grad = [&](const std::vector<double>& u) {
    std::vector<double> r(N + 1);
    for (int e = 0; e <= N; ++e) {
      const double lo = e > 0 ? u[e - 1] : 0.0;
      const double hi = e < N ? u[e] : 0.0;
      r[e] = (hi - lo) / dx;
    }
    return r;
  };
  auto div = [&](const std::vector<double>& e) {
    std::vector<double> r(N);
    for (int i = 0; i < N; ++i) r[i] = (e[i + 1] - e[i]) / dx;
    return r;
  };

  struct Rec {
    double t, w;
    std::vector<double> g;
  };
  std::vector<Rec> recs = {{0.0, 0.0, grad(std::vector<double>(y0.v))}};
  auto push = [&](double t, std::vector<double> ge) {
    const double half = 0.5 * (t - recs.back().t);
    recs.back().w += half;
    recs.push_back({t, half, std::move(ge)});
  };

  const std::vector<double> gy0 = grad(std::vector<double>(y0.v));
  auto conv = [&](double t) {
    std::vector<double> acc(N + 1, 0.0);
    for (const auto& r : recs) {
      const double mu = 0.5 * std::exp(-(t - r.t));
      for (int e = 0; e <= N; ++e) acc[e] += r.w * mu * r.g[e];
    }
    const double tail = 0.5 * std::exp(-t);  // int_t^inf a e^{-bs} ds
    for (int e = 0; e <= N; ++e) acc[e] += tail * gy0[e];
    return div(acc);
  };

  std::vector<double> y(y0.v), v(N, 0.0);
  double t = 0;
  auto one_step = [&]() {
    const auto cy = conv(t);
    auto rhs = d2(y);
    const auto dv = d2(v);
    const auto dd = d1(d1(y));  // p = 2 source: y + centered-diff twice
    for (int i = 0; i < N; ++i) rhs[i] += dv[i] - cy[i] + y[i] + dd[i];
    std::vector<std::vector<double>> A(N, std::vector<double>(N, 0.0));
    const double c = (1 + cfg.dt) / (dx * dx);
    for (int i = 0; i < N; ++i) {
      A[i][i] = 1 + 2 * c;
      if (i > 0) A[i][i - 1] = -c;
      if (i < N - 1) A[i][i + 1] = -c;
    }
    const auto a = dense_solve(A, rhs);
    for (int i = 0; i < N; ++i) {
      v[i] += cfg.dt * a[i];
      y[i] += cfg.dt * v[i];
    }
    t += cfg.dt;
    push(t, grad(y));
  };
  one_step();
  one_step();

  for (int i = 0; i < N; ++i) {
    CHECK(std::abs(s2.y[i] - y[i]) <= 1e-12);
    CHECK(std::abs(s2.v[i] - v[i]) <= 1e-12);
  }
}

TEST_CASE("hereditary energy identity holds to quadrature accuracy") {
  // d/dt [mu_tail/2 - mass ||y_x||^2 / 2] =
  //     <conv, y'> + mu_prime_tail/2, checked as a finite difference with
  // endpoint-averaged right side; the residual is O(dt^2) per unit time.
  Grid g(1.0, 30);
  const auto k = MemoryKernel::exponential(0.5, 1.0);
  const Field y0 = sine(g, 0.1);
  const auto hist = PrescribedHistory::stationary(y0);
  const double mass = k.mass();

  auto residual = [&](double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.p = 2.0;
    HistoryBuffer buf(k, hist);
    buf.push(0.0, forward_gradient(y0));
    SimState st;
    st.y = y0;
    st.v = sine(g, 0.05);
    st.a = Field(g);
    st.t = 0;

    double total = 0;
    double mt_prev = mu_tail_norm(buf, 0.0);
    auto gn = forward_gradient(st.y);
    double gx_prev = inner(gn, gn);
    Field conv_prev = memory_convolution(buf, 0.0);
    double mp_prev = mu_prime_tail_norm(buf, 0.0);
    Field v_prev = st.v;
    const int steps = (int)std::lround(0.5 / dt);
    for (int n = 0; n < steps; ++n) {
      st = step(st, cfg, buf, k);
      const double mt = mu_tail_norm(buf, st.t);
      gn = forward_gradient(st.y);
      const double gx = inner(gn, gn);
      const Field conv = memory_convolution(buf, st.t);
      const double mp = mu_prime_tail_norm(buf, st.t);
      const double lhs = 0.5 * (mt - mt_prev) - 0.5 * mass * (gx - gx_prev);
      const double rhs =
          dt * 0.5 *
          ((inner(conv_prev, v_prev) + 0.5 * mp_prev) +
           (inner(conv, st.v) + 0.5 * mp));
      total += std::abs(lhs - rhs);
      mt_prev = mt;
      gx_prev = gx;
      conv_prev = conv;
      mp_prev = mp;
      v_prev = st.v;
    }
    return total;
  };

  const double r1 = residual(2e-3);
  const double r2 = residual(1e-3);
  CHECK(r1 < 1e-4);
  CHECK(r1 / r2 > 1.5);  // shrinks with dt
}

TEST_CASE("p = 2, vanishing kernel: energy plus dissipation is conserved") {
  Grid g(1.0, 50);
  const auto k = MemoryKernel::exponential(0.0, 1.0);
  const Field y0 = sine(g, 0.1);

  auto drift = [&](double dt) {
    SolverConfig cfg;
    cfg.dt = dt;
    cfg.p = 2.0;
    cfg.T_final = 1.0;
    const auto res =
        run(cfg, g, k, PrescribedHistory::stationary(y0), y0, Field(g));
    REQUIRE(!res.diverged);
    // E_n + sum dt * 2 kin_grad should be nearly constant; the residual
    // carries both an O(dt) quadrature part and an O(dx^2) part from the
    // edge-vs-centered gradient norms, so only its size is asserted
    double acc = 0, worst = 0;
    for (std::size_t i = 1; i < res.trace.size(); ++i) {
      acc += dt * 2.0 * res.trace[i].kin_grad;
      worst = std::max(worst,
                       std::abs(res.trace[i].E + acc - res.trace[0].E));
    }
    return worst / res.trace[0].E;
  };
  CHECK(drift(2e-3) < 0.05);
  CHECK(drift(1e-3) < 0.05);
}

TEST_CASE("manufactured forcing: closed forms and convergence") {
  Grid g(1.0, 50);
  const auto k = MemoryKernel::exponential(0.5, 2.0);
  ManufacturedCase mc;
  mc.profile = ManufacturedCase::TimeProfile::DecayingExp;
  mc.rate = 1.0;
  mc.amplitude = 0.1;

  SUBCASE("hereditary integral of the time profile") {
    // int_0^inf a e^{-bs} e^{-(t-s)} ds = a e^{-t}/(b-1)
    CHECK(mc.conv_T(k, 0.7) ==
          doctest::Approx(0.5 * std::exp(-0.7) / (2.0 - 1.0)).epsilon(1e-13));
    ManufacturedCase cos_case = mc;
    cos_case.profile = ManufacturedCase::TimeProfile::Cosine;
    cos_case.rate = 2.0;
    // a (b cos + w sin) / (b^2 + w^2)
    const double t = 0.3;
    CHECK(cos_case.conv_T(k, t) ==
          doctest::Approx(0.5 * (2 * std::cos(2 * t) + 2 * std::sin(2 * t)) /
                          8.0)
              .epsilon(1e-13));
    // kernel must outpace the growing past
    ManufacturedCase slow = mc;
    slow.rate = 3.0;
    CHECK_THROWS_AS(slow.conv_T(k, 0.0), UnsupportedError);
    CHECK_THROWS_AS(mc.conv_T(MemoryKernel::polynomial(1.0, 3.0), 0.0),
                    UnsupportedError);
  }

  SUBCASE("zero amplitude gives zero forcing") {
    ManufacturedCase z = mc;
    z.amplitude = 0.0;
    const Field f = mms_forcing(z, k, 3.0, 0.5, g);
    for (double v : f.v) CHECK(v == 0.0);
  }

  SUBCASE("a forced run tracks the exact solution") {
    SolverConfig cfg;
    cfg.dt = 0.2 * g.dx() * g.dx();
    cfg.p = 3.0;
    cfg.T_final = 0.5;
    cfg.source_mode = SourceMode::ManufacturedForcing;
    cfg.sample_stride = 100;
    cfg.mms = mc;
    const auto res = run(cfg, g, k, mc.history(g), mc.exact(g, 0.0),
                         [&] {
                           Field v = mc.shape(g);
                           for (double& x : v.v) x *= mc.T_prime(0.0);
                           return v;
                         }());
    CHECK(!res.diverged);
    CHECK(res.max_mms_error < 5e-4);
    CHECK(res.max_mms_error > 0.0);
  }
}
