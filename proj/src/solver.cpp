#include "lovesim/solver.hpp"

#include <cmath>
#include <numbers>

namespace lovesim {

double ManufacturedCase::T(double t) const {
  return profile == TimeProfile::DecayingExp ? std::exp(-rate * t)
                                             : std::cos(rate * t);
}

double ManufacturedCase::T_prime(double t) const {
  return profile == TimeProfile::DecayingExp ? -rate * std::exp(-rate * t)
                                             : -rate * std::sin(rate * t);
}

double ManufacturedCase::T_second(double t) const {
  return profile == TimeProfile::DecayingExp
             ? rate * rate * std::exp(-rate * t)
             : -rate * rate * std::cos(rate * t);
}

Field ManufacturedCase::shape(const Grid& g) const {
  Field f(g);
  const double k = std::numbers::pi / g.L;
  for (int i = 0; i < g.N; ++i) f[i] = amplitude * std::sin(k * g.node(i));
  return f;
}

Field ManufacturedCase::exact(const Grid& g, double t) const {
  Field f = shape(g);
  const double tt = T(t);
  for (double& x : f.v) x *= tt;
  return f;
}

PrescribedHistory ManufacturedCase::history(const Grid& g) const {
  const Field Y = shape(g);
  if (profile == TimeProfile::DecayingExp) {
    // y0(., tau) = T(-tau) Y = e^{rate tau} Y: a growing past
    return PrescribedHistory::decaying(Y, -rate);
  }
  return PrescribedHistory::harmonic(Y, rate);
}

double ManufacturedCase::conv_T(const MemoryKernel& k, double t) const {
  if (k.family() != KernelFamily::Exponential)
    throw UnsupportedError(
        "manufactured runs need an exponential kernel for a closed-form "
        "hereditary integral");
  const double a = k.param_a(), b = k.param_b();
  if (profile == TimeProfile::DecayingExp) {
    if (b <= rate)
      throw UnsupportedError(
          "divergent hereditary integral: kernel decay b must exceed the "
          "manufactured rate");
    return a * std::exp(-rate * t) / (b - rate);
  }
  const double w = rate;
  return a * (b * std::cos(w * t) + w * std::sin(w * t)) / (b * b + w * w);
}

Field source_eval(const Field& y, double p) {
  if (p < 2) throw ConfigError("power source requires p >= 2");
  Field s(y.grid);
  for (int i = 0; i < y.size(); ++i) {
    const double u = y[i];
    s[i] = u == 0 ? 0 : std::copysign(std::pow(std::abs(u), p - 1), u);
  }
  const Field w = d1_apply(y);
  Field psi(y.grid);
  for (int i = 0; i < y.size(); ++i) {
    const double u = w[i];
    psi[i] = u == 0 ? 0 : std::copysign(std::pow(std::abs(u), p - 1), u);
  }
  const Field dpsi = d1_apply(psi);
  for (int i = 0; i < y.size(); ++i) s[i] += dpsi[i];
  return s;
}

Field mms_forcing(const ManufacturedCase& mc, const MemoryKernel& k, double p,
                  double t, const Grid& g) {
  const double kx = std::numbers::pi / g.L;
  const double k2 = kx * kx;
  const double Tt = mc.T(t), Tp = mc.T_prime(t), Ts = mc.T_second(t);
  const double lin = Ts + k2 * (Tt + Tp + Ts) - k2 * mc.conv_T(k, t);
  Field f = mc.shape(g);
  for (double& x : f.v) x *= lin;
  const Field src = source_eval(mc.exact(g, t), p);
  for (int i = 0; i < f.size(); ++i) f[i] -= src[i];
  return f;
}

namespace {

Field assemble_rhs(const Field& y, const Field& v, const Field& conv,
                   const SolverConfig& cfg, const MemoryKernel& k,
                   double t) {
  Field rhs = d2_apply(y);
  const Field d2v = d2_apply(v);
  for (int i = 0; i < rhs.size(); ++i) rhs[i] += d2v[i] - conv[i];
  if (cfg.source_mode != SourceMode::None) {
    const Field src = source_eval(y, cfg.p);
    for (int i = 0; i < rhs.size(); ++i) rhs[i] += src[i];
  }
  if (cfg.source_mode == SourceMode::ManufacturedForcing) {
    if (!cfg.mms) throw ConfigError("manufactured run without a case");
    const Field f = mms_forcing(*cfg.mms, k, cfg.p, t, y.grid);
    for (int i = 0; i < rhs.size(); ++i) rhs[i] += f[i];
  }
  return rhs;
}

}  // namespace

SimState step(const SimState& s, const SolverConfig& cfg, HistoryBuffer& buf,
              const MemoryKernel& k) {
  const Field conv = memory_convolution(buf, s.t);
  const Field rhs = assemble_rhs(s.y, s.v, conv, cfg, k, s.t);
  const double alpha = cfg.damping_implicit ? cfg.dt : 0.0;
  SimState out;
  out.a = solve_shifted(rhs, alpha);
  out.v = s.v;
  out.y = s.y;
  for (int i = 0; i < out.y.size(); ++i) {
    out.v[i] += cfg.dt * out.a[i];
    out.y[i] += cfg.dt * out.v[i];
  }
  out.t = s.t + cfg.dt;
  if (!all_finite(out.y) || !all_finite(out.v))
    throw DivergedError("state diverged at t = " + std::to_string(out.t));
  buf.push(out.t, forward_gradient(out.y));
  return out;
}

RunResult run(const SolverConfig& cfg, const Grid& g, const MemoryKernel& k,
              const PrescribedHistory& h, const Field& y0, const Field& v0) {
  if (cfg.dt <= 0) throw ConfigError("dt must be positive");
  if (cfg.p < 2) throw ConfigError("p must be >= 2");
  RunResult res;
  if (cfg.dt > 0.5 * g.dx()) {
    if (!cfg.allow_cfl_override)
      throw ConfigError("dt exceeds 0.5 dx; set the cfl override to proceed");
    res.cfl_overridden = true;
  }
  const bool use_engine = k.family() != KernelFamily::Tabulated;
  const bool want_buffer = !use_engine || cfg.keep_history;
  const bool forced = cfg.source_mode == SourceMode::ManufacturedForcing;

  std::optional<ExpModesMemory> eng;
  if (use_engine) eng.emplace(k, h, g);
  if (want_buffer) res.buffer = std::make_shared<HistoryBuffer>(k, h);

  SimState st;
  st.y = y0;
  st.v = v0;
  st.a = Field(g);
  st.t = 0;
  EdgeField gnow = forward_gradient(st.y);
  if (eng) eng->reset(gnow);
  if (res.buffer) res.buffer->push(0.0, gnow);

  const double mass = eng ? eng->mass() : k.mass();

  auto conv_now = [&]() {
    return eng ? eng->convolution() : memory_convolution(*res.buffer, st.t);
  };
  auto mem_now = [&]() {
    MemoryTerms m;
    if (forced) return m;  // may be divergent for growing pasts; unused
    if (eng) {
      m.mu_tail = eng->mu_tail(gnow);
      m.mu_prime_tail = eng->mu_prime_tail(gnow);
    } else {
      m.mu_tail = mu_tail_norm(*res.buffer, st.t);
      m.mu_prime_tail = mu_prime_tail_norm(*res.buffer, st.t);
    }
    return m;
  };
  auto diamond_now = [&]() {
    if (eng) return eng->mu_diamond(gnow);
    EdgeField w = memory_weighted_gradient(*res.buffer, st.t);
    for (int e = 0; e < w.size(); ++e) w[e] = mass * gnow[e] - w[e];
    return w;
  };

  // initial acceleration from the equation, for the xi integrand at t = 0
  {
    const Field rhs = assemble_rhs(st.y, st.v, conv_now(), cfg, k, 0.0);
    st.a = solve_shifted(rhs, cfg.damping_implicit ? cfg.dt : 0.0);
  }
  XiAccumulator xi;
  EdgeField dia = diamond_now();
  xi.start(st.v, st.a, dia);

  auto emit = [&]() {
    EnergySample s = energy_components(st.y, st.v, mem_now(), mass, cfg.p, st.t);
    s.xi = xi.value(st.v, dia, mass);
    res.trace.push_back(s);
  };
  emit();

  const long nsteps = std::lround(cfg.T_final / cfg.dt);
  if (cfg.mms)
    res.max_mms_error = 0;
  for (long n = 0; n < nsteps; ++n) {
    const Field conv = conv_now();
    const Field rhs = assemble_rhs(st.y, st.v, conv, cfg, k, st.t);
    const Field acc = solve_shifted(rhs, cfg.damping_implicit ? cfg.dt : 0.0);
    st.a = acc;
    for (int i = 0; i < st.y.size(); ++i) {
      st.v[i] += cfg.dt * acc[i];
      st.y[i] += cfg.dt * st.v[i];
    }
    st.t = (n + 1) * cfg.dt;
    if (!all_finite(st.y) || !all_finite(st.v)) {
      res.diverged = true;
      res.diverged_step = n + 1;
      break;
    }
    gnow = forward_gradient(st.y);
    if (eng) eng->advance(cfg.dt, gnow);
    if (res.buffer) res.buffer->push(st.t, gnow);
    dia = diamond_now();
    xi.step(cfg.dt, st.v, st.a, dia);
    if (forced && cfg.mms) {
      const Field ex = cfg.mms->exact(g, st.t);
      double err = 0;
      for (int i = 0; i < g.N; ++i)
        err = std::max(err, std::abs(st.y[i] - ex[i]));
      res.max_mms_error = std::max(res.max_mms_error, err);
    }
    if ((n + 1) % cfg.sample_stride == 0 || n + 1 == nsteps) emit();
  }

  for (std::size_t i = 1; i < res.trace.size(); ++i) {
    const double dtau = res.trace[i].t - res.trace[i - 1].t;
    if (dtau > 0)
      res.trace[i].dE_dt = (res.trace[i].E - res.trace[i - 1].E) / dtau;
  }
  res.final_state = st;
  return res;
}

HistoryBoundReport history_bound_check(const HistoryBuffer& buf, double E0,
                                       double m0, double ell,
                                       const std::vector<double>& ages,
                                       int time_samples) {
  HistoryBoundReport rep;
  if (!std::isfinite(m0)) {
    rep.m0_infinite = true;
    return rep;
  }
  rep.bound = 8.0 / (1.0 - ell) * E0 + 2.0 * m0 * m0;
  const double t_end = buf.empty() ? 0.0 : buf.newest().t;
  for (int j = 0; j <= time_samples; ++j) {
    const double tj = t_end * j / std::max(1, time_samples);
    const Field y_t = buf.state_at_age(t_end - tj);
    for (double s : ages) {
      const double d = state_difference_norm(buf, y_t, t_end - tj + s);
      rep.max_norm = std::max(rep.max_norm, d);
    }
  }
  rep.pass = rep.max_norm <= rep.bound + 1e-8;
  return rep;
}

}  // namespace lovesim
