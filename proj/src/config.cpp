#include "lovesim/config.hpp"

#include <cmath>
#include <numbers>

namespace lovesim {

namespace {

using nlohmann::json;

double number(const json& j, const char* key, double fallback,
              bool required = false) {
  if (!j.contains(key)) {
    if (required) throw ConfigError(std::string("missing field: ") + key);
    return fallback;
  }
  if (!j.at(key).is_number())
    throw ConfigError(std::string("field must be numeric: ") + key);
  return j.at(key).get<double>();
}

Field sine_mode(const Grid& g, double amplitude, int mode) {
  if (mode < 1) throw ConfigError("sine mode number must be >= 1");
  Field f(g);
  const double k = mode * std::numbers::pi / g.L;
  for (int i = 0; i < g.N; ++i) f[i] = amplitude * std::sin(k * g.node(i));
  return f;
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) try {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const int version =
      j.contains("schema_version") ? j.at("schema_version").get<int>() : 1;
  if (version != kSchemaVersion)
    throw ConfigError("unsupported schema_version");

  RunConfig cfg;
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    cfg.grid = Grid(number(g, "L", 1.0), (int)number(g, "N", 200));
  }
  if (!j.contains("kernel")) throw ConfigError("missing kernel section");
  cfg.kernel = kernel_from_json(j.at("kernel"));
  if (j.contains("modulus")) cfg.modulus = modulus_from_json(j.at("modulus"));

  if (j.contains("history")) {
    const auto& h = j.at("history");
    const std::string fam = h.value("family", "stationary");
    if (fam == "zero")
      cfg.history.family = HistorySpec::Family::Zero;
    else if (fam == "stationary")
      cfg.history.family = HistorySpec::Family::Stationary;
    else if (fam == "decaying") {
      cfg.history.family = HistorySpec::Family::Decaying;
      cfg.history.rate = number(h, "rate", 1.0, true);
      if (cfg.history.rate <= 0)
        throw ConfigError("decaying history requires rate > 0");
    } else if (fam == "harmonic") {
      cfg.history.family = HistorySpec::Family::Harmonic;
      cfg.history.rate = number(h, "omega", 1.0, true);
    } else
      throw ConfigError("unknown history family: " + fam);
  }

  if (j.contains("initial")) {
    const auto& in = j.at("initial");
    cfg.initial.amplitude = number(in, "amplitude", 0.1);
    cfg.initial.mode = (int)number(in, "mode", 1);
    cfg.initial.velocity_amplitude = number(in, "velocity_amplitude", 0.0);
    cfg.initial.velocity_mode = (int)number(in, "velocity_mode", 1);
  }

  auto& s = cfg.solver;
  if (j.contains("solver")) {
    const auto& sv = j.at("solver");
    s.dt = number(sv, "dt", 0.0);
    s.p = number(sv, "p", 2.0);
    s.T_final = number(sv, "T_final", 1.0);
    s.sample_stride = (int)number(sv, "sample_stride", 1);
    if (sv.contains("damping_implicit"))
      s.damping_implicit = sv.at("damping_implicit").get<bool>();
    if (sv.contains("allow_cfl_override"))
      s.allow_cfl_override = sv.at("allow_cfl_override").get<bool>();
    if (sv.contains("keep_history"))
      s.keep_history = sv.at("keep_history").get<bool>();
    const std::string mode = sv.value("source_mode", "power");
    if (mode == "power")
      s.source_mode = SourceMode::PowerNonlinearity;
    else if (mode == "none")
      s.source_mode = SourceMode::None;
    else if (mode == "manufactured")
      s.source_mode = SourceMode::ManufacturedForcing;
    else
      throw ConfigError("unknown source_mode: " + mode);
  }
  if (s.dt <= 0) s.dt = 0.25 * cfg.grid.dx();
  if (s.sample_stride < 1) throw ConfigError("sample_stride must be >= 1");
  if (s.p < 2) throw ConfigError("p must be >= 2");
  if (s.T_final < 0) throw ConfigError("T_final must be >= 0");

  if (j.contains("mms")) {
    const auto& m = j.at("mms");
    ManufacturedCase mc;
    const std::string prof = m.value("profile", "decaying");
    if (prof == "decaying")
      mc.profile = ManufacturedCase::TimeProfile::DecayingExp;
    else if (prof == "cosine")
      mc.profile = ManufacturedCase::TimeProfile::Cosine;
    else
      throw ConfigError("unknown manufactured profile: " + prof);
    mc.rate = number(m, "rate", 1.0);
    mc.amplitude = number(m, "amplitude", 0.1);
    if (mc.rate <= 0) throw ConfigError("manufactured rate must be > 0");
    s.mms = mc;
  }
  if (s.source_mode == SourceMode::ManufacturedForcing && !s.mms)
    throw ConfigError("manufactured source_mode needs an mms section");

  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    cfg.outputs.trace_path = o.value("trace_path", cfg.outputs.trace_path);
    cfg.outputs.report_path = o.value("report_path", cfg.outputs.report_path);
  }
  if (j.contains("fit")) {
    const auto& f = j.at("fit");
    if (f.contains("enabled")) cfg.fit.enabled = f.at("enabled").get<bool>();
    cfg.fit.eps2 = number(f, "eps2", 1.0);
    if (f.contains("eps1")) cfg.fit.eps1 = number(f, "eps1", 0.0, true);
  }
  if (j.contains("certify")) {
    const auto& c = j.at("certify");
    if (c.contains("hyp1")) cfg.certify.hyp1 = c.at("hyp1").get<bool>();
    if (c.contains("condition_h"))
      cfg.certify.condition_h = c.at("condition_h").get<bool>();
    cfg.certify.samples = (int)number(c, "samples", 64);
    cfg.certify.s_max = number(c, "s_max", 0.0);
    cfg.certify.tol = number(c, "tol", 1e-10);
  }
  if (j.contains("sweep")) cfg.sweep = j.at("sweep");

  // continuity of data at t = 0: y(., 0) must equal the history at age 0
  if (cfg.history.family == HistorySpec::Family::Zero &&
      cfg.initial.amplitude != 0 &&
      cfg.solver.source_mode != SourceMode::ManufacturedForcing)
    throw ConfigError(
        "zero history requires zero initial displacement amplitude");
  return cfg;
} catch (const nlohmann::json::exception& e) {
  throw ConfigError(std::string("malformed config: ") + e.what());
}

Field RunConfig::initial_y() const {
  if (solver.mms && solver.source_mode == SourceMode::ManufacturedForcing)
    return solver.mms->exact(grid, 0.0);
  return sine_mode(grid, initial.amplitude, initial.mode);
}

Field RunConfig::initial_v() const {
  if (solver.mms && solver.source_mode == SourceMode::ManufacturedForcing) {
    Field v = solver.mms->shape(grid);
    const double tp = solver.mms->T_prime(0.0);
    for (double& x : v.v) x *= tp;
    return v;
  }
  return sine_mode(grid, initial.velocity_amplitude, initial.velocity_mode);
}

PrescribedHistory RunConfig::make_history(const Field& y0) const {
  if (solver.mms && solver.source_mode == SourceMode::ManufacturedForcing)
    return solver.mms->history(grid);
  switch (history.family) {
    case HistorySpec::Family::Zero:
      return PrescribedHistory::zero(grid);
    case HistorySpec::Family::Stationary:
      return PrescribedHistory::stationary(y0);
    case HistorySpec::Family::Decaying:
      return PrescribedHistory::decaying(y0, history.rate);
    case HistorySpec::Family::Harmonic:
      return PrescribedHistory::harmonic(y0, history.rate);
  }
  throw ConfigError("unreachable history family");
}

void apply_override(nlohmann::json& config, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like path.to.key=value: " + spec);
  const std::string path = spec.substr(0, eq);
  const std::string raw = spec.substr(eq + 1);
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::parse_error&) {
    value = raw;  // plain string
  }
  nlohmann::json* node = &config;
  std::size_t pos = 0;
  while (true) {
    const auto dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot - pos);
    if (key.empty()) throw ConfigError("empty key in override: " + spec);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    pos = dot + 1;
  }
}

}  // namespace lovesim
