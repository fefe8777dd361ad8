#include "lovesim/commands.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "lovesim/config.hpp"
#include "lovesim/decay.hpp"
#include "lovesim/trace_io.hpp"

namespace lovesim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_report(const std::string& out_dir, const std::string& name,
                  const json& report) {
  if (out_dir.empty()) return;
  fs::create_directories(out_dir);
  std::ofstream os(fs::path(out_dir) / name);
  os << report.dump(2) << '\n';
}

int error_exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Diverged:
      return 3;
    default:
      return 2;
  }
}

json run_simulation(const RunConfig& cfg, const std::string& out_dir,
                    int* exit_code) {
  json report;
  const Field y0 = cfg.initial_y();
  const Field v0 = cfg.initial_v();
  const PrescribedHistory hist = cfg.make_history(y0);

  if (cfg.certify.hyp1) {
    const auto cert = certify_hyp1(cfg.kernel, cfg.certify.samples);
    report["certificates"]["hyp1"] = cert.to_json();
  }
  if (cfg.certify.condition_h && cfg.modulus) {
    const double smax = cfg.certify.s_max > 0 ? cfg.certify.s_max
                                              : cfg.kernel.default_s_max();
    report["certificates"]["condition_h"] =
        certify_condition_h(cfg.kernel, *cfg.modulus, smax, cfg.certify.tol)
            .to_json();
  }

  RunResult res = run(cfg.solver, cfg.grid, cfg.kernel, hist, y0, v0);
  Trace& trace = res.trace;
  const bool forced =
      cfg.solver.source_mode == SourceMode::ManufacturedForcing;

  report["diverged"] = res.diverged;
  report["cfl_overridden"] = res.cfl_overridden;
  report["samples"] = trace.size();
  if (!trace.empty()) {
    report["energy"] = {{"E0", trace.front().E},
                        {"E_final", trace.back().E}};
  }
  if (forced) report["mms_max_error"] = res.max_mms_error;

  report["dissipation"] = dissipation_to_json(dissipation_check(trace, forced));

  const double mass = cfg.kernel.mass();
  const double ell = 1.0 - mass;
  if (cfg.solver.p > 2 && !trace.empty()) {
    const double C = poincare_constant(cfg.grid);
    const auto gc_half =
        global_condition(trace.front().E, ell, C, cfg.solver.p,
                         ExponentVariant::HalfPminus2);
    const auto gc_full = global_condition(trace.front().E, ell, C,
                                          cfg.solver.p, ExponentVariant::Pminus2);
    report["global_condition"] = {
        {"half_pminus2",
         {{"lhs", gc_half.lhs}, {"rhs", gc_half.rhs}, {"pass", gc_half.pass}}},
        {"pminus2",
         {{"lhs", gc_full.lhs}, {"rhs", gc_full.rhs}, {"pass", gc_full.pass}}}};
  }
  if (!forced) {
    try {
      MemoryTerms mem0;  // t = 0: the tail uses only the prescribed past
      HistoryBuffer b0(cfg.kernel, hist);
      b0.push(0.0, forward_gradient(y0));
      mem0.mu_tail = mu_tail_norm(b0, 0.0);
      const auto ns = nehari_scale(y0, mem0, mass, cfg.solver.p);
      report["nehari"] = {{"bounded", ns.bounded},
                          {"nu_star", ns.nu_star},
                          {"j_at_nu_star", ns.j_at_nu_star},
                          {"Q", ns.Q},
                          {"P", ns.P}};
    } catch (const DomainError&) {
      report["nehari"] = {{"bounded", false}, {"note", "zero initial state"}};
    }
  }

  if (!forced && !trace.empty()) {
    const double eps2 = cfg.fit.eps2;
    const double eps1 =
        cfg.fit.eps1 ? *cfg.fit.eps1 : fit_eps1(trace, eps2);
    for (auto& s : trace) s.L = lyapunov_L(s.E, s.phi, s.xi, eps1, eps2);
    try {
      const auto eq = equivalence_fit(trace, eps1, eps2);
      report["equivalence"] = {{"eps1", eps1},
                               {"eps2", eps2},
                               {"c1", eq.c1},
                               {"c2", eq.c2},
                               {"valid", eq.valid}};
    } catch (const DomainError& e) {
      report["equivalence"] = {{"error", e.what()}};
    }
  }

  if (!forced && cfg.fit.enabled && cfg.modulus && !trace.empty()) {
    const DecayFit fit = fit_bound(trace, *cfg.modulus);
    apply_bound_column(trace, fit, *cfg.modulus);
    report["decay_fit"] = fit.to_json();
  }

  if (cfg.solver.keep_history && res.buffer && !trace.empty()) {
    const auto hb = history_bound_check(*res.buffer, trace.front().E,
                                        hist.m0(), ell, {0.1, 1.0, 10.0}, 50);
    report["history_bound"] = {{"bound", hb.bound},
                               {"max_norm", hb.max_norm},
                               {"pass", hb.pass},
                               {"m0_infinite", hb.m0_infinite}};
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_trace_file((fs::path(out_dir) / cfg.outputs.trace_path).string(),
                     trace);
    report["trace_path"] = cfg.outputs.trace_path;
  }
  *exit_code = res.diverged ? 3 : 0;
  return report;
}

}  // namespace

CommandResult cmd_check_kernel(const json& config, const std::string& out_dir) {
  CommandResult out;
  try {
    const RunConfig cfg = RunConfig::from_json(config);
    const auto cert = certify_hyp1(cfg.kernel, cfg.certify.samples);
    out.report["hyp1"] = cert.to_json();
    if (cfg.modulus) {
      const double smax = cfg.certify.s_max > 0 ? cfg.certify.s_max
                                                : cfg.kernel.default_s_max();
      out.report["condition_h"] =
          certify_condition_h(cfg.kernel, *cfg.modulus, smax, cfg.certify.tol)
              .to_json();
    }
    out.exit_code = cert.pass ? 0 : 1;
  } catch (const Error& e) {
    out.exit_code = error_exit_code(e);
    out.report["error"] = e.what();
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.report["error"] = e.what();
  }
  write_report(out_dir, "report.json", out.report);
  return out;
}

CommandResult cmd_simulate(const json& config, const std::string& out_dir) {
  CommandResult out;
  try {
    const RunConfig cfg = RunConfig::from_json(config);
    out.report = run_simulation(cfg, out_dir, &out.exit_code);
    write_report(out_dir, cfg.outputs.report_path, out.report);
    return out;
  } catch (const Error& e) {
    out.exit_code = error_exit_code(e);
    out.report["error"] = e.what();
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.report["error"] = e.what();
  }
  write_report(out_dir, "report.json", out.report);
  return out;
}

CommandResult cmd_verify_decay(const json& config, const std::string& out_dir) {
  CommandResult out;
  try {
    const RunConfig cfg = RunConfig::from_json(config);
    if (!cfg.modulus)
      throw ConfigError("verify-decay needs a modulus section");
    if (!cfg.fit.enabled)
      throw ConfigError("verify-decay needs fit.enabled");
    out.report = run_simulation(cfg, out_dir, &out.exit_code);
    if (out.exit_code == 0) {
      const auto& fit = out.report.at("decay_fit");
      const bool holds = fit.at("max_violation").get<double>() <= 1e-12 &&
                         !fit.at("degenerate").get<bool>();
      const bool decaying = !fit.at("non_decaying").get<bool>();
      out.report["verdict"] = {{"bound_holds", holds},
                               {"decaying", decaying}};
      out.exit_code = (holds && decaying) ? 0 : 1;
    }
    write_report(out_dir, cfg.outputs.report_path, out.report);
    return out;
  } catch (const Error& e) {
    out.exit_code = error_exit_code(e);
    out.report["error"] = e.what();
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.report["error"] = e.what();
  }
  write_report(out_dir, "report.json", out.report);
  return out;
}

CommandResult cmd_mms(const json& config, const std::string& out_dir) {
  CommandResult out;
  try {
    RunConfig cfg = RunConfig::from_json(config);
    if (!cfg.solver.mms) throw ConfigError("mms command needs an mms section");
    if (cfg.solver.mms->amplitude == 0)
      throw ConfigError("mms orders undefined for a zero exact solution");
    cfg.solver.source_mode = SourceMode::ManufacturedForcing;
    cfg.solver.allow_cfl_override = true;
    cfg.solver.keep_history = false;
    cfg.fit.enabled = false;

    auto run_case = [&](int N, double dt) {
      RunConfig c = cfg;
      c.grid = Grid(cfg.grid.L, N);
      c.solver.dt = dt;
      c.solver.T_final = 1.0;
      c.solver.sample_stride = 1 << 30;  // endpoints only
      const Field y0 = c.initial_y();
      const Field v0 = c.initial_v();
      const RunResult r =
          run(c.solver, c.grid, c.kernel, c.make_history(y0), y0, v0);
      if (r.diverged) throw DivergedError("manufactured run diverged");
      return r.max_mms_error;
    };

    json table;
    std::vector<double> serr;
    for (int N : {50, 100, 200}) {
      const double dx = cfg.grid.L / (N + 1);
      const double err = run_case(N, 0.2 * dx * dx);
      serr.push_back(err);
      table["spatial"].push_back({{"N", N}, {"error", err}});
    }
    std::vector<double> sord;
    for (int i = 0; i + 1 < 3; ++i) {
      const double ratio = (i == 0) ? 101.0 / 51.0 : 201.0 / 101.0;
      sord.push_back(std::log(serr[i] / serr[i + 1]) / std::log(ratio));
    }
    table["spatial_orders"] = sord;

    std::vector<double> terr;
    for (double dt : {8e-3, 4e-3, 2e-3}) {
      const double err = run_case(400, dt);
      terr.push_back(err);
      table["temporal"].push_back({{"dt", dt}, {"error", err}});
    }
    std::vector<double> tord;
    for (int i = 0; i + 1 < 3; ++i)
      tord.push_back(std::log(terr[i] / terr[i + 1]) / std::log(2.0));
    table["temporal_orders"] = tord;

    const double smin = std::min(sord[0], sord[1]);
    const double tmin = std::min(tord[0], tord[1]);
    table["pass"] = smin >= 1.8 && tmin >= 0.9;
    out.report = table;
    out.exit_code = table["pass"].get<bool>() ? 0 : 1;
  } catch (const Error& e) {
    out.exit_code = error_exit_code(e);
    out.report["error"] = e.what();
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.report["error"] = e.what();
  }
  write_report(out_dir, "report.json", out.report);
  return out;
}

CommandResult cmd_sweep(const json& config, const std::string& out_dir,
                        int jobs) {
  CommandResult out;
  try {
    if (!config.contains("sweep"))
      throw ConfigError("sweep command needs a sweep section");
    const json& sw = config.at("sweep");
    auto list_of = [&](const char* key, json fallback) {
      if (!sw.contains(key)) return json::array({std::move(fallback)});
      const json& l = sw.at(key);
      if (!l.is_array() || l.empty())
        throw ConfigError(std::string("sweep list empty or invalid: ") + key);
      return l;
    };
    const json kernels =
        list_of("kernels", config.contains("kernel") ? config.at("kernel")
                                                     : json());
    const json ps = list_of("p", config.contains("solver") &&
                                         config.at("solver").contains("p")
                                     ? config.at("solver").at("p")
                                     : json(2.0));
    const json amps =
        list_of("amplitudes",
                config.contains("initial") &&
                        config.at("initial").contains("amplitude")
                    ? config.at("initial").at("amplitude")
                    : json(0.1));

    struct Cell {
      json config;
      std::string name;
      CommandResult result;
    };
    std::vector<Cell> cells;
    int idx = 0;
    for (const auto& k : kernels)
      for (const auto& p : ps)
        for (const auto& a : amps) {
          json child = config;
          child.erase("sweep");
          child["kernel"] = k;
          child["solver"]["p"] = p;
          child["initial"]["amplitude"] = a;
          cells.push_back({std::move(child), "cell_" + std::to_string(idx++),
                           CommandResult{}});
        }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        const std::string child_dir =
            out_dir.empty() ? "" : (fs::path(out_dir) / cells[i].name).string();
        cells[i].result = cmd_simulate(cells[i].config, child_dir);
      }
    };
    const int nw = std::max(1, std::min<int>(jobs, (int)cells.size()));
    std::vector<std::thread> threads;
    for (int i = 1; i < nw; ++i) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    int worst1 = 0;
    bool any2 = false;
    for (auto& c : cells) {
      json entry = {{"name", c.name},
                    {"kernel", c.config.at("kernel")},
                    {"p", c.config.at("solver").at("p")},
                    {"amplitude", c.config.at("initial").at("amplitude")},
                    {"exit_code", c.result.exit_code}};
      if (c.result.report.contains("energy"))
        entry["energy"] = c.result.report.at("energy");
      if (c.result.report.contains("error"))
        entry["error"] = c.result.report.at("error");
      out.report["cells"].push_back(std::move(entry));
      if (c.result.exit_code >= 2) any2 = true;
      else worst1 = std::max(worst1, c.result.exit_code);
    }
    out.exit_code = any2 ? 2 : worst1;
  } catch (const Error& e) {
    out.exit_code = error_exit_code(e);
    out.report["error"] = e.what();
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.report["error"] = e.what();
  }
  write_report(out_dir, "report.json", out.report);
  return out;
}

CommandResult dispatch(const std::string& name, const json& config,
                       const std::string& out_dir, int jobs) {
  if (name == "check-kernel") return cmd_check_kernel(config, out_dir);
  if (name == "simulate") return cmd_simulate(config, out_dir);
  if (name == "verify-decay") return cmd_verify_decay(config, out_dir);
  if (name == "mms") return cmd_mms(config, out_dir);
  if (name == "sweep") return cmd_sweep(config, out_dir, jobs);
  CommandResult out;
  out.exit_code = 2;
  out.report["error"] = "unknown subcommand: " + name;
  return out;
}

}  // namespace lovesim
