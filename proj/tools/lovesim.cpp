// Command-line front end; talks to the core only through the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lovesim/capi.h"

namespace {

using nlohmann::json;

int fail_usage(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 2;
}

bool apply_override(json& config, const std::string& spec, std::string& err) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    err = "override must look like path.to.key=value: " + spec;
    return false;
  }
  const std::string path = spec.substr(0, eq);
  const std::string raw = spec.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json* node = &config;
  std::size_t pos = 0;
  for (;;) {
    const auto dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot - pos);
    if (key.empty()) {
      err = "empty key in override: " + spec;
      return false;
    }
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return true;
    }
    node = &(*node)[key];
    pos = dot + 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and analysis tool for a viscoelastic wave model "
               "with infinite memory"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int jobs = 1;
  long seed = 0;  // reserved
  std::vector<std::string> overrides;
  bool quiet = false;

  app.add_option("--config", config_path, "Run configuration (JSON)");
  app.add_option("--out", out_dir, "Output directory for traces and reports");
  app.add_option("--jobs", jobs, "Concurrent sweep workers")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Reserved for future stochastic features");
  app.add_option("--override", overrides,
                 "Config override, key.path=value (repeatable)");
  app.add_flag("--quiet", quiet, "Suppress the report on stdout");

  for (const char* name :
       {"check-kernel", "simulate", "verify-decay", "mms", "sweep"})
    app.add_subcommand(name)->fallthrough();

  std::string version = love_version();
  app.set_version_flag("--version", version);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage message
    return 2;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  if (config_path.empty()) return fail_usage("--config is required");
  std::ifstream in(config_path);
  if (!in) return fail_usage("cannot read config: " + config_path);
  std::stringstream buf;
  buf << in.rdbuf();

  json config;
  try {
    config = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    return fail_usage(std::string("config is not valid JSON: ") + e.what());
  }
  for (const auto& ov : overrides) {
    std::string err;
    if (!apply_override(config, ov, err)) return fail_usage(err);
  }

  char* report = nullptr;
  const int code = love_run_command(sub.c_str(), config.dump().c_str(),
                                    out_dir.empty() ? nullptr : out_dir.c_str(),
                                    jobs, &report);
  if (report) {
    if (!quiet) std::cout << report << "\n";
    love_string_free(report);
  }
  return code;
}
