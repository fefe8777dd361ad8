#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lovesim/commands.hpp"
#include "lovesim/trace_io.hpp"

using namespace lovesim;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json base_config() {
  return json{
      {"kernel", {{"family", "exponential"}, {"a", 0.5}, {"b", 1.0}}},
      {"grid", {{"L", 1.0}, {"N", 60}}},
      {"initial", {{"amplitude", 0.1}}},
      {"solver", {{"T_final", 0.5}, {"sample_stride", 10}}}};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("lovesim_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_CASE("check-kernel exit codes") {
  CHECK(dispatch("check-kernel", base_config(), "", 1).exit_code == 0);

  json bad = base_config();
  bad["kernel"]["a"] = 2.0;  // mass 2: certification fails
  const auto r = dispatch("check-kernel", bad, "", 1);
  CHECK(r.exit_code == 1);
  CHECK(r.report.at("hyp1").at("pass").get<bool>() == false);

  json broken = base_config();
  broken["kernel"]["family"] = "alien";
  CHECK(dispatch("check-kernel", broken, "", 1).exit_code == 2);

  CHECK(dispatch("no-such-command", base_config(), "", 1).exit_code == 2);
}

TEST_CASE("check-kernel reports the growth condition when a modulus is given") {
  json cfg = base_config();
  cfg["modulus"] = {{"family", "power"}, {"r", 2.5}, {"c", 1.0}};
  cfg["kernel"] = {{"family", "polynomial"}, {"a", 1.0}, {"q", 3.0}};
  const auto r = dispatch("check-kernel", cfg, "", 1);
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("condition_h").at("pass").get<bool>());
}

TEST_CASE("simulate writes a trace and a report") {
  TempDir tmp;
  const auto r = cmd_simulate(base_config(), tmp.path.string());
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("diverged").get<bool>() == false);
  CHECK(r.report.at("energy").at("E0").get<double>() > 0);

  const Trace tr = read_trace_file((tmp.path / "trace.csv").string());
  CHECK(tr.size() == r.report.at("samples").get<std::size_t>());
  CHECK(tr.front().t == 0.0);
  CHECK(fs::exists(tmp.path / "report.json"));

  // determinism: a second run produces byte-identical trace output
  TempDir tmp2;
  cmd_simulate(base_config(), tmp2.path.string());
  std::ifstream f1(tmp.path / "trace.csv"), f2(tmp2.path / "trace.csv");
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  CHECK(!s1.str().empty());
}

TEST_CASE("simulate with T_final = 0 emits one row") {
  json cfg = base_config();
  cfg["solver"]["T_final"] = 0.0;
  const auto r = cmd_simulate(cfg, "");
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("samples").get<int>() == 1);
}

TEST_CASE("simulate reports divergence with exit 3 and keeps the partial trace") {
  TempDir tmp;
  json cfg = base_config();
  cfg["initial"]["amplitude"] = 50.0;
  cfg["solver"]["dt"] = 0.5;
  cfg["solver"]["T_final"] = 20.0;
  cfg["solver"]["allow_cfl_override"] = true;
  cfg["solver"]["p"] = 3.0;
  cfg["solver"]["sample_stride"] = 1;
  const auto r = cmd_simulate(cfg, tmp.path.string());
  CHECK(r.exit_code == 3);
  CHECK(r.report.at("diverged").get<bool>());
  const Trace tr = read_trace_file((tmp.path / "trace.csv").string());
  CHECK(!tr.empty());
}

TEST_CASE("simulate rejects an over-CFL step without the override") {
  json cfg = base_config();
  cfg["solver"]["dt"] = 0.5;
  CHECK(cmd_simulate(cfg, "").exit_code == 2);
}

TEST_CASE("verify-decay verdict") {
  json cfg = base_config();
  cfg["modulus"] = {{"family", "linear"}, {"c", 1.0}};
  cfg["solver"]["T_final"] = 5.0;
  cfg["solver"]["sample_stride"] = 20;
  const auto r = cmd_verify_decay(cfg, "");
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("verdict").at("bound_holds").get<bool>());
  CHECK(r.report.at("verdict").at("decaying").get<bool>());

  // without a modulus the command is unusable
  CHECK(cmd_verify_decay(base_config(), "").exit_code == 2);
}

TEST_CASE("mms configuration errors") {
  // no mms section
  CHECK(cmd_mms(base_config(), "").exit_code == 2);

  json cfg = base_config();
  cfg["mms"] = {{"profile", "decaying"}, {"rate", 1.0}, {"amplitude", 0.0}};
  CHECK(cmd_mms(cfg, "").exit_code == 2);

  // kernel decay must outpace the manufactured growth of the past
  json slow = base_config();
  slow["kernel"]["b"] = 0.5;
  slow["mms"] = {{"profile", "decaying"}, {"rate", 1.0}, {"amplitude", 0.1}};
  CHECK(cmd_mms(slow, "").exit_code == 2);
}

TEST_CASE("sweep runs the cross product and aggregates exit codes") {
  TempDir tmp;
  json cfg = base_config();
  cfg["solver"]["T_final"] = 0.2;
  cfg["sweep"] = {
      {"kernels",
       {json{{"family", "exponential"}, {"a", 0.5}, {"b", 1.0}},
        json{{"family", "exponential"}, {"a", 0.25}, {"b", 2.0}}}},
      {"p", {2.0, 3.0}},
      {"amplitudes", {0.05, 0.1}}};
  const auto r = cmd_sweep(cfg, tmp.path.string(), 4);
  CHECK(r.exit_code == 0);
  REQUIRE(r.report.at("cells").size() == 8);
  for (const auto& c : r.report.at("cells"))
    CHECK(c.at("exit_code").get<int>() == 0);
  CHECK(fs::exists(tmp.path / "cell_0" / "trace.csv"));
  CHECK(fs::exists(tmp.path / "cell_7" / "report.json"));

  // an invalid cell pushes the aggregate to 2
  json bad = cfg;
  bad["sweep"]["p"] = {2.0, 1.0};  // p = 1 is rejected per cell
  CHECK(cmd_sweep(bad, "", 2).exit_code == 2);

  // empty lists are a configuration error
  json empty = cfg;
  empty["sweep"]["p"] = json::array();
  CHECK(cmd_sweep(empty, "", 1).exit_code == 2);

  // no sweep section at all
  CHECK(cmd_sweep(base_config(), "", 1).exit_code == 2);
}

TEST_CASE("sweep without explicit lists falls back to the base config") {
  json cfg = base_config();
  cfg["solver"]["T_final"] = 0.1;
  cfg["sweep"] = json::object();
  const auto r = cmd_sweep(cfg, "", 1);
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("cells").size() == 1);
}
