#include "lovesim/capi.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "lovesim/commands.hpp"
#include "lovesim/kernel.hpp"

using namespace lovesim;

struct love_kernel {
  MemoryKernel k;
};
struct love_modulus {
  ConvexModulus m;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** error_out, const std::string& msg) {
  if (error_out) *error_out = dup_string(msg);
}

int code_of(const Error& e) { return static_cast<int>(e.code()); }

template <class F>
int guarded(char** error_out, F&& f) {
  try {
    f();
    return 0;
  } catch (const Error& e) {
    set_error(error_out, e.what());
    return code_of(e);
  } catch (const std::exception& e) {
    set_error(error_out, e.what());
    return static_cast<int>(ErrorCode::Config);
  }
}

}  // namespace

extern "C" {

const char* love_version(void) { return "1.0.0"; }

void love_string_free(char* s) { std::free(s); }

love_kernel* love_kernel_from_json(const char* spec, char** error_out) {
  love_kernel* out = nullptr;
  guarded(error_out, [&] {
    if (!spec) throw ConfigError("null kernel spec");
    out = new love_kernel{kernel_from_json(nlohmann::json::parse(spec))};
  });
  return out;
}

void love_kernel_free(love_kernel* k) { delete k; }

int love_kernel_mu(const love_kernel* k, double s, double* out) {
  if (!k || !out) return static_cast<int>(ErrorCode::Config);
  return guarded(nullptr, [&] { *out = k->k.mu(s); });
}

int love_kernel_mu_prime(const love_kernel* k, double s, double* out) {
  if (!k || !out) return static_cast<int>(ErrorCode::Config);
  return guarded(nullptr, [&] { *out = k->k.mu_prime(s); });
}

int love_kernel_mass(const love_kernel* k, double* out) {
  if (!k || !out) return static_cast<int>(ErrorCode::Config);
  return guarded(nullptr, [&] { *out = k->k.mass(); });
}

int love_kernel_certify_hyp1(const love_kernel* k, int sample_count,
                             char** report_out) {
  if (!k) return static_cast<int>(ErrorCode::Config);
  return guarded(report_out, [&] {
    const auto rep = certify_hyp1(k->k, sample_count);
    if (report_out) *report_out = dup_string(rep.to_json().dump());
  });
}

love_modulus* love_modulus_from_json(const char* spec, char** error_out) {
  love_modulus* out = nullptr;
  guarded(error_out, [&] {
    if (!spec) throw ConfigError("null modulus spec");
    out = new love_modulus{modulus_from_json(nlohmann::json::parse(spec))};
  });
  return out;
}

void love_modulus_free(love_modulus* m) { delete m; }

int love_modulus_h(const love_modulus* m, double t, double* out) {
  if (!m || !out) return static_cast<int>(ErrorCode::Config);
  return guarded(nullptr, [&] { *out = m->m.H(t); });
}

int love_modulus_h_inv(const love_modulus* m, double u, double* out) {
  if (!m || !out) return static_cast<int>(ErrorCode::Config);
  return guarded(nullptr, [&] { *out = m->m.H_inv(u); });
}

int love_young_conjugate(const love_modulus* m, double s, double* out) {
  if (!m || !out) return static_cast<int>(ErrorCode::Config);
  return guarded(nullptr, [&] { *out = young_conjugate(m->m, s); });
}

int love_certify_condition_h(const love_kernel* k, const love_modulus* m,
                             double s_max, double tol, char** report_out) {
  if (!k || !m) return static_cast<int>(ErrorCode::Config);
  return guarded(report_out, [&] {
    const auto rep = certify_condition_h(k->k, m->m, s_max, tol);
    if (report_out) *report_out = dup_string(rep.to_json().dump());
  });
}

int love_run_command(const char* subcommand, const char* config_json,
                     const char* out_dir, int jobs, char** report_out) {
  if (!subcommand || !config_json) return 2;
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(config_json);
  } catch (const std::exception&) {
    set_error(report_out, "invalid config JSON");
    return 2;
  }
  try {
    const CommandResult res = dispatch(
        subcommand, config, out_dir ? out_dir : "", jobs > 0 ? jobs : 1);
    if (report_out) *report_out = dup_string(res.report.dump(2));
    return res.exit_code;
  } catch (const Error& e) {
    set_error(report_out, e.what());
    return code_of(e) == 3 ? 3 : 2;
  } catch (const std::exception& e) {
    set_error(report_out, e.what());
    return 2;
  }
}

}  // extern "C"
