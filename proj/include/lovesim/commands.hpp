#ifndef LOVESIM_COMMANDS_HPP
#define LOVESIM_COMMANDS_HPP

#include <string>

#include <json.hpp>

namespace lovesim {

/// Exit code contract: 0 pass, 1 property failed, 2 usage/config error,
/// 3 numerical divergence.
struct CommandResult {
  int exit_code = 0;
  nlohmann::json report;
};

CommandResult cmd_check_kernel(const nlohmann::json& config,
                               const std::string& out_dir);
CommandResult cmd_simulate(const nlohmann::json& config,
                           const std::string& out_dir);
CommandResult cmd_verify_decay(const nlohmann::json& config,
                               const std::string& out_dir);
CommandResult cmd_mms(const nlohmann::json& config, const std::string& out_dir);
CommandResult cmd_sweep(const nlohmann::json& config,
                        const std::string& out_dir, int jobs);

/// Route a subcommand by name; unknown names yield exit 2.
CommandResult dispatch(const std::string& name, const nlohmann::json& config,
                       const std::string& out_dir, int jobs);

}  // namespace lovesim

#endif
