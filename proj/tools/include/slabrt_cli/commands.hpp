#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include <slabrt/errors.hpp>

#include "slabrt_cli/run_config.hpp"

namespace slabrt::cli {

/// Raised when a command needs a growing mode and none exists.
class NoGrowingMode : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode { Success = 0, InvalidInput = 2, NoGrowth = 3, ConvergenceFailure = 4 };

ExitCode exit_code_for(ErrorCode code) noexcept;

/// Each command writes its files into config.out_dir (created on demand),
/// prints a short summary to log and returns its JSON document.
nlohmann::json cmd_check(const RunConfig& config, std::ostream& log);
nlohmann::json cmd_critical(const RunConfig& config, std::ostream& log);
nlohmann::json cmd_dispersion(const RunConfig& config, std::ostream& log);
nlohmann::json cmd_mode(const RunConfig& config, std::ostream& log);
nlohmann::json cmd_evolve(const RunConfig& config, std::ostream& log);
nlohmann::json cmd_escape(const RunConfig& config, std::ostream& log);

/// Dispatches by name and maps failures onto exit codes, reporting them on err.
int run_command(const std::string& name, const RunConfig& config, std::ostream& log,
                std::ostream& err);

}  // namespace slabrt::cli
