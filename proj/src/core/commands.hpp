#pragma once

#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/io.hpp"

namespace blowup {

/// Exit codes: 0 success or report, 1 validation, 2 numerical.
enum ExitCode { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2 };

struct CommandOptions {
  std::string out_dir;      ///< empty: cfg.out
  std::string record_path;  ///< verify only: read the Cauchy data from this record
};

struct CommandResult {
  int exit_code = kExitOk;
  json summary;
};

const std::vector<std::string>& command_names();

/// Runs one subcommand. Errors are caught and mapped onto exit codes; the summary then
/// carries "error_kind" and "message". Every run writes provenance.json and summary.json.
CommandResult run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opt = {});

CommandResult cmd_expand(const RunConfig& cfg, const std::string& out);
CommandResult cmd_simulate(const RunConfig& cfg, const std::string& out);
CommandResult cmd_construct(const RunConfig& cfg, const std::string& out);
CommandResult cmd_verify(const RunConfig& cfg, const std::string& out, const std::string& record_path = "");
CommandResult cmd_sweep(const RunConfig& cfg, const std::string& out);
CommandResult cmd_check(const RunConfig& cfg, const std::string& out);

}  // namespace blowup
