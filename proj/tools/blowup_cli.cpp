// blowup: command-line front end over the C API.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blowup/blowup.h"

namespace {

int report_failure(const char* context) {
  std::cerr << "blowup: " << context << ": " << blowup_last_error() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blow-up on a prescribed surface for u_tt - u_xx = 2u^3: series, reduced flow, construction, direct checks"};

  std::vector<std::string> commands;
  std::size_t n_commands = 0;
  const char* const* names = blowup_command_names(&n_commands);
  for (std::size_t i = 0; i < n_commands; ++i) commands.emplace_back(names[i]);

  std::string command;
  std::string config_path;
  std::string out_dir;
  std::string record_path;
  std::vector<std::string> overrides;
  int shift = -1;
  bool print_defaults = false;

  app.add_option("command", command, "expand | simulate | construct | verify | sweep | check")
      ->check(CLI::IsMember(commands));
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (default: run.out)");
  app.add_option("--shift", shift, "Shift order h for the reduced integration")->check(CLI::NonNegativeNumber);
  app.add_option("--set", overrides, "Override, section.key=value (repeatable)");
  app.add_option("--record", record_path, "verify: read Cauchy data from a construct record")->check(CLI::ExistingFile);
  app.add_flag("--print-defaults", print_defaults, "Print the default configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  blowup_config* cfg = nullptr;
  if (print_defaults) {
    if (blowup_config_default(&cfg) != BLOWUP_OK) return report_failure("defaults");
    char* text = nullptr;
    blowup_config_to_ini(cfg, &text);
    std::cout << text;
    blowup_string_free(text);
    blowup_config_free(cfg);
    return 0;
  }
  if (command.empty()) {
    std::cerr << "blowup: a command is required\n" << app.help();
    return 1;
  }

  const blowup_status st = config_path.empty() ? blowup_config_default(&cfg) : blowup_config_load(config_path.c_str(), &cfg);
  if (st != BLOWUP_OK) return report_failure("config");
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      std::cerr << "blowup: override '" << o << "' is not section.key=value\n";
      blowup_config_free(cfg);
      return 1;
    }
    if (blowup_config_set(cfg, o.substr(0, eq).c_str(), o.substr(eq + 1).c_str()) != BLOWUP_OK) {
      blowup_config_free(cfg);
      return report_failure("override");
    }
  }
  if (shift >= 0 && blowup_config_set(cfg, "integrator.shift", std::to_string(shift).c_str()) != BLOWUP_OK) {
    blowup_config_free(cfg);
    return report_failure("--shift");
  }

  char* summary = nullptr;
  const int code = blowup_run(cfg, command.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
                              record_path.empty() ? nullptr : record_path.c_str(), &summary);
  if (summary) std::cout << summary << "\n";
  if (code != 0 && *blowup_last_error()) std::cerr << "blowup: " << blowup_last_error() << "\n";
  blowup_string_free(summary);
  blowup_config_free(cfg);
  return code;
}
