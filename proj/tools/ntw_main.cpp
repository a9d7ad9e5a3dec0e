// Command-line driver for the nonlocal traveling-wave toolkit.
//
//   ntw [command] --config cfg.json [--out DIR] [--override key=value ...]
//
// The command may come from the config file ("command" field) or the command
// line; the command line wins when both are present. Exit codes: 0 success,
// 2 validation error, 3 numerical failure, 4 I/O error.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ntw/errors.hpp"
#include "ntw/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"traveling-wave profiles for nonlocal traffic models"};
  std::string command;
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  app.add_option("command", command,
                 "rates | profile-q | profile-p | ftls-sim | pde-sim | "
                 "micro-macro | sweep");
  app.add_option("--config", config_path, "JSON config file")->required();
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--override", overrides,
                 "dotted.path=value patches applied to the config");
  CLI11_PARSE(app, argc, argv);

  try {
    if (!command.empty()) overrides.push_back("command=" + command);
    if (!out_dir.empty()) overrides.push_back("output.directory=" + out_dir);
    ntw::RunConfig cfg = ntw::parse_config(config_path, overrides);
    return ntw::run_command(cfg);
  } catch (const ntw::validation_error& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 2;
  } catch (const ntw::numerical_error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const ntw::io_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
