#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "ntw/model.hpp"

namespace ntw {

// Numerical knobs shared by the subcommands. Zero means "use the module
// default" (dx = h/64, dt from the module's step-size rule).
struct NumericsConfig {
  double dx = 0.0;
  double dt = 0.0;
  double domain_lo = -2.0;
  double domain_hi = 3.0;
  std::vector<double> snapshot_times{0.0, 0.4, 0.8};
  std::string scheme = "upwind";  // or "lax_friedrichs"
  double convergence_tol = 1e-7;
  double endpoint_tol = 1e-4;
};

struct OutputConfig {
  std::string directory = ".";
  std::vector<std::string> formats{"csv", "json"};
};

// Fully validated run description. `normalized` is the defaults-filled JSON
// document; re-parsing it reproduces the same RunConfig (round-trip).
struct RunConfig {
  std::string command;
  ModelConfig model{Kernel::linear_decreasing(0.2), VelocityLaw::linear()};
  double rho_minus = 0.2;
  double rho_plus = 0.8;
  std::vector<double> ells{0.04, 0.02, 0.01, 0.005};
  NumericsConfig numerics;
  OutputConfig output;
  nlohmann::json normalized;
  std::vector<nlohmann::json> runs;  // sweep members (raw patches)
};

// Parses and validates a config document. Unknown keys are rejected at every
// level; defaults are filled in. Overrides are "dotted.path=value" strings
// applied before validation.
RunConfig parse_config_json(nlohmann::json doc,
                            const std::vector<std::string>& overrides = {});
RunConfig parse_config(const std::string& path,
                       const std::vector<std::string>& overrides = {});

// One double rendered with 12 significant digits.
std::string format_sig(double v);

// Header row then data rows, every number at 12 significant digits,
// newline-terminated. Byte-deterministic for identical inputs.
void emit_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows);

// Executes the configured command, writing outputs under
// output.directory. Returns the process exit code (0 on success; sweep
// returns 1 if any member run failed).
int run_command(const RunConfig& config);

}  // namespace ntw
