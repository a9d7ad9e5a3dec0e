#pragma once

#include <string>
#include <vector>

#include "ntw/profile.hpp"

namespace ntw {

// Result of the small-car-length study: discrete profiles and rates against
// their continuum counterparts along a decreasing sequence of ell values.
struct ConvergenceReport {
  std::vector<double> ells;
  std::vector<double> sup_errors;         // aligned interior sup distances
  std::vector<double> rate_errors_plus;   // |lambda_plus^ell - lambda_plus|
  std::vector<double> rate_errors_minus;  // |lambda_minus^ell - lambda_minus|
  std::vector<double> ratios;             // successive sup_error quotients
  std::vector<double> rate_ratios;        // successive rate_error_plus quotients
  double lambda_plus_cont = 0.0;
  double lambda_minus_cont = 0.0;
  std::vector<std::string> failures;  // per-ell failure messages
};

// For each ell: solve the discrete profile, align it to the continuum
// profile at the rho_hat crossing (golden-section polished), and record the
// interior sup distance (excluding an h + max(ells) edge band) along with
// the rate errors. Per-ell failures are recorded and skipped.
ConvergenceReport run_study(const ModelConfig& base,
                            const std::vector<double>& ells, double rho_minus,
                            double rho_plus, double x_min, double x_max,
                            double dx);

}  // namespace ntw
