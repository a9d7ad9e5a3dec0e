#pragma once

#include <string>
#include <vector>

#include "ntw/profile.hpp"

namespace ntw {

// Grid density snapshot. Values live at nodes x0 + j*dx; beyond the grid the
// field is extended by the constant boundary states.
struct FieldState {
  double t = 0.0;
  double x0 = 0.0;
  double dx = 0.0;
  std::vector<double> rho;
  double rho_minus = 0.0;
  double rho_plus = 0.0;
};

enum class Scheme { Upwind, LaxFriedrichs };

// Per-cell transport speed: v of the windowed average (DensityAveraged) or
// the windowed average of v (VelocityAveraged); trapezoid quadrature over
// cells with constant extension beyond the grid.
std::vector<double> nonlocal_velocity_field(const FieldState& state,
                                            const ModelConfig& config);

// Boundary fluxes actually used by a step (for conservation bookkeeping).
struct StepFluxes {
  double left = 0.0;
  double right = 0.0;
};

// One conservative step. Upwind (donor-cell, valid since V >= 0) or
// Lax-Friedrichs. Ghost cells hold the boundary constants. Throws on CFL
// violation (dt <= 0.5*dx/max(1, max|V|)) and on non-finite values.
FieldState pde_step(const FieldState& state, double dt,
                    const ModelConfig& config, Scheme scheme,
                    StepFluxes* fluxes = nullptr);

// Pointwise evaluation of the three-branch oscillatory density on a grid.
FieldState oscillatory_field_ic(double x_lo, double x_hi, double dx);

double total_variation(const FieldState& state);
double field_mass(const FieldState& state);  // sum rho_j * dx

// Best-shift sup-distance between a field and a monotone reference profile,
// over the interior (edge_margin clipped from both ends).
double field_profile_distance(const FieldState& state, const Profile& reference,
                              double edge_margin);

struct InstabilityReport {
  std::vector<double> tv;        // total variation per snapshot
  std::vector<double> sup_dist;  // distance to the reference (if given)
  std::string classification;    // "converging" or "diverging"
};

// TV per snapshot plus (optionally) the aligned distance to a reference
// profile; classified by the sign of the TV trend.
InstabilityReport instability_metric(const std::vector<FieldState>& series,
                                     const Profile* reference = nullptr,
                                     double edge_margin = 0.0);

}  // namespace ntw
