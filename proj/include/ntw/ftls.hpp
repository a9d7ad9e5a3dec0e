#pragma once

#include <vector>

#include "ntw/profile.hpp"

namespace ntw {

// One snapshot of the particle system. Positions are strictly increasing
// with spacing >= ell. The platoon is finite but the model is bi-infinite:
// rightmost cars see a virtual continuation at constant spacing
// ell / boundary_rho_plus.
struct CarState {
  double t = 0.0;
  std::vector<double> z;
  double boundary_rho_minus = 0.0;
  double boundary_rho_plus = 0.0;
};

// Discrete density of car i: ell / (z_{i+1} - z_i); the last car uses the
// virtual continuation density boundary_rho_plus.
double car_density(const CarState& state, const ModelConfig& config,
                   std::size_t i);

// Speed of car i: v applied to the kernel-weighted average of leader
// densities (DensityAveraged) or the weighted average of leader speeds
// (VelocityAveraged). Weights are kernel masses of the gap intervals,
// truncated at the horizon.
double car_speed(const CarState& state, std::size_t i,
                 const ModelConfig& config);

// Advances all positions by one classical RK4 step of size dt, recomputing
// weights at every stage. If the minimum-spacing invariant fails, the step
// is retried as two half steps (up to 10 halvings).
CarState ftls_step(const CarState& state, double dt, const ModelConfig& config);

// Three-branch oscillatory density: 0.2 left of -0.3, 0.5 - 0.3*sin(5 pi z)
// in between, 0.8 right of 0.3.
double oscillatory_density(double z);

// Platoon whose discrete densities match oscillatory_density at the car
// positions, built left-to-right from z_lo by z_{i+1} = z_i + ell/rho(z_i).
CarState oscillatory_ic(const ModelConfig& config, double z_lo = -1.5,
                        double z_hi = 1.5);

// Per-car coordinate on the shift family of a reference profile:
// phi_i = P(P^{-1}(rho_i) - z_i). Cars whose density falls outside the
// sampled range of the reference are flagged and excluded from the range.
struct PhiDiagnostic {
  std::vector<double> phi;    // NaN where invalid
  std::vector<double> c;      // per-car shift P^{-1}(rho_i) - z_i (NaN if invalid)
  std::vector<bool> valid;
  double range = 0.0;         // max - min over valid cars
  double mean_shift = 0.0;    // mean of c over valid cars
  int flagged = 0;
};
PhiDiagnostic phi_diagnostic(const CarState& state, const Profile& reference);

}  // namespace ntw
