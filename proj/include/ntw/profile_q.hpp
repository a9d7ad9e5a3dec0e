#pragma once

#include <functional>

#include "ntw/profile.hpp"

namespace ntw {

// Nonlocal average A(Q;x) = int_0^h Q(x+s) w(s) ds by trapezoid over the
// profile's grid cells (the same quadrature the marching scheme uses).
double nonlocal_average(const Profile& q, const Kernel& kernel, double x);

// Variant-2 average A(v(Q);x).
double nonlocal_average_v(const Profile& q, const ModelConfig& config, double x);

// Frame flux at x: variant 1: Q*(v(A(Q))-sigma); variant 2: Q*(A(v(Q))-sigma).
double frame_flux(const Profile& q, const ModelConfig& config, double x);

// Max of |frame_flux - fbar| over all grid nodes x with [x, x+h] inside the
// stored domain.
double flux_residual_max(const Profile& q, const ModelConfig& config);

// Backward Newton march from analytic initial data `seed` on [x0, inf) down
// to x_min. The grid is x0 - i*dx; each step solves the constant-flux
// equation for the new left value with Newton seeded at the previous value
// and a bisection fallback. Returned profile is unnormalized (its abscissae
// are the raw grid).
Profile solve_ivp_backward(const ModelConfig& config,
                           const std::function<double(double)>& seed,
                           double x0, double x_min, double dx);

// Options for the asymptotic (two-sided) solve.
struct AsymptoticOptions {
  double seed_amplitude = 1e-6;  // initial tail deviation of the seed
  double convergence_tol = 1e-7;
  int max_outer = 64;
  double endpoint_tol = 1e-4;
};

// Two-sided profile with tails rho_minus / rho_plus on [x_min, x_max].
// Runs the backward IVP from a sequence of right anchors with exponential
// seeds, shift-normalizes each iterate at its rho_hat crossing, and stops
// when successive normalized iterates agree to convergence_tol in sup-norm.
Profile solve_asymptotic(const ModelConfig& config, double rho_minus,
                         double rho_plus, double x_min, double x_max,
                         double dx, const AsymptoticOptions& opts = {});

// One pass of the fixed-point map Q <- fbar / (v(A(Q)) - sigma) (variant-2:
// fbar / (A(v(Q)) - sigma)) over the interior nodes; returns the max change.
// Cross-validation only; not the production solver.
double picard_residual(const Profile& q, const ModelConfig& config);

}  // namespace ntw
