#pragma once

#include <functional>
#include <vector>

#include "ntw/profile.hpp"

namespace ntw {

// Position of the leader of a car sitting at x under spacing law ell/P:
// x + ell / P(x). Uses the profile's stored ell.
double leader_op(const Profile& p, double x);

// Discrete averaging operator A^P(x) = sum_k w_k P(z_k) along the leader
// chain z_0 = x, z_{k+1} = z_k + ell/P(z_k), with w_k the kernel mass of
// [z_k - x, z_{k+1} - x] (truncated at h, so the weights sum to 1). The
// VelocityAveraged variant averages v(P(z_k)) instead.
double discrete_average(const Profile& p, const ModelConfig& config, double x);

// Backward method-of-steps integration of the profile delay equation from
// analytic initial data `seed` on [x0, inf) down to x_min. dx is snapped to
// ell / n with n >= 8 so interval boundaries at multiples of ell are
// step-aligned. Returns the profile on the raw grid.
Profile solve_p_ivp(const ModelConfig& config,
                    const std::function<double(double)>& seed, double x0,
                    double x_min, double dx);

struct PAsymptoticOptions {
  double seed_amplitude = 1e-6;
  double convergence_tol = 1e-7;
  int max_outer = 64;
  double endpoint_tol = 1e-4;
};

// Two-sided discrete profile with tails rho_minus / rho_plus, via the same
// outer iteration as the continuum solver but integrating the delay equation.
Profile solve_p_asymptotic(const ModelConfig& config, double rho_minus,
                           double rho_plus, double x_min, double x_max,
                           double dx, const PAsymptoticOptions& opts = {});

// |int_x^{x + ell/P(x)} dz / (v(A^P(z)) - sigma)  -  ell / fbar|, evaluated
// with 8-point Gauss-Legendre quadrature per grid cell. Zero for exact
// profiles (the period identity).
double periodicity_residual(const Profile& p, const ModelConfig& config,
                            double x);

// Car positions generated by the profile: forward by the leader map,
// backward by bisecting the follower equation z + ell/P(z) = z_next.
// Returns count_left + 1 + count_right positions with z0 at index count_left.
std::vector<double> generate_cars(const Profile& p, double z0, int count_left,
                                  int count_right);

}  // namespace ntw
