#pragma once

#include <string>

#include "ntw/model.hpp"

namespace ntw {

enum class Side { PlusInfinity, MinusInfinity };

// Result of a tail decay-rate solve. `a` is the discretization scale
// ell/rho_end (0 for the continuum equation) and `b` is the coefficient
// beta = -rho*v'(rho)/(v(rho)-sigma) at the endpoint.
struct RateResult {
  double lambda = 0.0;
  double lo = 0.0, hi = 0.0;  // final bisection bracket
  double lower_bound = 0.0;   // closed-form analytic bound
  Side side = Side::PlusInfinity;
  double residual = 0.0;  // |characteristic function| at lambda
  double a = 0.0;
  double b = 0.0;
  bool has_root = false;
  std::string diagnostic;  // set when has_root is false
};

// Shared characteristic evaluator H(a, lambda) = b * sum_k what_k e^{-k a
// lambda} - a*lambda/(1 - e^{-a*lambda}), where what_k are the kernel masses
// of the cells [ka, (k+1)a]. At a = 0 this degenerates to the continuum form
// b * int e^{-lambda s} w(s) ds - 1. The second term is evaluated by a stable
// series near lambda = 0.
double char_residual(const Kernel& kernel, double a, double b, double lambda);

// beta at an endpoint in the sigma-frame: -rho*v'(rho) / (v(rho) - sigma).
double endpoint_beta(const ModelConfig& config, double rho_end);

// Decay rate of the continuum profile tail at rho_end on the given side.
// PlusInfinity requires beta > 1, MinusInfinity requires beta < 1; otherwise
// the result carries has_root = false and a diagnostic.
RateResult continuous_rate(const ModelConfig& config, double rho_end, Side side);

// Decay rate of the discrete profile tail (cell scale a = ell/rho_end).
RateResult discrete_rate(const ModelConfig& config, double rho_end, Side side);

// Positive-root diagnosis for even kernels on [-h,h]: solves
// int_{-h}^{h} e^{-lambda s} w(s) ds = 1/beta. A positive root exists iff
// beta < 1, the reverse of the one-sided condition.
struct SymmetricRateDiagnosis {
  bool has_positive_root = false;
  double root = 0.0;
  double beta = 0.0;
};
SymmetricRateDiagnosis symmetric_rate_check(const Kernel& kernel,
                                            const VelocityLaw& velocity,
                                            double rho_end);

}  // namespace ntw
