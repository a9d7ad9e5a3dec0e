#include "ntw/rates.hpp"

#include <cmath>

#include "ntw/errors.hpp"
#include "ntw/root_finding.hpp"

namespace ntw {

namespace {

// u / (1 - e^{-u}) with the removable singularity at u = 0 handled by series.
double stable_ratio(double u) {
  if (std::abs(u) < 1e-6) return 1.0 + u / 2.0 + u * u / 12.0;
  return u / -std::expm1(-u);
}

RateResult no_root(Side side, double a, double b, std::string why) {
  RateResult r;
  r.side = side;
  r.a = a;
  r.b = b;
  r.has_root = false;
  r.diagnostic = std::move(why);
  return r;
}

// Solves the characteristic equation for one side given the evaluator
// F(mu) = H(a, mu), which is strictly decreasing with F(0) = b - 1.
// PlusInfinity: the positive root of F (requires b > 1).
// MinusInfinity: the negated negative root, i.e. the positive root of
// lambda -> F(-lambda) (requires b < 1).
RateResult solve_side(const Kernel& kernel, double a, double b, Side side,
                      double lower_bound) {
  RateResult r;
  r.side = side;
  r.a = a;
  r.b = b;
  r.lower_bound = lower_bound;
  auto f = [&](double lambda) {
    double mu = (side == Side::PlusInfinity) ? lambda : -lambda;
    return char_residual(kernel, a, b, mu);
  };
  // On the plus side the analytic lower bound is a valid left bracket
  // (f > 0 there); on the minus side it is negative, so start at 0 where
  // f(0) = b - 1 < 0.
  double lo = (side == Side::PlusInfinity) ? std::max(lower_bound, 0.0) : 0.0;
  if (side == Side::PlusInfinity && f(lo) <= 0.0) lo = 0.0;  // safety net
  auto bracket = expand_bracket(f, lo, 1.0);
  if (!bracket.found)
    throw numerical_error("rate solve: no sign change after 10 bracket doublings");
  auto root = bisect(f, lo, bracket.hi);
  if (!root.converged)
    throw numerical_error("rate solve: bisection failed to converge");
  r.lambda = root.x;
  r.lo = root.lo;
  r.hi = root.hi;
  r.residual = std::abs(f(root.x));
  r.has_root = true;
  return r;
}

}  // namespace

double char_residual(const Kernel& kernel, double a, double b, double lambda) {
  if (a == 0.0) return b * kernel.exp_integral(lambda) - 1.0;
  double h = kernel.h();
  double sum = 0.0;
  for (int k = 0; k * a < h; ++k) {
    double what = kernel.integral(k * a, (k + 1) * a);
    sum += what * std::exp(-static_cast<double>(k) * a * lambda);
  }
  return b * sum - stable_ratio(a * lambda);
}

double endpoint_beta(const ModelConfig& config, double rho_end) {
  double denom = config.velocity.v(rho_end) - config.sigma;
  if (denom <= 0)
    throw validation_error("endpoint_beta: frame velocity non-positive at endpoint");
  return -rho_end * config.velocity.dv(rho_end) / denom;
}

RateResult continuous_rate(const ModelConfig& config, double rho_end, Side side) {
  double b = endpoint_beta(config, rho_end);
  double h = config.h();
  if (side == Side::PlusInfinity && b <= 1.0)
    return no_root(side, 0.0, b,
                   "beta <= 1 at the +inf endpoint: tail is non-exponential "
                   "(lambda = 0 trivial case)");
  if (side == Side::MinusInfinity && b >= 1.0)
    return no_root(side, 0.0, b,
                   "beta >= 1 at the -inf endpoint: tail is non-exponential "
                   "(lambda = 0 trivial case)");
  double lower_bound = std::log(b) / h;
  return solve_side(config.kernel, 0.0, b, side, lower_bound);
}

RateResult discrete_rate(const ModelConfig& config, double rho_end, Side side) {
  double b = endpoint_beta(config, rho_end);
  double a = config.ell / rho_end;
  double h = config.h();
  if (side == Side::PlusInfinity && b <= 1.0)
    return no_root(side, a, b,
                   "b <= 1 at the +inf endpoint: tail is non-exponential "
                   "(lambda = 0 trivial case)");
  if (side == Side::MinusInfinity && b >= 1.0)
    return no_root(side, a, b,
                   "b >= 1 at the -inf endpoint: tail is non-exponential "
                   "(lambda = 0 trivial case)");
  double lower_bound = (b - 1.0) / (b * h + a);
  return solve_side(config.kernel, a, b, side, lower_bound);
}

SymmetricRateDiagnosis symmetric_rate_check(const Kernel& kernel,
                                            const VelocityLaw& velocity,
                                            double rho_end) {
  if (!kernel.symmetric())
    throw validation_error("symmetric_rate_check requires a symmetric kernel");
  SymmetricRateDiagnosis d;
  double v = velocity.v(rho_end);
  if (v <= 0)
    throw validation_error("symmetric_rate_check: v(rho_end) must be positive");
  d.beta = -rho_end * velocity.dv(rho_end) / v;
  if (d.beta >= 1.0) {
    d.has_positive_root = false;
    return d;
  }
  // F(lambda) = int_{-h}^{h} e^{-lambda s} w(s) ds - 1/beta is even in lambda
  // with F(0) = 1 - 1/beta < 0 and F increasing for lambda > 0.
  auto f = [&](double lambda) {
    return kernel.exp_integral(lambda) - 1.0 / d.beta;
  };
  auto bracket = expand_bracket(f, 0.0, 1.0);
  if (!bracket.found)
    throw numerical_error("symmetric_rate_check: bracket expansion failed");
  d.root = bisect(f, 0.0, bracket.hi).x;
  d.has_positive_root = true;
  return d;
}

}  // namespace ntw
