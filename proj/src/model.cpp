#include "ntw/model.hpp"

#include <algorithm>
#include <cmath>

#include "ntw/errors.hpp"
#include "ntw/root_finding.hpp"

namespace ntw {

namespace {

// int_0^T e^{-lambda s} ds, stable across lambda = 0.
double exp_moment0(double lambda, double T) {
  double u = lambda * T;
  if (std::abs(u) < 1e-8) return T * (1.0 - u / 2 + u * u / 6);
  return -std::expm1(-u) / lambda;
}

// int_0^T s e^{-lambda s} ds, stable across lambda = 0.
double exp_moment1(double lambda, double T) {
  double u = lambda * T;
  if (std::abs(u) < 1e-8) return T * T * (0.5 - u / 3 + u * u / 8);
  return (1.0 - (1.0 + u) * std::exp(-u)) / (lambda * lambda);
}

// Linear coefficients w(s) = c0 + c1*s for the closed-form shapes.
struct LinearCoeffs {
  double c0, c1;
};

LinearCoeffs poly_coeffs(KernelShape shape, double h) {
  switch (shape) {
    case KernelShape::LinearDecreasing:
      return {2.0 / h, -2.0 / (h * h)};
    case KernelShape::LinearIncreasing:
      return {0.0, 2.0 / (h * h)};
    case KernelShape::Uniform:
      return {1.0 / h, 0.0};
    default:
      throw validation_error("poly_coeffs: not a closed-form kernel shape");
  }
}

}  // namespace

Kernel Kernel::linear_decreasing(double h) {
  if (h <= 0) throw validation_error("kernel horizon h must be positive");
  return Kernel(KernelShape::LinearDecreasing, h);
}

Kernel Kernel::linear_increasing(double h) {
  if (h <= 0) throw validation_error("kernel horizon h must be positive");
  return Kernel(KernelShape::LinearIncreasing, h);
}

Kernel Kernel::uniform(double h) {
  if (h <= 0) throw validation_error("kernel horizon h must be positive");
  return Kernel(KernelShape::Uniform, h);
}

Kernel Kernel::symmetric_uniform(double h) {
  if (h <= 0) throw validation_error("kernel horizon h must be positive");
  return Kernel(KernelShape::SymmetricEven, h);
}

Kernel Kernel::tabulated(double h, std::vector<double> samples) {
  if (h <= 0) throw validation_error("kernel horizon h must be positive");
  if (samples.size() < 2)
    throw validation_error("tabulated kernel needs at least 2 samples");
  for (double s : samples)
    if (!(s >= 0))
      throw validation_error("tabulated kernel samples must be nonnegative");
  // Trapezoid mass of the raw samples on uniform abscissae.
  double dx = h / static_cast<double>(samples.size() - 1);
  double mass = 0;
  for (std::size_t j = 0; j + 1 < samples.size(); ++j)
    mass += 0.5 * dx * (samples[j] + samples[j + 1]);
  if (std::abs(mass - 1.0) > 1e-3)
    throw validation_error("tabulated kernel normalization defect exceeds 1e-3");
  for (double& s : samples) s /= mass;
  Kernel k(KernelShape::Tabulated, h);
  k.samples_ = std::move(samples);
  return k;
}

double Kernel::sample_at(double s) const {
  // Piecewise-linear interpolant of samples_ on [0,h].
  double n1 = static_cast<double>(samples_.size() - 1);
  double u = s / h_ * n1;
  if (u <= 0) return samples_.front();
  if (u >= n1) return samples_.back();
  std::size_t j = static_cast<std::size_t>(u);
  double t = u - static_cast<double>(j);
  return (1 - t) * samples_[j] + t * samples_[j + 1];
}

double Kernel::operator()(double s) const {
  if (s < support_min() || s > support_max()) return 0.0;
  switch (shape_) {
    case KernelShape::LinearDecreasing:
    case KernelShape::LinearIncreasing:
    case KernelShape::Uniform: {
      auto [c0, c1] = poly_coeffs(shape_, h_);
      return c0 + c1 * s;
    }
    case KernelShape::Tabulated:
      return sample_at(s);
    case KernelShape::SymmetricEven:
      return 1.0 / (2.0 * h_);
  }
  return 0.0;
}

double Kernel::sup_norm() const {
  switch (shape_) {
    case KernelShape::LinearDecreasing:
    case KernelShape::LinearIncreasing:
      return 2.0 / h_;
    case KernelShape::Uniform:
      return 1.0 / h_;
    case KernelShape::Tabulated:
      return *std::max_element(samples_.begin(), samples_.end());
    case KernelShape::SymmetricEven:
      return 1.0 / (2.0 * h_);
  }
  return 0.0;
}

double Kernel::integral(double a, double b) const {
  if (a > b) throw validation_error("kernel_integral: requires a <= b");
  a = std::max(a, support_min());
  b = std::min(b, support_max());
  if (a >= b) return 0.0;
  switch (shape_) {
    case KernelShape::LinearDecreasing:
    case KernelShape::LinearIncreasing:
    case KernelShape::Uniform: {
      auto [c0, c1] = poly_coeffs(shape_, h_);
      return c0 * (b - a) + 0.5 * c1 * (b * b - a * a);
    }
    case KernelShape::SymmetricEven:
      return (b - a) / (2.0 * h_);
    case KernelShape::Tabulated: {
      // Exact integral of the piecewise-linear interpolant: split [a,b] at
      // the sample abscissae and use trapezoid per panel.
      double dx = h_ / static_cast<double>(samples_.size() - 1);
      double total = 0;
      std::size_t j0 = static_cast<std::size_t>(std::floor(a / dx));
      for (std::size_t j = j0; j * dx < b && j + 1 < samples_.size(); ++j) {
        double lo = std::max(a, j * dx);
        double hi = std::min(b, (j + 1) * dx);
        if (hi <= lo) continue;
        total += 0.5 * (hi - lo) * (sample_at(lo) + sample_at(hi));
      }
      return total;
    }
  }
  return 0.0;
}

double Kernel::exp_integral(double lambda) const {
  switch (shape_) {
    case KernelShape::LinearDecreasing:
    case KernelShape::LinearIncreasing:
    case KernelShape::Uniform: {
      auto [c0, c1] = poly_coeffs(shape_, h_);
      return c0 * exp_moment0(lambda, h_) + c1 * exp_moment1(lambda, h_);
    }
    case KernelShape::SymmetricEven: {
      // Constant density 1/(2h) on [-h,h]: sinh(lambda*h)/(lambda*h).
      double u = lambda * h_;
      if (std::abs(u) < 1e-8) return 1.0 + u * u / 6.0;
      return std::sinh(u) / u;
    }
    case KernelShape::Tabulated: {
      std::size_t panels = std::max<std::size_t>(256, 4 * (samples_.size() - 1));
      double dx = h_ / static_cast<double>(panels);
      double total = 0;
      double prev = sample_at(0.0);  // e^{0} * w(0)
      for (std::size_t j = 1; j <= panels; ++j) {
        double s = static_cast<double>(j) * dx;
        double cur = std::exp(-lambda * s) * sample_at(s);
        total += 0.5 * dx * (prev + cur);
        prev = cur;
      }
      return total;
    }
  }
  return 0.0;
}

bool Kernel::nonincreasing() const {
  switch (shape_) {
    case KernelShape::LinearDecreasing:
    case KernelShape::Uniform:
    case KernelShape::SymmetricEven:
      return true;
    case KernelShape::LinearIncreasing:
      return false;
    case KernelShape::Tabulated:
      for (std::size_t j = 0; j + 1 < samples_.size(); ++j)
        if (samples_[j + 1] > samples_[j]) return false;
      return true;
  }
  return false;
}

VelocityLaw VelocityLaw::linear() {
  VelocityLaw law;
  law.v_ = [](double rho) { return 1.0 - rho; };
  law.dv_ = [](double) { return -1.0; };
  law.concave_ = true;
  law.name_ = "linear";
  return law;
}

VelocityLaw VelocityLaw::custom(std::function<double(double)> v,
                                std::function<double(double)> dv, bool concave,
                                std::string name) {
  if (!v || !dv)
    throw validation_error("custom velocity law requires v and v' callables");
  VelocityLaw law;
  law.v_ = std::move(v);
  law.dv_ = std::move(dv);
  law.concave_ = concave;
  law.name_ = std::move(name);
  if (std::abs(law.v_(0.0) - 1.0) > 1e-9 || std::abs(law.v_(1.0)) > 1e-9)
    throw validation_error("velocity law must satisfy v(0)=1, v(1)=0");
  for (int j = 0; j <= 20; ++j)
    if (law.dv_(j / 20.0) >= 0)
      throw validation_error("velocity law must satisfy v' < 0 on [0,1]");
  return law;
}

void ModelConfig::validate() const {
  if (ell <= 0) throw validation_error("ell must be positive");
  if (h() <= 0) throw validation_error("h must be positive");
  if (sigma < 0 || sigma >= velocity.v(0.0))
    throw validation_error("sigma must satisfy 0 <= sigma < v(0)");
}

double flux(double rho, const VelocityLaw& velocity) {
  if (rho < 0 || rho > 1)
    throw validation_error("flux: rho must lie in [0,1]");
  return rho * velocity.v(rho);
}

double flux_prime(double rho, const VelocityLaw& velocity) {
  return velocity.v(rho) + rho * velocity.dv(rho);
}

double stagnation_point(const VelocityLaw& velocity, double sigma) {
  auto g = [&](double r) { return flux_prime(r, velocity) - sigma; };
  if (!(g(0.0) > 0 && g(1.0) < 0))
    throw numerical_error("stagnation_point: f' - sigma does not change sign on [0,1]");
  return bisect(g, 0.0, 1.0).x;
}

double conjugate_endpoint(double rho, const VelocityLaw& velocity,
                          double sigma) {
  if (rho <= 0 || rho >= 1)
    throw validation_error("conjugate_endpoint: rho must lie in (0,1)");
  double rho_hat = stagnation_point(velocity, sigma);
  if (rho == rho_hat)
    throw validation_error("conjugate_endpoint: rho equals the stagnation point");
  auto level = [&](double r) { return flux(r, velocity) - sigma * r; };
  double target = level(rho);
  // Search on the opposite side of the stagnation point; the frame flux is
  // monotone there (concavity), so a sign check is a bracket check.
  double lo, hi;
  if (rho < rho_hat) {
    lo = rho_hat;
    hi = 1.0;
  } else {
    lo = 0.0;
    hi = rho_hat;
  }
  auto g = [&](double r) { return level(r) - target; };
  if ((g(lo) > 0) == (g(hi) > 0))
    throw numerical_error("conjugate_endpoint: level set has no second root in (0,1)");
  return bisect(g, lo, hi).x;
}

EndpointPair make_endpoints(double rho, const VelocityLaw& velocity,
                            double sigma) {
  double other = conjugate_endpoint(rho, velocity, sigma);
  EndpointPair ep;
  ep.rho_minus = std::min(rho, other);
  ep.rho_plus = std::max(rho, other);
  ep.fbar = flux(ep.rho_minus, velocity) - sigma * ep.rho_minus;
  return ep;
}

}  // namespace ntw
