#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ntw {

enum class KernelShape {
  LinearDecreasing,  // w(x) = 2/h - 2x/h^2 on [0,h]
  LinearIncreasing,  // w(x) = 2x/h^2 on [0,h]
  Uniform,           // w(x) = 1/h on [0,h]
  Tabulated,         // piecewise-linear from uniform samples on [0,h]
  SymmetricEven,     // even kernel on [-h,h]; half-mass 0.5 on [0,h]
};

// Averaging kernel with horizon h. One-sided kernels live on [0,h] with unit
// mass; symmetric kernels live on [-h,h] with w(-s)=w(s) and half-mass 0.5.
class Kernel {
 public:
  static Kernel linear_decreasing(double h);
  static Kernel linear_increasing(double h);
  static Kernel uniform(double h);
  // Uniform abscissae on [0,h]; renormalized so the trapezoid mass is exactly
  // 1. Rejects a raw normalization defect above 1e-3.
  static Kernel tabulated(double h, std::vector<double> samples);
  // Symmetric kernel that is constant 1/(2h) on [-h,h].
  static Kernel symmetric_uniform(double h);

  KernelShape shape() const { return shape_; }
  double h() const { return h_; }
  bool symmetric() const { return shape_ == KernelShape::SymmetricEven; }
  double support_min() const { return symmetric() ? -h_ : 0.0; }
  double support_max() const { return h_; }

  // Pointwise w(s); 0 outside support.
  double operator()(double s) const;

  // sup-norm of w (the kappa constant).
  double sup_norm() const;

  // Integral of w over [a,b], clipped to the support. Closed form for
  // polynomial shapes; exact piecewise-linear integral for Tabulated.
  double integral(double a, double b) const;

  // Laplace-type transform over the full support: int e^{-lambda s} w(s) ds.
  // Closed form for polynomial shapes, >=256-panel trapezoid for Tabulated.
  double exp_integral(double lambda) const;

  // Whether the kernel density is nonincreasing (w' <= 0) on its support;
  // used by stability diagnostics.
  bool nonincreasing() const;

 private:
  Kernel(KernelShape shape, double h) : shape_(shape), h_(h) {}
  double sample_at(double s) const;  // tabulated interpolant on [0,h]

  KernelShape shape_;
  double h_;
  std::vector<double> samples_;  // Tabulated only, after renormalization
};

// Velocity law v(rho) on [0,1] with v(0)=1, v(1)=0, v'<0.
class VelocityLaw {
 public:
  static VelocityLaw linear();  // v = 1 - rho
  // v' must be supplied analytically. The concave flag records v'' <= 0.
  static VelocityLaw custom(std::function<double(double)> v,
                            std::function<double(double)> dv, bool concave,
                            std::string name = "custom");

  double v(double rho) const { return v_(rho); }
  double dv(double rho) const { return dv_(rho); }
  bool concave() const { return concave_; }
  const std::string& name() const { return name_; }

 private:
  VelocityLaw() = default;
  std::function<double(double)> v_;
  std::function<double(double)> dv_;
  bool concave_ = false;
  std::string name_;
};

enum class Variant {
  DensityAveraged,   // speed = v(average of rho)
  VelocityAveraged,  // speed = average of v(rho)
};

struct ModelConfig {
  Kernel kernel;
  VelocityLaw velocity;
  double ell = 0.01;  // car length
  Variant variant = Variant::DensityAveraged;
  double sigma = 0.0;  // traveling-frame speed

  double h() const { return kernel.h(); }
  // Number of extra leaders in the discrete window: smallest m with
  // (m+1) * ell >= h.
  int m() const { return static_cast<int>(std::ceil(h() / ell)) - 1; }

  void validate() const;  // throws validation_error on bad fields
};

struct EndpointPair {
  double rho_minus;
  double rho_plus;
  double fbar;  // common frame flux value f(rho) - sigma*rho
};

// f(rho) = rho * v(rho). Throws validation_error outside [0,1].
double flux(double rho, const VelocityLaw& velocity);

// d/drho [rho*v(rho)] = v + rho*v'.
double flux_prime(double rho, const VelocityLaw& velocity);

// Unique rho with f'(rho) = sigma, by bisection on [0,1].
double stagnation_point(const VelocityLaw& velocity, double sigma = 0.0);

// The other root of f(r) - sigma*r = f(rho) - sigma*rho on the opposite side
// of the stagnation point.
double conjugate_endpoint(double rho, const VelocityLaw& velocity,
                          double sigma = 0.0);

// Builds the endpoint pair (rho, conjugate) ordered as (rho_minus, rho_plus).
EndpointPair make_endpoints(double rho, const VelocityLaw& velocity,
                            double sigma = 0.0);

}  // namespace ntw
