#pragma once

#include <vector>

#include "ntw/model.hpp"

namespace ntw {

// Metadata carried by a converged profile.
struct ProfileMeta {
  double rho_minus = 0.0;
  double rho_plus = 0.0;
  double rho_hat = 0.0;  // frame stagnation point (anchor value)
  double fbar = 0.0;     // frame flux constant enforced by the solver
  double sigma = 0.0;
  Variant variant = Variant::DensityAveraged;
  double ell = 0.0;    // > 0 for discrete profiles, 0 for the continuum Q
  double kappa = 0.0;  // sup-norm of the kernel
  double L_v = 0.0;    // Lipschitz constant of 1/(v - sigma) on [rho-, rho+]
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  double t_p = 0.0;  // period ell / fbar (discrete profiles)
};

// Monotone sampled profile on a uniform grid. Values are stored at
// x_left + i*dx; the abscissae are shift-normalized so that evaluation at 0
// returns rho_hat (the grid origin is generally not a round number — values
// are never resampled, only relabeled).
class Profile {
 public:
  Profile(double x_left, double dx, std::vector<double> values,
          ProfileMeta meta);

  double x_left() const { return x_left_; }
  double x_right() const {
    return x_left_ + dx_ * static_cast<double>(values_.size() - 1);
  }
  double dx() const { return dx_; }
  std::size_t size() const { return values_.size(); }
  double node(std::size_t i) const {
    return x_left_ + dx_ * static_cast<double>(i);
  }
  double value(std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  const ProfileMeta& meta() const { return meta_; }

  // Linear interpolation; clamps to rho_minus / rho_plus beyond the grid.
  double operator()(double x) const;

  // Monotone inverse by binary search + linear interpolation. rho must lie
  // within the sampled value range.
  double inverse(double rho) const;

  double min_value() const { return values_.front(); }
  double max_value() const { return values_.back(); }

 private:
  double x_left_;
  double dx_;
  std::vector<double> values_;
  ProfileMeta meta_;
};

struct AlignResult {
  double c;          // shift applied to the second profile's argument
  double sup_error;  // sup_x |p1(x) - p2(x + c)| over the compared window
};

// Aligns p2 to p1 by matching the rho_hat crossings, then polishes the shift
// with golden-section search on the sup-distance. The comparison window is
// the overlap of both domains (after shifting) minus edge_margin on each end.
AlignResult shift_align(const Profile& p1, const Profile& p2,
                        double edge_margin = 0.0);

// sup_x |p1(x) - p2(x + c)| sampled on p1's grid nodes inside the overlap
// window (minus edge_margin per side).
double sup_distance(const Profile& p1, const Profile& p2, double c,
                    double edge_margin = 0.0);

}  // namespace ntw
