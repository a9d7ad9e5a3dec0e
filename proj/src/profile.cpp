#include "ntw/profile.hpp"

#include <algorithm>
#include <cmath>

#include "ntw/errors.hpp"
#include "ntw/root_finding.hpp"

namespace ntw {

Profile::Profile(double x_left, double dx, std::vector<double> values,
                 ProfileMeta meta)
    : x_left_(x_left), dx_(dx), values_(std::move(values)), meta_(meta) {
  if (dx_ <= 0) throw validation_error("profile: dx must be positive");
  if (values_.size() < 2) throw validation_error("profile: needs >= 2 values");
  for (std::size_t i = 0; i + 1 < values_.size(); ++i)
    if (values_[i + 1] < values_[i] - 1e-12)
      throw numerical_error("profile: values not nondecreasing");
  const double lo = meta_.rho_minus - 1e-9, hi = meta_.rho_plus + 1e-9;
  for (double v : values_)
    if (v < lo || v > hi)
      throw numerical_error("profile: value outside (rho- , rho+) band");
}

double Profile::operator()(double x) const {
  if (x <= x_left_) {
    return (x < x_left_) ? meta_.rho_minus : values_.front();
  }
  double u = (x - x_left_) / dx_;
  double nmax = static_cast<double>(values_.size() - 1);
  if (u >= nmax) return (u > nmax) ? meta_.rho_plus : values_.back();
  std::size_t i = static_cast<std::size_t>(u);
  double t = u - static_cast<double>(i);
  return (1 - t) * values_[i] + t * values_[i + 1];
}

double Profile::inverse(double rho) const {
  if (rho < values_.front() || rho > values_.back())
    throw validation_error("profile inverse: rho outside sampled range");
  auto it = std::lower_bound(values_.begin(), values_.end(), rho);
  if (it == values_.begin()) return x_left_;
  std::size_t i = static_cast<std::size_t>(it - values_.begin());
  double v0 = values_[i - 1], v1 = values_[i];
  double t = (v1 > v0) ? (rho - v0) / (v1 - v0) : 0.0;
  return node(i - 1) + t * dx_;
}

double sup_distance(const Profile& p1, const Profile& p2, double c,
                    double edge_margin) {
  double lo = std::max(p1.x_left(), p2.x_left() - c) + edge_margin;
  double hi = std::min(p1.x_right(), p2.x_right() - c) - edge_margin;
  if (hi <= lo)
    throw validation_error("sup_distance: empty comparison window");
  double worst = 0.0;
  // Sample on p1's nodes within the window (plus the window ends).
  std::size_t i0 = static_cast<std::size_t>(
      std::max(0.0, std::ceil((lo - p1.x_left()) / p1.dx())));
  for (std::size_t i = i0; i < p1.size() && p1.node(i) <= hi; ++i) {
    double x = p1.node(i);
    worst = std::max(worst, std::abs(p1(x) - p2(x + c)));
  }
  worst = std::max(worst, std::abs(p1(lo) - p2(lo + c)));
  worst = std::max(worst, std::abs(p1(hi) - p2(hi + c)));
  return worst;
}

AlignResult shift_align(const Profile& p1, const Profile& p2,
                        double edge_margin) {
  double rho_hat = p1.meta().rho_hat;
  double c0 = p2.inverse(rho_hat) - p1.inverse(rho_hat);
  double w = 4.0 * std::max(p1.dx(), p2.dx());
  auto objective = [&](double c) {
    return sup_distance(p1, p2, c, edge_margin);
  };
  double c = golden_minimize(objective, c0 - w, c0 + w, 1e-12);
  double err = objective(c);
  // Keep the plain crossing alignment when polishing does not help.
  double err0 = objective(c0);
  if (err0 < err) {
    c = c0;
    err = err0;
  }
  return {c, err};
}

}  // namespace ntw
