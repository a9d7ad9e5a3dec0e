#include "ntw/ftls.hpp"

#include <cmath>
#include <limits>

#include "ntw/errors.hpp"

namespace ntw {

namespace {

// Position of (possibly virtual) car j given the platoon and the right
// boundary density.
double position(const std::vector<double>& z, double rho_plus, double ell,
                std::size_t j) {
  std::size_t n = z.size();
  if (j < n) return z[j];
  return z[n - 1] + static_cast<double>(j - (n - 1)) * ell / rho_plus;
}

double speed_at(const std::vector<double>& z, double rho_plus,
                const ModelConfig& cfg, std::size_t i) {
  const double h = cfg.h();
  const double ell = cfg.ell;
  const bool variant2 = cfg.variant == Variant::VelocityAveraged;
  const double zi = z[i];
  double acc = 0.0;
  double cur = zi;
  for (std::size_t k = 0;; ++k) {
    double off = cur - zi;
    if (off >= h) break;
    double nxt = position(z, rho_plus, ell, i + k + 1);
    double gap = nxt - cur;
    if (!(gap > 0))
      throw numerical_error("car_speed: non-positive gap");
    double w = cfg.kernel.integral(off, nxt - zi);
    double rho = ell / gap;
    acc += w * (variant2 ? cfg.velocity.v(rho) : rho);
    cur = nxt;
  }
  return variant2 ? acc : cfg.velocity.v(acc);
}

std::vector<double> all_speeds(const std::vector<double>& z, double rho_plus,
                               const ModelConfig& cfg) {
  std::vector<double> s(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    s[i] = speed_at(z, rho_plus, cfg, i);
  return s;
}

bool spacing_ok(const std::vector<double>& z, double ell) {
  for (std::size_t i = 0; i + 1 < z.size(); ++i)
    if (z[i + 1] - z[i] < ell * (1.0 - 1e-12)) return false;
  return true;
}

std::vector<double> rk4_positions(const std::vector<double>& z, double dt,
                                  double rho_plus, const ModelConfig& cfg) {
  std::size_t n = z.size();
  std::vector<double> k1 = all_speeds(z, rho_plus, cfg);
  std::vector<double> tmp(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = z[i] + 0.5 * dt * k1[i];
  std::vector<double> k2 = all_speeds(tmp, rho_plus, cfg);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = z[i] + 0.5 * dt * k2[i];
  std::vector<double> k3 = all_speeds(tmp, rho_plus, cfg);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = z[i] + dt * k3[i];
  std::vector<double> k4 = all_speeds(tmp, rho_plus, cfg);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = z[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

std::vector<double> advance(const std::vector<double>& z, double dt,
                            double rho_plus, const ModelConfig& cfg,
                            int depth) {
  std::vector<double> out = rk4_positions(z, dt, rho_plus, cfg);
  if (spacing_ok(out, cfg.ell)) return out;
  if (depth <= 0)
    throw numerical_error(
        "ftls_step: persistent minimum-spacing violation after 10 halvings");
  std::vector<double> half = advance(z, 0.5 * dt, rho_plus, cfg, depth - 1);
  return advance(half, 0.5 * dt, rho_plus, cfg, depth - 1);
}

}  // namespace

double car_density(const CarState& state, const ModelConfig& config,
                   std::size_t i) {
  if (i >= state.z.size())
    throw validation_error("car_density: index out of range");
  if (i + 1 == state.z.size()) return state.boundary_rho_plus;
  return config.ell / (state.z[i + 1] - state.z[i]);
}

double car_speed(const CarState& state, std::size_t i,
                 const ModelConfig& config) {
  if (i >= state.z.size())
    throw validation_error("car_speed: index out of range");
  return speed_at(state.z, state.boundary_rho_plus, config, i);
}

CarState ftls_step(const CarState& state, double dt, const ModelConfig& config) {
  if (!(dt > 0)) throw validation_error("ftls_step: dt must be positive");
  if (dt > 0.25 * config.ell / config.velocity.v(0.0) + 1e-15)
    throw validation_error("ftls_step: dt exceeds the spacing-safety bound");
  CarState next = state;
  next.z = advance(state.z, dt, state.boundary_rho_plus, config, 10);
  next.t = state.t + dt;
  return next;
}

double oscillatory_density(double z) {
  if (z <= -0.3) return 0.2;
  if (z >= 0.3) return 0.8;
  return 0.5 - 0.3 * std::sin(5.0 * M_PI * z);
}

CarState oscillatory_ic(const ModelConfig& config, double z_lo, double z_hi) {
  if (z_lo >= z_hi) throw validation_error("oscillatory_ic: empty span");
  CarState state;
  state.t = 0.0;
  state.boundary_rho_minus = 0.2;
  state.boundary_rho_plus = 0.8;
  double z = z_lo;
  while (z < z_hi) {
    state.z.push_back(z);
    z += config.ell / oscillatory_density(z);
  }
  state.z.push_back(z);
  return state;
}

PhiDiagnostic phi_diagnostic(const CarState& state, const Profile& reference) {
  PhiDiagnostic d;
  std::size_t n = state.z.size();
  if (n < 2) throw validation_error("phi_diagnostic: need at least 2 cars");
  d.phi.assign(n - 1, std::numeric_limits<double>::quiet_NaN());
  d.c.assign(n - 1, std::numeric_limits<double>::quiet_NaN());
  d.valid.assign(n - 1, false);
  const double ell = reference.meta().ell;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double rho = ell / (state.z[i + 1] - state.z[i]);
    if (rho <= reference.min_value() || rho >= reference.max_value()) {
      ++d.flagged;
      continue;
    }
    double c = reference.inverse(rho) - state.z[i];
    d.phi[i] = reference(c);
    d.c[i] = c;
    d.valid[i] = true;
    lo = std::min(lo, d.phi[i]);
    hi = std::max(hi, d.phi[i]);
  }
  d.range = (hi >= lo) ? hi - lo : 0.0;
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (d.valid[i]) {
      sum += d.c[i];
      ++count;
    }
  d.mean_shift = count ? sum / count : 0.0;
  return d;
}

}  // namespace ntw
