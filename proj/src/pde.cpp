#include "ntw/pde.hpp"

#include <algorithm>
#include <cmath>

#include "ntw/errors.hpp"
#include "ntw/root_finding.hpp"

namespace ntw {

namespace {

double field_value(const FieldState& s, long j) {
  if (j < 0) return s.rho_minus;
  if (j >= static_cast<long>(s.rho.size())) return s.rho_plus;
  return s.rho[static_cast<std::size_t>(j)];
}

// Value at node j + offset u cells (u >= 0, fractional allowed).
double field_value_off(const FieldState& s, long j, double u) {
  double fl = std::floor(u);
  long k = j + static_cast<long>(fl);
  double t = u - fl;
  double a = field_value(s, k);
  if (t == 0.0) return a;
  return (1 - t) * a + t * field_value(s, k + 1);
}

// Transport speed of cell j (ghost indices allowed): trapezoid quadrature of
// the kernel window over grid cells, last panel clipped at h.
double cell_speed(const FieldState& s, const ModelConfig& cfg, long j) {
  const double h = cfg.h();
  const double dx = s.dx;
  const bool variant2 = cfg.variant == Variant::VelocityAveraged;
  auto val = [&](double off) {
    double r = field_value_off(s, j, off / dx);
    return variant2 ? cfg.velocity.v(r) : r;
  };
  double acc = 0.0;
  double prev_s = 0.0;
  double prev_f = val(0.0) * cfg.kernel(0.0);
  for (double off = dx;; off += dx) {
    double here = std::min(off, h);
    double f = val(here) * cfg.kernel(here);
    acc += 0.5 * (here - prev_s) * (prev_f + f);
    if (here >= h) break;
    prev_s = here;
    prev_f = f;
  }
  return variant2 ? acc : cfg.velocity.v(acc);
}

}  // namespace

std::vector<double> nonlocal_velocity_field(const FieldState& state,
                                            const ModelConfig& config) {
  std::vector<double> v(state.rho.size());
  for (std::size_t j = 0; j < state.rho.size(); ++j)
    v[j] = cell_speed(state, config, static_cast<long>(j));
  return v;
}

FieldState pde_step(const FieldState& state, double dt,
                    const ModelConfig& config, Scheme scheme,
                    StepFluxes* fluxes) {
  if (!(dt > 0)) throw validation_error("pde_step: dt must be positive");
  const long n = static_cast<long>(state.rho.size());
  if (n < 2) throw validation_error("pde_step: grid too small");
  const double dx = state.dx;

  // Speeds for cells -1..n (ghosts included for the boundary fluxes).
  std::vector<double> V(static_cast<std::size_t>(n) + 2);
  double vmax = 0.0;
  for (long j = -1; j <= n; ++j) {
    double s = cell_speed(state, config, j);
    V[static_cast<std::size_t>(j + 1)] = s;
    vmax = std::max(vmax, std::abs(s));
  }
  if (dt > 0.5 * dx / std::max(1.0, vmax) + 1e-15)
    throw validation_error("pde_step: CFL condition violated");

  auto rho_at = [&](long j) { return field_value(state, j); };
  auto v_at = [&](long j) { return V[static_cast<std::size_t>(j + 1)]; };
  // F[k] is the flux through the interface between cells k-1 and k.
  std::vector<double> F(static_cast<std::size_t>(n) + 1);
  for (long k = 0; k <= n; ++k) {
    if (scheme == Scheme::Upwind) {
      F[static_cast<std::size_t>(k)] = rho_at(k - 1) * v_at(k - 1);
    } else {
      F[static_cast<std::size_t>(k)] =
          0.5 * (rho_at(k - 1) * v_at(k - 1) + rho_at(k) * v_at(k)) -
          0.5 * (dx / dt) * (rho_at(k) - rho_at(k - 1));
    }
  }

  FieldState next = state;
  next.t = state.t + dt;
  for (long j = 0; j < n; ++j) {
    double upd = state.rho[static_cast<std::size_t>(j)] -
                 dt / dx *
                     (F[static_cast<std::size_t>(j + 1)] -
                      F[static_cast<std::size_t>(j)]);
    if (!std::isfinite(upd))
      throw numerical_error("pde_step: non-finite value produced");
    next.rho[static_cast<std::size_t>(j)] = upd;
  }
  if (fluxes) {
    fluxes->left = F.front();
    fluxes->right = F.back();
  }
  return next;
}

FieldState oscillatory_field_ic(double x_lo, double x_hi, double dx) {
  if (!(x_lo <= -1.0 && x_hi >= 1.0))
    throw validation_error("oscillatory_field_ic: grid must span [-1, 1]");
  FieldState s;
  s.t = 0.0;
  s.x0 = x_lo;
  s.dx = dx;
  s.rho_minus = 0.2;
  s.rho_plus = 0.8;
  long n = static_cast<long>(std::floor((x_hi - x_lo) / dx + 1e-9)) + 1;
  s.rho.resize(static_cast<std::size_t>(n));
  auto branch = [](double x) {
    if (x <= -0.3) return 0.2;
    if (x >= 0.3) return 0.8;
    return 0.5 - 0.3 * std::sin(5.0 * M_PI * x);
  };
  for (long j = 0; j < n; ++j)
    s.rho[static_cast<std::size_t>(j)] = branch(x_lo + j * dx);
  return s;
}

double total_variation(const FieldState& state) {
  double tv = 0.0;
  for (std::size_t j = 0; j + 1 < state.rho.size(); ++j)
    tv += std::abs(state.rho[j + 1] - state.rho[j]);
  return tv;
}

double field_mass(const FieldState& state) {
  double m = 0.0;
  for (double r : state.rho) m += r;
  return m * state.dx;
}

double field_profile_distance(const FieldState& state, const Profile& reference,
                              double edge_margin) {
  const double x_end =
      state.x0 + state.dx * static_cast<double>(state.rho.size() - 1);
  auto dist = [&](double c) {
    double worst = 0.0;
    for (std::size_t j = 0; j < state.rho.size(); ++j) {
      double x = state.x0 + state.dx * static_cast<double>(j);
      if (x < state.x0 + edge_margin || x > x_end - edge_margin) continue;
      worst = std::max(worst, std::abs(state.rho[j] - reference(x + c)));
    }
    return worst;
  };
  // Coarse scan over shifts that put the reference anchor inside the domain,
  // then golden-section polish around the best candidate.
  double c_lo = -x_end, c_hi = -state.x0;
  double best_c = c_lo, best = dist(c_lo);
  double step = 4.0 * state.dx;
  for (double c = c_lo; c <= c_hi; c += step) {
    double d = dist(c);
    if (d < best) {
      best = d;
      best_c = c;
    }
  }
  double c = golden_minimize(dist, best_c - step, best_c + step, 1e-10);
  return std::min(best, dist(c));
}

InstabilityReport instability_metric(const std::vector<FieldState>& series,
                                     const Profile* reference,
                                     double edge_margin) {
  if (series.size() < 2)
    throw validation_error("instability_metric: need at least 2 snapshots");
  InstabilityReport rep;
  for (const FieldState& s : series) {
    rep.tv.push_back(total_variation(s));
    if (reference)
      rep.sup_dist.push_back(
          field_profile_distance(s, *reference, edge_margin));
  }
  rep.classification =
      (rep.tv.back() > rep.tv.front()) ? "diverging" : "converging";
  return rep;
}

}  // namespace ntw
