#include "ntw/profile_q.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include "ntw/errors.hpp"
#include "ntw/rates.hpp"
#include "ntw/root_finding.hpp"

namespace ntw {

namespace {

// Trapezoid panels of the kernel window [0,h] with spacing dx (last panel
// clipped at h). The coefficient of the value at offset 0 is
// 0.5*(s1-s0)*w(0), which is what the Newton step differentiates.
struct WindowQuad {
  std::vector<double> s;  // panel boundaries, s.front() = 0, s.back() = h
  std::vector<double> w;  // kernel density at the boundaries
};

WindowQuad make_quad(const Kernel& kernel, double dx) {
  WindowQuad q;
  double h = kernel.h();
  for (double s = 0.0;; s += dx) {
    if (s >= h - 1e-15 * h) {
      q.s.push_back(h);
      break;
    }
    q.s.push_back(s);
  }
  q.w.reserve(q.s.size());
  for (double s : q.s) q.w.push_back(kernel(s));
  return q;
}

// Trapezoid sum over the window given a value accessor f(offset s >= 0).
template <class F>
double quad_sum(const WindowQuad& q, F&& f) {
  double total = 0.0;
  double prev = f(q.s[0]) * q.w[0];
  for (std::size_t j = 1; j < q.s.size(); ++j) {
    double cur = f(q.s[j]) * q.w[j];
    total += 0.5 * (q.s[j] - q.s[j - 1]) * (prev + cur);
    prev = cur;
  }
  return total;
}

double lipschitz_inv_v(const ModelConfig& config, double rho_lo,
                       double rho_hi) {
  // max |v'| / (v - sigma)^2 over [rho_lo, rho_hi], sampled.
  double worst = 0.0;
  for (int j = 0; j <= 200; ++j) {
    double r = rho_lo + (rho_hi - rho_lo) * j / 200.0;
    double denom = config.velocity.v(r) - config.sigma;
    if (denom <= 0) throw validation_error("frame velocity non-positive on range");
    worst = std::max(worst, std::abs(config.velocity.dv(r)) / (denom * denom));
  }
  return worst;
}

// State of one backward march. vals[i] is the value at x0 - i*dx; indices
// below 0 defer to the analytic seed.
struct March {
  double x0 = 0.0;
  double dx = 0.0;
  double fbar = 0.0;
  std::vector<double> vals;
  bool crossed = false;
  double crossing = 0.0;
};

struct MarchStop {
  std::optional<double> x_min;              // march at least down to here
  std::optional<double> depth_below_cross;  // and this far below the crossing
  std::optional<double> max_span;           // abort if no crossing by here
};

March march_backward(const ModelConfig& config,
                     const std::function<double(double)>& seed, double x0,
                     double dx, double rho_hat, const MarchStop& stop) {
  const Kernel& kernel = config.kernel;
  const VelocityLaw& vel = config.velocity;
  const double sigma = config.sigma;
  const bool variant2 = config.variant == Variant::VelocityAveraged;
  if (dx <= 0 || dx > kernel.h() / 16.0)
    throw validation_error("solve_ivp_backward: dx must satisfy 0 < dx <= h/16");

  WindowQuad quad = make_quad(kernel, dx);
  March m;
  m.x0 = x0;
  m.dx = dx;
  m.vals.push_back(seed(x0));
  if (!(m.vals[0] > 0 && m.vals[0] < 1))
    throw validation_error("initial data must take values in (0,1)");

  auto value_at = [&](long i) -> double {
    if (i >= 0) return m.vals[static_cast<std::size_t>(i)];
    return seed(x0 - static_cast<double>(i) * dx);
  };
  // Value at x_i + s for s >= 0, linear interpolation between indices.
  auto value_off = [&](long i, double s) -> double {
    double u = s / dx;
    double fl = std::floor(u);
    long j = static_cast<long>(fl);
    double t = u - fl;
    double a = value_at(i - j);
    if (t == 0.0) return a;
    double b = value_at(i - j - 1);
    return (1 - t) * a + t * b;
  };
  // Window average at node i with the offset-0 value replaced by q.
  auto average_with = [&](long i, double q) -> double {
    return quad_sum(quad, [&](double s) {
      double val = (s == 0.0) ? q : value_off(i, s);
      return variant2 ? vel.v(val) : val;
    });
  };
  auto frame_flux_at_node = [&](long i, double q) -> double {
    double avg = average_with(i, q);
    double speed = variant2 ? (avg - sigma) : (vel.v(avg) - sigma);
    return q * speed;
  };

  m.fbar = frame_flux_at_node(0, m.vals[0]);
  const double c0 = 0.5 * (quad.s[1] - quad.s[0]) * quad.w[0];

  const long max_steps = 20'000'000;
  for (long i = 1;; ++i) {
    double x_i = x0 - static_cast<double>(i) * dx;
    {
      bool more = false;
      if (stop.x_min && x_i + dx > *stop.x_min) more = true;
      if (stop.depth_below_cross) {
        if (!m.crossed || x_i + dx > m.crossing - *stop.depth_below_cross)
          more = true;
      }
      if (!more) break;
    }
    if (i > max_steps)
      throw numerical_error("backward march exceeded the step cap");
    if (stop.max_span && !m.crossed &&
        static_cast<double>(i) * dx > *stop.max_span)
      throw numerical_error(
          "backward march: no rho_hat crossing within the expected span");

    double prev = m.vals.back();
    // Fixed part of the window average (everything except the s=0 term).
    double fixed = quad_sum(quad, [&](double s) {
                     if (s == 0.0) return 0.0;
                     double val = value_off(i, s);
                     return variant2 ? vel.v(val) : val;
                   });
    auto g_and_slope = [&](double q) {
      if (!variant2) {
        double avg = fixed + c0 * q;
        double speed = vel.v(avg) - sigma;
        return std::pair<double, double>(q * speed - m.fbar,
                                         speed + q * vel.dv(avg) * c0);
      }
      double avg = fixed + c0 * vel.v(q);
      double speed = avg - sigma;
      return std::pair<double, double>(q * speed - m.fbar,
                                       speed + q * c0 * vel.dv(q));
    };

    double q = prev;
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      auto [g, gp] = g_and_slope(q);
      if (std::abs(g) < 1e-13) {
        ok = true;
        break;
      }
      if (gp <= 0) break;  // monotone-derivative condition violated locally
      double qn = q - g / gp;
      if (!(qn > 0 && qn < 1)) break;
      q = qn;
    }
    if (!ok) {
      // Bisection fallback on [0, prev]: g(0) = -fbar < 0, g(prev) >= 0.
      auto g_only = [&](double r) { return g_and_slope(r).first; };
      RootOptions opts;
      opts.abs_tol = 1e-15;
      auto root = bisect(g_only, 0.0, prev, opts);
      q = root.x;
      if (std::abs(g_only(q)) > 1e-10)
        throw numerical_error("backward march: Newton and bisection both failed");
    }
    if (q > prev) q = prev;  // guard monotonicity against rounding
    m.vals.push_back(q);

    if (!m.crossed && q <= rho_hat && prev >= rho_hat) {
      double denom = prev - q;
      double t = (denom > 0) ? (rho_hat - q) / denom : 0.0;
      m.crossing = x_i + t * dx;
      m.crossed = true;
    }
  }
  return m;
}

ProfileMeta base_meta(const ModelConfig& config, double rho_minus,
                      double rho_plus, double rho_hat, double fbar) {
  ProfileMeta meta;
  meta.rho_minus = rho_minus;
  meta.rho_plus = rho_plus;
  meta.rho_hat = rho_hat;
  meta.fbar = fbar;
  meta.sigma = config.sigma;
  meta.variant = config.variant;
  meta.ell = 0.0;
  meta.kappa = config.kernel.sup_norm();
  meta.L_v = lipschitz_inv_v(config, rho_minus, rho_plus);
  return meta;
}

}  // namespace

double nonlocal_average(const Profile& q, const Kernel& kernel, double x) {
  WindowQuad quad = make_quad(kernel, q.dx());
  return quad_sum(quad, [&](double s) { return q(x + s); });
}

double nonlocal_average_v(const Profile& q, const ModelConfig& config,
                          double x) {
  WindowQuad quad = make_quad(config.kernel, q.dx());
  return quad_sum(quad,
                  [&](double s) { return config.velocity.v(q(x + s)); });
}

double frame_flux(const Profile& q, const ModelConfig& config, double x) {
  if (config.variant == Variant::VelocityAveraged)
    return q(x) * (nonlocal_average_v(q, config, x) - config.sigma);
  double avg = nonlocal_average(q, config.kernel, x);
  return q(x) * (config.velocity.v(avg) - config.sigma);
}

double flux_residual_max(const Profile& q, const ModelConfig& config) {
  double worst = 0.0;
  double fbar = q.meta().fbar;
  for (std::size_t i = 0; i < q.size(); ++i) {
    double x = q.node(i);
    if (x + config.h() > q.x_right()) break;
    worst = std::max(worst, std::abs(frame_flux(q, config, x) - fbar));
  }
  return worst;
}

Profile solve_ivp_backward(const ModelConfig& config,
                           const std::function<double(double)>& seed,
                           double x0, double x_min, double dx) {
  config.validate();
  if (x_min >= x0)
    throw validation_error("solve_ivp_backward: x_min must be below x0");
  double rho_hat = stagnation_point(config.velocity, config.sigma);
  MarchStop stop;
  stop.x_min = x_min;
  March m = march_backward(config, seed, x0, dx, rho_hat, stop);

  std::vector<double> ascending(m.vals.rbegin(), m.vals.rend());
  double x_left = x0 - dx * static_cast<double>(m.vals.size() - 1);
  ProfileMeta meta = base_meta(config, ascending.front(), ascending.back(),
                               rho_hat, m.fbar);
  return Profile(x_left, dx, std::move(ascending), meta);
}

Profile solve_asymptotic(const ModelConfig& config, double rho_minus,
                         double rho_plus, double x_min, double x_max,
                         double dx, const AsymptoticOptions& opts) {
  config.validate();
  if (x_min >= x_max) throw validation_error("domain must satisfy x_min < x_max");
  double rho_hat = stagnation_point(config.velocity, config.sigma);
  if (!(rho_minus < rho_hat && rho_hat < rho_plus))
    throw validation_error("endpoints must straddle the stagnation point");
  double lvl_m = flux(rho_minus, config.velocity) - config.sigma * rho_minus;
  double lvl_p = flux(rho_plus, config.velocity) - config.sigma * rho_plus;
  if (std::abs(lvl_m - lvl_p) > 1e-9)
    throw validation_error("endpoints are not frame-flux conjugate");

  RateResult rate = continuous_rate(config, rho_plus, Side::PlusInfinity);
  if (!rate.has_root)
    throw numerical_error("solve_asymptotic: " + rate.diagnostic);
  const double lam = rate.lambda;
  double lam_minus = 0.0;
  {
    RateResult rm = continuous_rate(config, rho_minus, Side::MinusInfinity);
    if (rm.has_root) lam_minus = rm.lambda;
  }

  const double h = config.h();
  double shift_unit = std::round(h / dx) * dx;
  if (shift_unit <= 0) shift_unit = dx;
  const double depth = std::max(-x_min, 0.0) + 2 * dx;

  std::optional<Profile> prev;
  for (int n = 0; n < opts.max_outer; ++n) {
    double x0n = x_max + static_cast<double>(n) * shift_unit;
    double delta = std::max(
        opts.seed_amplitude * std::exp(-lam * static_cast<double>(n) * shift_unit),
        1e-10);
    auto seed = [=](double x) {
      return rho_plus - delta * std::exp(-lam * (x - x0n));
    };
    MarchStop stop;
    stop.depth_below_cross = depth;
    stop.max_span =
        (x_max - x_min) + std::log(1.0 / delta) / lam + 10.0 * h + depth;
    March m = march_backward(config, seed, x0n, dx, rho_hat, stop);
    if (!m.crossed)
      throw numerical_error("solve_asymptotic: march never crossed rho_hat");

    // Keep raw node values; relabel abscissae relative to the crossing.
    double xi = m.crossing;
    long iL = static_cast<long>(std::ceil((x0n - (xi + x_min)) / dx)) + 1;
    long iR = static_cast<long>(std::floor((x0n - (xi + x_max)) / dx)) - 1;
    iL = std::min<long>(iL, static_cast<long>(m.vals.size()) - 1);
    std::vector<double> ascending;
    ascending.reserve(static_cast<std::size_t>(iL - iR + 1));
    for (long i = iL; i >= iR; --i) {
      double v = (i >= 0) ? m.vals[static_cast<std::size_t>(i)]
                          : seed(x0n - static_cast<double>(i) * dx);
      ascending.push_back(v);
    }
    double x_left = (x0n - static_cast<double>(iL) * dx) - xi;
    ProfileMeta meta = base_meta(config, rho_minus, rho_plus, rho_hat, m.fbar);
    meta.lambda_plus = lam;
    meta.lambda_minus = lam_minus;
    Profile cur(x_left, dx, std::move(ascending), meta);

    if (prev) {
      // Successive iterates live on fractionally offset grids, so their
      // piecewise-linear representations differ by an interpolation floor of
      // max|second difference| / 8 even when the underlying shapes agree.
      // Compare translation-invariantly and admit that floor.
      double err = shift_align(cur, *prev, h).sup_error;
      double floor = 0.0;
      for (std::size_t i = 1; i + 1 < cur.size(); ++i)
        floor = std::max(floor, std::abs(cur.value(i + 1) - 2 * cur.value(i) +
                                         cur.value(i - 1)));
      floor /= 8.0;
      if (err <= std::max(opts.convergence_tol, floor)) {
        if (std::abs(cur(x_max) - rho_plus) > opts.endpoint_tol ||
            std::abs(cur(x_min) - rho_minus) > opts.endpoint_tol)
          throw numerical_error(
              "solve_asymptotic: tail limits deviate from the endpoints");
        return cur;
      }
    }
    prev = std::move(cur);
  }
  throw numerical_error("solve_asymptotic: no convergence in max_outer iterations");
}

double picard_residual(const Profile& q, const ModelConfig& config) {
  double worst = 0.0;
  const double fbar = q.meta().fbar;
  for (std::size_t i = 0; i < q.size(); ++i) {
    double x = q.node(i);
    if (x + config.h() > q.x_right()) break;
    double denom;
    if (config.variant == Variant::VelocityAveraged)
      denom = nonlocal_average_v(q, config, x) - config.sigma;
    else
      denom = config.velocity.v(nonlocal_average(q, config.kernel, x)) -
              config.sigma;
    if (denom <= 0)
      throw numerical_error("picard_residual: non-positive frame velocity");
    worst = std::max(worst, std::abs(fbar / denom - q.value(i)));
  }
  return worst;
}

}  // namespace ntw
