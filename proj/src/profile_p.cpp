#include "ntw/profile_p.hpp"

#include <cmath>
#include <optional>

#include "ntw/errors.hpp"
#include "ntw/rates.hpp"
#include "ntw/root_finding.hpp"

namespace ntw {

namespace {

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr double kGL8X[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGL8W[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

// Chain average along the leader map with an explicit value at the start.
// P is any evaluator x -> value; px = P(x).
template <class F>
double chain_average_impl(F&& P, const ModelConfig& cfg, double x, double px) {
  const double h = cfg.h();
  const double ell = cfg.ell;
  const bool variant2 = cfg.variant == Variant::VelocityAveraged;
  const int cap = cfg.m() + 4;
  double acc = 0.0;
  double z = x, pz = px;
  for (int k = 0; k <= cap; ++k) {
    double off = z - x;
    if (off >= h) break;
    if (!(pz > 0 && pz <= 1))
      throw numerical_error("discrete average: profile value outside (0,1]");
    double znext = z + ell / pz;
    double w = cfg.kernel.integral(off, znext - x);
    acc += w * (variant2 ? cfg.velocity.v(pz) : pz);
    z = znext;
    pz = P(z);
  }
  return acc;
}

// Right-hand side of the profile delay equation at (x, u), u = P(x).
template <class F>
double dde_rhs(F&& P, const ModelConfig& cfg, double x, double u) {
  double A0 = chain_average_impl(P, cfg, x, u);
  double L = x + cfg.ell / u;
  double AL = chain_average_impl(P, cfg, L, P(L));
  double s0, sL;
  if (cfg.variant == Variant::VelocityAveraged) {
    s0 = A0;
    sL = AL;
  } else {
    s0 = cfg.velocity.v(A0);
    sL = cfg.velocity.v(AL);
  }
  double denom = s0 - cfg.sigma;
  if (denom <= 0)
    throw numerical_error("profile delay equation: non-positive frame velocity");
  return -(u * u) / (cfg.ell * denom) * (sL - s0);
}

struct PMarch {
  double x0 = 0.0;
  double dx = 0.0;
  double fbar = 0.0;
  std::vector<double> vals;  // vals[i] at x0 - i*dx
  bool crossed = false;
  double crossing = 0.0;
};

struct PStop {
  std::optional<double> x_min;
  std::optional<double> depth_below_cross;
  std::optional<double> max_span;  // abort if no crossing by here
};

PMarch p_march(const ModelConfig& cfg,
               const std::function<double(double)>& seed, double x0, double dx,
               double rho_hat, const PStop& stop) {
  PMarch m;
  m.x0 = x0;
  m.dx = dx;
  m.vals.push_back(seed(x0));
  if (!(m.vals[0] > 0 && m.vals[0] < 1))
    throw validation_error("initial data must take values in (0,1)");

  // Delay lookups: analytic seed right of x0, linear interpolation on the
  // already-computed grid below (the delay exceeds ell >= 8*dx, so lookups
  // never reach the node currently being computed).
  auto lookup = [&](double z) -> double {
    if (z >= x0) return seed(z);
    double u = (x0 - z) / dx;
    double fl = std::floor(u);
    std::size_t i = static_cast<std::size_t>(fl);
    if (i + 1 >= m.vals.size()) {
      if (i + 1 == m.vals.size()) return m.vals.back();
      throw numerical_error("delay lookup below the computed range");
    }
    double t = u - fl;
    return (1 - t) * m.vals[i] + t * m.vals[i + 1];
  };
  auto rhs = [&](double x, double u) { return dde_rhs(lookup, cfg, x, u); };

  {
    double u0 = m.vals[0];
    double A0 = chain_average_impl(lookup, cfg, x0, u0);
    double s0 = (cfg.variant == Variant::VelocityAveraged)
                    ? A0
                    : cfg.velocity.v(A0);
    m.fbar = u0 * (s0 - cfg.sigma);
  }

  const long max_steps = 40'000'000;
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
      throw numerical_error("backward delay march exceeded the step cap");
    if (stop.max_span && !m.crossed &&
        static_cast<double>(i) * dx > *stop.max_span)
      throw numerical_error(
          "backward delay march: no rho_hat crossing within the expected span");

    double xp = x_i + dx;
    double u = m.vals.back();
    double f1 = rhs(xp, u);
    double f2 = rhs(xp - 0.5 * dx, u - 0.5 * dx * f1);
    double f3 = rhs(xp - 0.5 * dx, u - 0.5 * dx * f2);
    double f4 = rhs(x_i, u - dx * f3);
    double un = u - dx / 6.0 * (f1 + 2 * f2 + 2 * f3 + f4);
    if (!(un > 0 && un < 1))
      throw numerical_error("delay march: positivity violation (inadmissible data)");
    if (un > u) un = u;  // guard monotonicity against rounding
    m.vals.push_back(un);

    if (!m.crossed && un <= rho_hat && u >= rho_hat) {
      double denom = u - un;
      double t = (denom > 0) ? (rho_hat - un) / denom : 0.0;
      m.crossing = x_i + t * dx;
      m.crossed = true;
    }
  }
  return m;
}

double snap_dx(double ell, double dx_req) {
  if (dx_req <= 0) throw validation_error("dx must be positive");
  int n = static_cast<int>(std::ceil(ell / dx_req - 1e-12));
  n = std::max(n, 8);
  return ell / static_cast<double>(n);
}

ProfileMeta p_meta(const ModelConfig& cfg, double rho_minus, double rho_plus,
                   double rho_hat, double fbar) {
  ProfileMeta meta;
  meta.rho_minus = rho_minus;
  meta.rho_plus = rho_plus;
  meta.rho_hat = rho_hat;
  meta.fbar = fbar;
  meta.sigma = cfg.sigma;
  meta.variant = cfg.variant;
  meta.ell = cfg.ell;
  meta.kappa = cfg.kernel.sup_norm();
  meta.t_p = cfg.ell / fbar;
  // Lipschitz constant of 1/(v - sigma) on the endpoint range, sampled.
  double worst = 0.0;
  for (int j = 0; j <= 200; ++j) {
    double r = rho_minus + (rho_plus - rho_minus) * j / 200.0;
    double denom = cfg.velocity.v(r) - cfg.sigma;
    if (denom <= 0)
      throw validation_error("frame velocity non-positive on endpoint range");
    worst = std::max(worst, std::abs(cfg.velocity.dv(r)) / (denom * denom));
  }
  meta.L_v = worst;
  return meta;
}

}  // namespace

double leader_op(const Profile& p, double x) {
  double px = p(x);
  if (!(px > 0)) throw numerical_error("leader_op: P(x) must be positive");
  return x + p.meta().ell / px;
}

double discrete_average(const Profile& p, const ModelConfig& config,
                        double x) {
  return chain_average_impl([&](double z) { return p(z); }, config, x, p(x));
}

Profile solve_p_ivp(const ModelConfig& config,
                    const std::function<double(double)>& seed, double x0,
                    double x_min, double dx) {
  config.validate();
  if (x_min >= x0) throw validation_error("solve_p_ivp: x_min must be below x0");
  double step = snap_dx(config.ell, dx);
  double rho_hat = stagnation_point(config.velocity, config.sigma);
  PStop stop;
  stop.x_min = x_min;
  PMarch m = p_march(config, seed, x0, step, rho_hat, stop);

  std::vector<double> ascending(m.vals.rbegin(), m.vals.rend());
  double x_left = x0 - step * static_cast<double>(m.vals.size() - 1);
  ProfileMeta meta = p_meta(config, ascending.front(), ascending.back(),
                            rho_hat, m.fbar);
  return Profile(x_left, step, std::move(ascending), meta);
}

Profile solve_p_asymptotic(const ModelConfig& config, double rho_minus,
                           double rho_plus, double x_min, double x_max,
                           double dx, const PAsymptoticOptions& opts) {
  config.validate();
  if (x_min >= x_max) throw validation_error("domain must satisfy x_min < x_max");
  double step = snap_dx(config.ell, dx);
  double rho_hat = stagnation_point(config.velocity, config.sigma);
  if (!(rho_minus < rho_hat && rho_hat < rho_plus))
    throw validation_error("endpoints must straddle the stagnation point");
  double lvl_m = flux(rho_minus, config.velocity) - config.sigma * rho_minus;
  double lvl_p = flux(rho_plus, config.velocity) - config.sigma * rho_plus;
  if (std::abs(lvl_m - lvl_p) > 1e-9)
    throw validation_error("endpoints are not frame-flux conjugate");

  RateResult rate = discrete_rate(config, rho_plus, Side::PlusInfinity);
  if (!rate.has_root)
    throw numerical_error("solve_p_asymptotic: " + rate.diagnostic);
  const double lam = rate.lambda;
  double lam_minus = 0.0;
  {
    RateResult rm = discrete_rate(config, rho_minus, Side::MinusInfinity);
    if (rm.has_root) lam_minus = rm.lambda;
  }

  double shift_unit = std::round(config.h() / step) * step;
  if (shift_unit <= 0) shift_unit = step;
  const double depth = std::max(-x_min, 0.0) + 2 * step;

  std::optional<Profile> prev;
  for (int n = 0; n < opts.max_outer; ++n) {
    double x0n = x_max + static_cast<double>(n) * shift_unit;
    double delta = std::max(
        opts.seed_amplitude *
            std::exp(-lam * static_cast<double>(n) * shift_unit),
        1e-10);
    auto seed = [=](double x) {
      return rho_plus - delta * std::exp(-lam * (x - x0n));
    };
    PStop stop;
    stop.depth_below_cross = depth;
    stop.max_span = (x_max - x_min) + std::log(1.0 / delta) / lam +
                    10.0 * config.h() + depth;
    PMarch m = p_march(config, seed, x0n, step, rho_hat, stop);
    if (!m.crossed)
      throw numerical_error("solve_p_asymptotic: march never crossed rho_hat");

    double xi = m.crossing;
    long iL = static_cast<long>(std::ceil((x0n - (xi + x_min)) / step)) + 1;
    long iR = static_cast<long>(std::floor((x0n - (xi + x_max)) / step)) - 1;
    iL = std::min<long>(iL, static_cast<long>(m.vals.size()) - 1);
    std::vector<double> ascending;
    ascending.reserve(static_cast<std::size_t>(iL - iR + 1));
    for (long i = iL; i >= iR; --i) {
      double v = (i >= 0) ? m.vals[static_cast<std::size_t>(i)]
                          : seed(x0n - static_cast<double>(i) * step);
      ascending.push_back(v);
    }
    double x_left = (x0n - static_cast<double>(iL) * step) - xi;
    ProfileMeta meta = p_meta(config, rho_minus, rho_plus, rho_hat, m.fbar);
    meta.lambda_plus = lam;
    meta.lambda_minus = lam_minus;
    Profile cur(x_left, step, std::move(ascending), meta);

    if (prev) {
      // As in the continuum solver: successive iterates live on fractionally
      // offset grids, so compare translation-invariantly and admit the
      // piecewise-linear representation floor max|second difference| / 8.
      double err = shift_align(cur, *prev, config.h()).sup_error;
      double floor = 0.0;
      for (std::size_t i = 1; i + 1 < cur.size(); ++i)
        floor = std::max(floor, std::abs(cur.value(i + 1) - 2 * cur.value(i) +
                                         cur.value(i - 1)));
      floor /= 8.0;
      if (err <= std::max(opts.convergence_tol, floor)) {
        if (std::abs(cur(x_max) - rho_plus) > opts.endpoint_tol ||
            std::abs(cur(x_min) - rho_minus) > opts.endpoint_tol)
          throw numerical_error(
              "solve_p_asymptotic: tail limits deviate from the endpoints");
        return cur;
      }
    }
    prev = std::move(cur);
  }
  throw numerical_error(
      "solve_p_asymptotic: no convergence in max_outer iterations");
}

double periodicity_residual(const Profile& p, const ModelConfig& config,
                            double x) {
  const double ell = p.meta().ell;
  const double sigma = config.sigma;
  double L = leader_op(p, x);
  // Caller contract: [x, x + ell/P(x) + h] should lie inside the domain;
  // clamped evaluation covers mild overhang.
  auto integrand = [&](double z) {
    double avg = discrete_average(p, config, z);
    double s = (config.variant == Variant::VelocityAveraged)
                   ? avg
                   : config.velocity.v(avg);
    double denom = s - sigma;
    if (denom <= 0)
      throw numerical_error("periodicity integrand: non-positive frame velocity");
    return 1.0 / denom;
  };
  // Split [x, L] at profile grid nodes, Gauss-Legendre 8 per piece.
  double total = 0.0;
  double a = x;
  double dx = p.dx();
  // First node strictly above x.
  double k0 = std::ceil((x - p.x_left()) / dx + 1e-12);
  for (double k = k0;; k += 1.0) {
    double b = std::min(p.x_left() + k * dx, L);
    if (b > a + 1e-15) {
      double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (int j = 0; j < 8; ++j)
        total += half * kGL8W[j] * integrand(mid + half * kGL8X[j]);
      a = b;
    }
    if (b >= L) break;
  }
  double t_p = ell / p.meta().fbar;
  return std::abs(total - t_p);
}

std::vector<double> generate_cars(const Profile& p, double z0, int count_left,
                                  int count_right) {
  if (count_left < 0 || count_right < 0)
    throw validation_error("generate_cars: counts must be nonnegative");
  const double ell = p.meta().ell;
  std::vector<double> right;
  right.push_back(z0);
  for (int k = 0; k < count_right; ++k)
    right.push_back(leader_op(p, right.back()));

  std::vector<double> left;
  double z_next = z0;
  for (int k = 0; k < count_left; ++k) {
    double lo = z_next - ell / p.meta().rho_minus - ell;
    double hi = z_next - ell * (1.0 - 1e-12);
    auto g = [&](double z) { return z + ell / p(z) - z_next; };
    RootOptions opts;
    opts.abs_tol = 1e-13;
    auto root = bisect(g, lo, hi, opts);
    if (!root.converged)
      throw numerical_error("generate_cars: follower bisection failed");
    left.push_back(root.x);
    z_next = root.x;
  }

  std::vector<double> out(left.rbegin(), left.rend());
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

}  // namespace ntw
