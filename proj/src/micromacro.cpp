#include "ntw/micromacro.hpp"

#include <algorithm>
#include <cmath>

#include "ntw/errors.hpp"
#include "ntw/profile_p.hpp"
#include "ntw/profile_q.hpp"
#include "ntw/rates.hpp"

namespace ntw {

ConvergenceReport run_study(const ModelConfig& base,
                            const std::vector<double>& ells, double rho_minus,
                            double rho_plus, double x_min, double x_max,
                            double dx) {
  if (ells.empty()) throw validation_error("run_study: empty ell sequence");
  double h = base.h();
  for (std::size_t i = 0; i < ells.size(); ++i) {
    if (ells[i] > h / 4.0 + 1e-15)
      throw validation_error("run_study: all ells must be <= h/4");
    if (i > 0 && ells[i] >= ells[i - 1])
      throw validation_error("run_study: ells must be decreasing");
  }
  double ell_min = ells.back();
  if (dx > ell_min / 8.0 + 1e-15)
    throw validation_error("run_study: dx must be <= min(ells)/8");

  ConvergenceReport rep;
  rep.ells = ells;

  ModelConfig cont = base;
  RateResult lp = continuous_rate(cont, rho_plus, Side::PlusInfinity);
  RateResult lm = continuous_rate(cont, rho_minus, Side::MinusInfinity);
  if (!lp.has_root || !lm.has_root)
    throw numerical_error("run_study: continuum rates unavailable");
  rep.lambda_plus_cont = lp.lambda;
  rep.lambda_minus_cont = lm.lambda;

  Profile q = solve_asymptotic(cont, rho_minus, rho_plus, x_min, x_max, dx);
  double edge_margin = h + ells.front();

  for (double ell : ells) {
    ModelConfig cfg = base;
    cfg.ell = ell;
    try {
      Profile p = solve_p_asymptotic(cfg, rho_minus, rho_plus, x_min, x_max, dx);
      AlignResult align = shift_align(q, p, edge_margin);
      RateResult dp = discrete_rate(cfg, rho_plus, Side::PlusInfinity);
      RateResult dm = discrete_rate(cfg, rho_minus, Side::MinusInfinity);
      if (!dp.has_root || !dm.has_root)
        throw numerical_error("discrete rates unavailable");
      rep.sup_errors.push_back(align.sup_error);
      rep.rate_errors_plus.push_back(std::abs(dp.lambda - lp.lambda));
      rep.rate_errors_minus.push_back(std::abs(dm.lambda - lm.lambda));
      rep.failures.emplace_back();
    } catch (const std::exception& e) {
      rep.sup_errors.push_back(std::nan(""));
      rep.rate_errors_plus.push_back(std::nan(""));
      rep.rate_errors_minus.push_back(std::nan(""));
      rep.failures.emplace_back(e.what());
    }
  }

  for (std::size_t i = 1; i < rep.sup_errors.size(); ++i) {
    rep.ratios.push_back(rep.sup_errors[i] / rep.sup_errors[i - 1]);
    rep.rate_ratios.push_back(rep.rate_errors_plus[i] /
                              rep.rate_errors_plus[i - 1]);
  }
  return rep;
}

}  // namespace ntw
