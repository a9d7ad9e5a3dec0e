#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ntw/errors.hpp"
#include "ntw/micromacro.hpp"
#include "ntw/rates.hpp"

using namespace ntw;

TEST_CASE("two-level study: errors shrink with the car length") {
  ModelConfig base{Kernel::linear_decreasing(0.2), VelocityLaw::linear(), 0.01,
                   Variant::DensityAveraged, 0.0};
  ConvergenceReport rep =
      run_study(base, {0.04, 0.02}, 0.2, 0.8, -1.5, 2.0, 0.02 / 8.0);
  REQUIRE(rep.sup_errors.size() == 2);
  for (const std::string& f : rep.failures) CHECK(f.empty());
  CHECK(rep.sup_errors[1] < rep.sup_errors[0]);
  CHECK(rep.rate_errors_plus[1] < rep.rate_errors_plus[0]);
  CHECK(rep.rate_errors_minus[1] < rep.rate_errors_minus[0]);
  REQUIRE(rep.ratios.size() == 1);
  CHECK(rep.ratios[0] == doctest::Approx(rep.sup_errors[1] / rep.sup_errors[0])
                             .epsilon(1e-12));
  CHECK(rep.ratios[0] < 0.75);
  CHECK(rep.rate_ratios[0] < 0.75);
  // Continuum rates recorded for reference match the rate module.
  CHECK(rep.lambda_plus_cont ==
        doctest::Approx(continuous_rate(base, 0.8, Side::PlusInfinity).lambda)
            .epsilon(1e-10));
  CHECK(rep.lambda_minus_cont ==
        doctest::Approx(continuous_rate(base, 0.2, Side::MinusInfinity).lambda)
            .epsilon(1e-10));
}

TEST_CASE("per-level failures are recorded, not fatal") {
  // The increasing kernel admits a continuum profile but no monotone
  // discrete one, so every level fails and is recorded with a message.
  ModelConfig base{Kernel::linear_increasing(0.2), VelocityLaw::linear(), 0.01,
                   Variant::DensityAveraged, 0.0};
  ConvergenceReport rep =
      run_study(base, {0.04, 0.02}, 0.2, 0.8, -1.5, 2.0, 0.02 / 8.0);
  REQUIRE(rep.failures.size() == 2);
  for (const std::string& f : rep.failures) CHECK_FALSE(f.empty());
  for (double e : rep.sup_errors) CHECK(std::isnan(e));
}

TEST_CASE("study validation") {
  ModelConfig base{Kernel::linear_decreasing(0.2), VelocityLaw::linear(), 0.01,
                   Variant::DensityAveraged, 0.0};
  CHECK_THROWS_AS(run_study(base, {}, 0.2, 0.8, -1.5, 2.0, 0.0025),
                  validation_error);
  // Non-conjugate endpoint pair.
  CHECK_THROWS_AS(run_study(base, {0.04}, 0.3, 0.8, -1.5, 2.0, 0.0025),
                  validation_error);
  // dx too coarse for the finest level.
  CHECK_THROWS_AS(run_study(base, {0.04, 0.02}, 0.2, 0.8, -1.5, 2.0, 0.01),
                  validation_error);
  // ell sequence must decrease and stay under h/4.
  CHECK_THROWS_AS(run_study(base, {0.02, 0.04}, 0.2, 0.8, -1.5, 2.0, 0.0025),
                  validation_error);
  CHECK_THROWS_AS(run_study(base, {0.08}, 0.2, 0.8, -1.5, 2.0, 0.0025),
                  validation_error);
}
