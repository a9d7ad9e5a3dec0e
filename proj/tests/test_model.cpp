#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ntw/errors.hpp"
#include "ntw/model.hpp"

using namespace ntw;

namespace {

// Independent quadrature for cross-checks: composite Simpson on [a,b].
template <class F>
double simpson(F&& f, double a, double b, int n = 2000) {
  double s = f(a) + f(b);
  double dx = (b - a) / n;
  for (int i = 1; i < n; ++i) s += f(a + i * dx) * (i % 2 ? 4.0 : 2.0);
  return s * dx / 3.0;
}

}  // namespace

TEST_CASE("kernel factories have unit mass and expected densities") {
  double h = 0.2;
  Kernel wd = Kernel::linear_decreasing(h);
  Kernel wi = Kernel::linear_increasing(h);
  Kernel wu = Kernel::uniform(h);
  CHECK(wd(0.0) == doctest::Approx(2.0 / h));
  CHECK(wd(h) == doctest::Approx(0.0));
  CHECK(wi(0.0) == doctest::Approx(0.0));
  CHECK(wi(h) == doctest::Approx(2.0 / h));
  CHECK(wu(0.1) == doctest::Approx(1.0 / h));
  CHECK(wd.integral(0.0, h) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wi.integral(0.0, h) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wu.integral(0.0, h) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wd.nonincreasing());
  CHECK_FALSE(wi.nonincreasing());
  CHECK(wu.nonincreasing());
  // Outside the support the density vanishes.
  CHECK(wd(-0.01) == 0.0);
  CHECK(wd(h + 0.01) == 0.0);
}

TEST_CASE("partial kernel mass over [0, 0.1] for the decreasing kernel") {
  Kernel w = Kernel::linear_decreasing(0.2);
  // int_0^0.1 (10 - 50 s) ds = 1 - 0.25 = 0.75.
  CHECK(w.integral(0.0, 0.1) == doctest::Approx(0.75).epsilon(1e-14));
  // Clipping: [0.15, 0.5] only counts up to h.
  double direct = simpson([&](double s) { return w(s); }, 0.15, 0.2);
  CHECK(w.integral(0.15, 0.5) == doctest::Approx(direct).epsilon(1e-10));
  CHECK(w.integral(-1.0, 0.0) == 0.0);
  CHECK_THROWS_AS(w.integral(0.2, 0.1), validation_error);
}

TEST_CASE("symmetric uniform kernel: support [-h, h], half mass on each side") {
  Kernel w = Kernel::symmetric_uniform(0.2);
  CHECK(w.symmetric());
  CHECK(w.support_min() == doctest::Approx(-0.2));
  CHECK(w(0.0) == doctest::Approx(2.5));  // 1/(2h)
  CHECK(w.integral(-0.2, 0.2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w.integral(0.0, 0.2) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("exp_integral matches independent quadrature and the small-lambda limit") {
  for (auto make : {&Kernel::linear_decreasing, &Kernel::linear_increasing,
                    &Kernel::uniform}) {
    Kernel w = make(0.2);
    for (double lam : {0.0, 0.5, 3.7, 34.1, -5.0}) {
      double direct =
          simpson([&](double s) { return std::exp(-lam * s) * w(s); }, 0.0, 0.2);
      CHECK(w.exp_integral(lam) == doctest::Approx(direct).epsilon(1e-9));
    }
    // Continuity through the series branch near zero.
    CHECK(w.exp_integral(1e-9) == doctest::Approx(w.exp_integral(0.0)).epsilon(1e-8));
    CHECK(w.exp_integral(0.0) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("tabulated kernel: renormalization, exactness, defect rejection") {
  double h = 0.2;
  // Samples of the decreasing density, uniformly spaced: exact representation.
  std::vector<double> samples;
  for (int i = 0; i <= 16; ++i) {
    double s = h * i / 16.0;
    samples.push_back(2.0 / h - 2.0 * s / (h * h));
  }
  Kernel w = Kernel::tabulated(h, samples);
  CHECK(w.integral(0.0, h) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w.integral(0.0, 0.1) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(w(0.05) == doctest::Approx(7.5).epsilon(1e-12));

  // Mild defect is renormalized away...
  std::vector<double> off = samples;
  for (double& v : off) v *= 1.0005;
  Kernel w2 = Kernel::tabulated(h, off);
  CHECK(w2.integral(0.0, h) == doctest::Approx(1.0).epsilon(1e-14));
  // ...a gross one is rejected.
  for (double& v : off) v *= 1.01;
  CHECK_THROWS_AS(Kernel::tabulated(h, off), validation_error);
  CHECK_THROWS_AS(Kernel::tabulated(h, {1.0}), validation_error);
  CHECK_THROWS_AS(Kernel::tabulated(h, {5.0, -1.0, 5.0}), validation_error);
}

TEST_CASE("velocity laws: linear values and admissibility validation") {
  VelocityLaw lin = VelocityLaw::linear();
  CHECK(lin.v(0.0) == doctest::Approx(1.0));
  CHECK(lin.v(1.0) == doctest::Approx(0.0));
  CHECK(lin.dv(0.3) == doctest::Approx(-1.0));
  CHECK(lin.concave());

  // Custom law with the right endpoints and negative slope is accepted.
  VelocityLaw ok = VelocityLaw::custom(
      [](double r) { return (1 - r) * (1 + 0.3 * r); },
      [](double r) { return -0.7 - 0.6 * r; }, true);
  CHECK(ok.v(0.5) == doctest::Approx(0.575));
  // Wrong endpoint values are rejected.
  CHECK_THROWS_AS(VelocityLaw::custom([](double r) { return 1 - 0.5 * r; },
                                      [](double) { return -0.5; }, true),
                  validation_error);
  // Non-decreasing laws are rejected.
  CHECK_THROWS_AS(VelocityLaw::custom(
                      [](double r) { return 1 - r * r * (2 - r * r); },
                      [](double r) { return -4 * r * (1 - r * r); }, false),
                  validation_error);
}

TEST_CASE("model config: window count and validation") {
  ModelConfig cfg{Kernel::linear_decreasing(0.2), VelocityLaw::linear(), 0.0125,
                  Variant::DensityAveraged, 0.0};
  CHECK(cfg.m() == 15);  // smallest m with (m+1) * ell >= h
  cfg.ell = 0.01;
  CHECK(cfg.m() == 19);
  CHECK_NOTHROW(cfg.validate());
  cfg.ell = -1.0;
  CHECK_THROWS_AS(cfg.validate(), validation_error);
  cfg.ell = 0.01;
  cfg.sigma = 1.0;  // frame speed reaches v(0)
  CHECK_THROWS_AS(cfg.validate(), validation_error);
  cfg.sigma = -0.1;
  CHECK_THROWS_AS(cfg.validate(), validation_error);
}

TEST_CASE("flux, stagnation point, conjugate endpoints") {
  VelocityLaw lin = VelocityLaw::linear();
  CHECK(flux(0.2, lin) == doctest::Approx(0.16));
  CHECK(flux_prime(0.2, lin) == doctest::Approx(0.6));
  CHECK_THROWS_AS(flux(1.2, lin), validation_error);

  CHECK(stagnation_point(lin, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(stagnation_point(lin, 0.2) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(stagnation_point(lin, -0.4) == doctest::Approx(0.7).epsilon(1e-12));

  CHECK(conjugate_endpoint(0.2, lin, 0.0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(conjugate_endpoint(0.2, lin, 0.2) == doctest::Approx(0.6).epsilon(1e-12));
  // Involution on both sides of the stagnation point.
  for (double r : {0.1, 0.3, 0.45, 0.62, 0.9}) {
    double c = conjugate_endpoint(r, lin, 0.0);
    CHECK(conjugate_endpoint(c, lin, 0.0) == doctest::Approx(r).epsilon(1e-9));
  }
  CHECK_THROWS_AS(conjugate_endpoint(0.5, lin, 0.0), validation_error);

  EndpointPair ep = make_endpoints(0.8, lin, 0.0);
  CHECK(ep.rho_minus == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(ep.rho_plus == doctest::Approx(0.8));
  CHECK(ep.fbar == doctest::Approx(0.16).epsilon(1e-12));

  // Concavity of the flux: f' strictly decreasing (sampled).
  double prev = flux_prime(0.0, lin);
  for (int i = 1; i <= 20; ++i) {
    double cur = flux_prime(i / 20.0, lin);
    CHECK(cur < prev);
    prev = cur;
  }
}
