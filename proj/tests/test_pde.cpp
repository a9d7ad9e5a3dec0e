#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ntw/errors.hpp"
#include "ntw/pde.hpp"
#include "ntw/profile_q.hpp"

using namespace ntw;

namespace {

ModelConfig field_config(KernelShape shape = KernelShape::LinearDecreasing) {
  Kernel k = shape == KernelShape::LinearIncreasing
                 ? Kernel::linear_increasing(0.2)
                 : Kernel::linear_decreasing(0.2);
  return ModelConfig{k, VelocityLaw::linear(), 0.01, Variant::DensityAveraged,
                     0.0};
}

FieldState constant_field(double rho, double dx = 0.01) {
  FieldState s;
  s.x0 = -1.0;
  s.dx = dx;
  s.rho.assign(static_cast<std::size_t>(2.0 / dx) + 1, rho);
  s.rho_minus = rho;
  s.rho_plus = rho;
  return s;
}

}  // namespace

TEST_CASE("constant states are exact steady solutions of both schemes") {
  ModelConfig cfg = field_config();
  for (Scheme sch : {Scheme::Upwind, Scheme::LaxFriedrichs}) {
    FieldState s = constant_field(0.37);
    for (int k = 0; k < 50; ++k) s = pde_step(s, 0.4 * s.dx, cfg, sch);
    for (double r : s.rho) CHECK(r == doctest::Approx(0.37).epsilon(1e-14));
  }
}

TEST_CASE("velocity field is bounded and decreasing in the density") {
  ModelConfig cfg = field_config();
  FieldState s = oscillatory_field_ic(-2.0, 3.0, 0.01);
  std::vector<double> V = nonlocal_velocity_field(s, cfg);
  REQUIRE(V.size() == s.rho.size());
  for (double v : V) {
    CHECK(v >= 0.2 - 1e-9);  // densities live in [0.2, 0.8]
    CHECK(v <= 0.8 + 1e-9);
  }
}

TEST_CASE("oscillatory field IC matches the branch formula pointwise") {
  FieldState s = oscillatory_field_ic(-2.0, 3.0, 0.01);
  CHECK(s.rho_minus == doctest::Approx(0.2));
  CHECK(s.rho_plus == doctest::Approx(0.8));
  CHECK(s.rho[200] == doctest::Approx(0.5));  // x = 0: 0.5 - 0.3 sin 0
  CHECK(s.rho.front() == doctest::Approx(0.2));
  CHECK(s.rho.back() == doctest::Approx(0.8));
  CHECK_THROWS_AS(oscillatory_field_ic(1.0, -1.0, 0.01), validation_error);
}

TEST_CASE("exact discrete conservation via the recorded boundary fluxes") {
  ModelConfig cfg = field_config();
  FieldState s = oscillatory_field_ic(-2.0, 3.0, 0.02);
  double dt = 0.4 * s.dx;
  for (int k = 0; k < 20; ++k) {
    double mass0 = field_mass(s);
    StepFluxes f;
    s = pde_step(s, dt, cfg, Scheme::Upwind, &f);
    double expected = mass0 + dt * (f.left - f.right);
    CHECK(field_mass(s) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("maximum principle for the stable configuration") {
  ModelConfig cfg = field_config();
  FieldState s = oscillatory_field_ic(-2.0, 3.0, 0.01);
  double dt = 0.4 * s.dx;
  for (int k = 0; k < 400; ++k) s = pde_step(s, dt, cfg, Scheme::Upwind);
  for (double r : s.rho) {
    CHECK(r >= 0.2 - 1e-10);
    CHECK(r <= 0.8 + 1e-10);
  }
  // And the total variation has not increased.
  CHECK(total_variation(s) <= 1.8 + 1e-9);
}

TEST_CASE("CFL violation and non-finite data are rejected") {
  ModelConfig cfg = field_config();
  FieldState s = constant_field(0.5);
  CHECK_THROWS_AS(pde_step(s, 2.0 * s.dx, cfg, Scheme::Upwind),
                  validation_error);
  s.rho[5] = std::nan("");
  CHECK_THROWS_AS(pde_step(s, 0.4 * s.dx, cfg, Scheme::Upwind),
                  numerical_error);
}

TEST_CASE("wave-profile IC is a near-steady state of the upwind scheme") {
  ModelConfig cfg = field_config();
  double dx = cfg.h() / 64.0;
  Profile q = solve_asymptotic(cfg, 0.2, 0.8, -2.0, 3.0, dx);
  FieldState s;
  s.x0 = -1.5;
  s.dx = dx;
  s.rho_minus = 0.2;
  s.rho_plus = 0.8;
  for (double x = -1.5; x <= 2.5 + 1e-12; x += dx) s.rho.push_back(q(x));
  double dt = 0.4 * dx;
  int steps = static_cast<int>(0.5 / dt);
  for (int k = 0; k < steps; ++k) s = pde_step(s, dt, cfg, Scheme::Upwind);
  // The sigma = 0 wave is stationary; first-order drift stays O(dx).
  CHECK(field_profile_distance(s, q, cfg.h() + 0.5) <= 5.0 * dx);
}

TEST_CASE("instability metric classifies TV trends") {
  ModelConfig cfg = field_config();
  FieldState a = oscillatory_field_ic(-2.0, 3.0, 0.01);
  double dt = 0.4 * a.dx;
  std::vector<FieldState> stable{a};
  FieldState cur = a;
  for (int snap = 0; snap < 2; ++snap) {
    for (int k = 0; k < 200; ++k) cur = pde_step(cur, dt, cfg, Scheme::Upwind);
    stable.push_back(cur);
  }
  InstabilityReport rep = instability_metric(stable);
  REQUIRE(rep.tv.size() == 3);
  CHECK(rep.tv[0] == doctest::Approx(1.8).epsilon(1e-9));
  CHECK(rep.tv[2] < rep.tv[1]);
  CHECK(rep.classification == "converging");

  // The increasing kernel amplifies the oscillation.
  ModelConfig bad = field_config(KernelShape::LinearIncreasing);
  std::vector<FieldState> unstable{a};
  cur = a;
  for (int snap = 0; snap < 2; ++snap) {
    for (int k = 0; k < 400; ++k) cur = pde_step(cur, dt, bad, Scheme::Upwind);
    unstable.push_back(cur);
  }
  rep = instability_metric(unstable);
  CHECK(rep.tv[2] > rep.tv[1]);
  CHECK(rep.tv[2] > rep.tv[0]);
  CHECK(rep.classification == "diverging");
}

TEST_CASE("Lax-Friedrichs also damps the stable oscillation") {
  ModelConfig cfg = field_config();
  FieldState s = oscillatory_field_ic(-2.0, 3.0, 0.02);
  double tv0 = total_variation(s);
  double dt = 0.4 * s.dx;
  for (int k = 0; k < 200; ++k) s = pde_step(s, dt, cfg, Scheme::LaxFriedrichs);
  CHECK(total_variation(s) < tv0);
}
