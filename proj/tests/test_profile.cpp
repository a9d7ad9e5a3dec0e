#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ntw/errors.hpp"
#include "ntw/profile.hpp"

using namespace ntw;

namespace {

// Synthetic monotone wave for exercising Profile mechanics.
double tanh_wave(double x) { return 0.5 + 0.3 * std::tanh(8.0 * x); }

Profile make_tanh_profile(double x_left, double dx, int n, double shift = 0.0) {
  std::vector<double> vals;
  vals.reserve(n);
  for (int i = 0; i < n; ++i) vals.push_back(tanh_wave(x_left + i * dx - shift));
  ProfileMeta meta;
  meta.rho_minus = 0.2;
  meta.rho_plus = 0.8;
  meta.rho_hat = 0.5;
  return Profile(x_left, dx, std::move(vals), meta);
}

}  // namespace

TEST_CASE("constructor rejects malformed grids") {
  ProfileMeta meta;
  meta.rho_minus = 0.2;
  meta.rho_plus = 0.8;
  CHECK_THROWS_AS(Profile(0.0, -0.1, {0.2, 0.5, 0.8}, meta), validation_error);
  CHECK_THROWS_AS(Profile(0.0, 0.1, {0.5}, meta), validation_error);
  CHECK_THROWS_AS(Profile(0.0, 0.1, {0.2, 0.8, 0.5}, meta), numerical_error);
  // Values escaping the (rho-, rho+) band are also rejected.
  CHECK_THROWS_AS(Profile(0.0, 0.1, {0.1, 0.5, 0.8}, meta), numerical_error);
}

TEST_CASE("evaluation: interpolation inside, clamping outside") {
  Profile p = make_tanh_profile(-2.0, 0.01, 401);
  CHECK(p.x_right() == doctest::Approx(2.0));
  // Interior matches the generating function up to interpolation error.
  for (double x : {-0.5, -0.07, 0.003, 0.21, 1.3}) {
    CHECK(p(x) == doctest::Approx(tanh_wave(x)).epsilon(1e-4));
  }
  // Exact at nodes.
  CHECK(p(p.node(137)) == doctest::Approx(p.value(137)).epsilon(1e-15));
  // Clamping to the tail states outside.
  CHECK(p(-100.0) == doctest::Approx(0.2));
  CHECK(p(100.0) == doctest::Approx(0.8));
}

TEST_CASE("monotone inverse round-trips and rejects out-of-range values") {
  Profile p = make_tanh_profile(-2.0, 0.005, 801);
  for (double rho : {0.25, 0.4, 0.5, 0.65, 0.79}) {
    double x = p.inverse(rho);
    CHECK(p(x) == doctest::Approx(rho).epsilon(1e-12));
  }
  // inverse(value at a node) returns that node.
  CHECK(p.inverse(p.value(300)) == doctest::Approx(p.node(300)).epsilon(1e-9));
  CHECK_THROWS_AS(p.inverse(0.05), validation_error);
  CHECK_THROWS_AS(p.inverse(0.95), validation_error);
}

TEST_CASE("shift_align recovers a known translation") {
  Profile base = make_tanh_profile(-2.0, 0.002, 2001);
  for (double shift : {0.0, 0.1234, -0.31, 0.0005}) {
    Profile moved = make_tanh_profile(-2.0, 0.002, 2001, shift);
    AlignResult r = shift_align(base, moved, 0.3);
    CHECK(r.c == doctest::Approx(shift).epsilon(1e-4));
    CHECK(r.sup_error <= 2e-5);
    // The reported sup_error is reproducible through sup_distance.
    CHECK(sup_distance(base, moved, r.c, 0.3) ==
          doctest::Approx(r.sup_error).epsilon(1e-12));
  }
  // Misaligned comparison has a visibly larger error.
  Profile moved = make_tanh_profile(-2.0, 0.002, 2001, 0.2);
  CHECK(sup_distance(base, moved, 0.0, 0.3) > 0.1);
}

TEST_CASE("shift_align tolerates different grids") {
  Profile coarse = make_tanh_profile(-2.0, 0.004, 1001);
  Profile fine = make_tanh_profile(-1.7, 0.001, 3401, 0.05);
  AlignResult r = shift_align(coarse, fine, 0.3);
  CHECK(r.c == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(r.sup_error <= 5e-5);
}
