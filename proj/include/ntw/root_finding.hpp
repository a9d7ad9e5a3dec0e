#pragma once

#include <functional>

namespace ntw {

struct RootOptions {
  double abs_tol = 1e-12;  // half-width of the final bracket
  int max_iter = 200;
};

struct RootResult {
  double x;        // midpoint of the final bracket
  double lo, hi;   // final bracket
  bool converged;
};

// Bisection on [lo, hi]; f(lo) and f(hi) must have opposite (or zero) signs.
RootResult bisect(const std::function<double(double)>& f, double lo, double hi,
                  RootOptions opts = {});

// Expands hi by doubling the interval width from lo until f changes sign.
// Returns the first hi with sign(f(hi)) != sign(f(lo)), or fails after
// max_doublings.
struct BracketResult {
  double hi;
  bool found;
};
BracketResult expand_bracket(const std::function<double(double)>& f, double lo,
                             double initial_width, int max_doublings = 10);

// Golden-section minimization of a unimodal function on [lo, hi].
double golden_minimize(const std::function<double(double)>& f, double lo,
                       double hi, double tol = 1e-10, int max_iter = 200);

}  // namespace ntw
