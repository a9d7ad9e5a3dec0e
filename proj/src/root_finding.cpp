#include "ntw/root_finding.hpp"

#include <cmath>

namespace ntw {

RootResult bisect(const std::function<double(double)>& f, double lo, double hi,
                  RootOptions opts) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, lo, lo, true};
  if (fhi == 0.0) return {hi, hi, hi, true};
  if ((flo > 0) == (fhi > 0)) return {0.5 * (lo + hi), lo, hi, false};
  for (int it = 0; it < opts.max_iter; ++it) {
    double mid = 0.5 * (lo + hi);
    if (hi - lo <= 2 * opts.abs_tol) return {mid, lo, hi, true};
    double fm = f(mid);
    if (fm == 0.0) return {mid, mid, mid, true};
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), lo, hi, false};
}

BracketResult expand_bracket(const std::function<double(double)>& f, double lo,
                             double initial_width, int max_doublings) {
  const bool sign_lo = f(lo) > 0;
  double width = initial_width;
  for (int k = 0; k <= max_doublings; ++k) {
    double hi = lo + width;
    double fhi = f(hi);
    if (fhi == 0.0 || (fhi > 0) != sign_lo) return {hi, true};
    width *= 2;
  }
  return {lo + width, false};
}

double golden_minimize(const std::function<double(double)>& f, double lo,
                       double hi, double tol, int max_iter) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace ntw
