#ifndef COSMOEE_NUM_ROOTS_HPP
#define COSMOEE_NUM_ROOTS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "cosmoee/errors.hpp"

namespace cosmoee::num {

// Root of f in the bracketing interval [lo, hi] (f(lo) and f(hi) of opposite
// sign, either may be zero).  TOMS 748 with a mixed absolute/relative width
// termination; throws numeric_error on a bad bracket.
template <typename F>
double find_root(F&& f, double lo, double hi, double rel_tol = 1e-15,
                 double abs_tol = 0.0) {
  const double flo = f(lo);
  if (flo == 0.0) return lo;
  const double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw numeric_error("find_root: endpoints do not bracket a sign change");
  }
  auto done = [=](double a, double b) {
    return std::fabs(b - a) <=
           abs_tol + rel_tol * std::max(std::fabs(a), std::fabs(b));
  };
  std::uintmax_t max_iter = 200;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, done, max_iter);
  if (max_iter >= 200) throw numeric_error("find_root: iteration limit reached");
  return 0.5 * (r.first + r.second);
}

// Newton iteration with bisection safeguard, bounded to [lo, hi].
// fdf(x) must return {f(x), f'(x)}.
template <typename FDF>
double newton_bracketed(FDF&& fdf, double guess, double lo, double hi,
                        int digits = 50) {
  std::uintmax_t max_iter = 100;
  auto wrapped = [&fdf](double x) {
    auto [fx, dfx] = fdf(x);
    return std::make_pair(fx, dfx);
  };
  const double x = boost::math::tools::newton_raphson_iterate(
      wrapped, guess, lo, hi, digits, max_iter);
  if (max_iter >= 100) throw numeric_error("newton_bracketed: did not converge");
  return x;
}

// Grows hi geometrically until f(hi) >= target or the expansion limit hits.
// f must be nondecreasing.  Returns hi with f(hi) >= target.
template <typename F>
double expand_upper_bracket(F&& f, double hi, double target, double factor = 4.0) {
  for (int i = 0; i < 600; ++i) {
    if (f(hi) >= target) return hi;
    hi *= factor;
    if (!std::isfinite(hi)) break;
  }
  throw numeric_error("expand_upper_bracket: target not reachable");
}

}  // namespace cosmoee::num

#endif
