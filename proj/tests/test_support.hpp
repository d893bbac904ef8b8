#ifndef COSMOEE_TESTS_TEST_SUPPORT_HPP
#define COSMOEE_TESTS_TEST_SUPPORT_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cosmoee/dust_oracle.hpp"
#include "cosmoee/dynamics.hpp"

namespace testsupport {

inline double rel(double x, double ref) { return std::fabs(x - ref) / std::fabs(ref); }

namespace detail {

template <typename F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) throw std::runtime_error("simpson: recursion depth exhausted");
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature, deliberately independent of the library's
// Gauss-Kronrod wrapper so oracle comparisons cannot share a failure mode.
template <typename F>
double simpson(F f, double a, double b, double tol = 1e-12) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, 60);
}

// Conserved rho * a^3 of the dust orbit with curvature K and cubic parameter
// alpha, so that alpha = (4 pi G rho1 / c^2) sqrt(lambda / K^3).
inline double dust_rho1(const cosmoee::CosmoParams& p, double K, double alpha) {
  return alpha * p.c * p.c / (4.0 * std::numbers::pi * p.G) * std::sqrt(K * K * K / p.lambda);
}

// State on that orbit at xi = a sqrt(lambda/K); sign picks the sign of adot.
// On the orbit, adot^2 = c^2 K f_alpha(xi) / (3 xi).
inline cosmoee::State dust_state(const cosmoee::CosmoParams& p, double K, double alpha,
                                 double xi, int sign) {
  double f = cosmoee::dust::f_alpha(alpha, xi);
  if (f < 0 && f > -1e-12) f = 0;  // xi placed on a root up to round-off
  if (f < 0) throw std::invalid_argument("dust_state: xi outside the positivity region");
  const double a = xi * std::sqrt(K / p.lambda);
  const double adot = static_cast<double>(sign) * p.c * std::sqrt(K * f / (3.0 * xi));
  const double rho1 = dust_rho1(p, K, alpha);
  return {a, adot, rho1 / (a * a * a)};
}

}  // namespace testsupport

#endif
