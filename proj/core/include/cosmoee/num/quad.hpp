#ifndef COSMOEE_NUM_QUAD_HPP
#define COSMOEE_NUM_QUAD_HPP

#include <cmath>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cosmoee/errors.hpp"

namespace cosmoee::num {

// Adaptive Gauss-Kronrod integral of f over [a, b].  Throws numeric_error if
// the a-posteriori error estimate exceeds rel_tol * max(1, |I|).
template <typename F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12) {
  if (a == b) return 0.0;
  double err = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, /*max_depth=*/15, rel_tol, &err);
  if (!std::isfinite(value) || err > 100.0 * rel_tol * std::max(1.0, std::fabs(value))) {
    throw numeric_error("quadrature failed to reach requested tolerance");
  }
  return value;
}

}  // namespace cosmoee::num

#endif
