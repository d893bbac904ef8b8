#ifndef COSMOEE_NUM_FIT_HPP
#define COSMOEE_NUM_FIT_HPP

#include <span>

namespace cosmoee::num {

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double rmse = 0;  // root mean square residual of y about the fit line
};

// Ordinary least squares of y against x.  Needs >= 2 distinct x values.
LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

struct PowerLawFit {
  double t_star = 0;     // fitted offset, t_star < min(t)
  double exponent = 0;   // p in y = C (t - t_star)^p
  double prefactor = 0;  // C
  double rmse = 0;       // log-space residual
};

// Fits y ~ C (t - t_star)^p with t_star unknown, t_star < min(t).  All y > 0.
// One-dimensional golden-section search over t_star of the log-log residual,
// s = min(t) - t_star scanned in [s_lo, s_hi].
PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> y,
                          double s_lo, double s_hi);

}  // namespace cosmoee::num

#endif
