#include "cosmoee/num/fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cosmoee/errors.hpp"

namespace cosmoee::num {

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw domain_error("fit_linear: need >= 2 paired samples");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw domain_error("fit_linear: x values are all equal");
  LinearFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (out.intercept + out.slope * x[i]);
    ss += r * r;
  }
  out.rmse = std::sqrt(ss / static_cast<double>(n));
  return out;
}

namespace {

// Log-log residual of the power-law model for a given offset s = min(t) - t_star.
LinearFit loglog_fit(std::span<const double> t, std::span<const double> y,
                     double t_min, double s, std::vector<double>& lx,
                     std::vector<double>& ly) {
  const double t_star = t_min - s;
  lx.clear();
  ly.clear();
  for (std::size_t i = 0; i < t.size(); ++i) {
    lx.push_back(std::log(t[i] - t_star));
    ly.push_back(std::log(y[i]));
  }
  return fit_linear(lx, ly);
}

}  // namespace

PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> y,
                          double s_lo, double s_hi) {
  const std::size_t n = t.size();
  if (n < 4 || y.size() != n) throw domain_error("fit_power_law: need >= 4 paired samples");
  if (!(s_lo > 0) || !(s_hi > s_lo)) throw domain_error("fit_power_law: bad offset bracket");
  double t_min = t[0];
  for (double ti : t) t_min = std::min(t_min, ti);
  for (double yi : y) {
    if (!(yi > 0)) throw domain_error("fit_power_law: y must be positive");
  }

  std::vector<double> lx, ly;
  lx.reserve(n);
  ly.reserve(n);
  auto cost = [&](double ls) {
    return loglog_fit(t, y, t_min, std::exp(ls), lx, ly).rmse;
  };

  // Golden-section in log(s); the residual is smooth and unimodal here.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = std::log(s_lo), b = std::log(s_hi);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = cost(c), fd = cost(d);
  for (int it = 0; it < 200 && (b - a) > 1e-12; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = cost(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = cost(d);
    }
  }
  const double s = std::exp(0.5 * (a + b));
  const LinearFit lf = loglog_fit(t, y, t_min, s, lx, ly);
  PowerLawFit out;
  out.t_star = t_min - s;
  out.exponent = lf.slope;
  out.prefactor = std::exp(lf.intercept);
  out.rmse = lf.rmse;
  return out;
}

}  // namespace cosmoee::num
