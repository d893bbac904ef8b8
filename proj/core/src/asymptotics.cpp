#include "cosmoee/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cosmoee/errors.hpp"
#include "cosmoee/num/fit.hpp"

namespace cosmoee {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::pair<double, double> sorted_window(double t_a, double t_b) {
  return t_a <= t_b ? std::pair{t_a, t_b} : std::pair{t_b, t_a};
}
}  // namespace

const char* to_string(FitRegime r) {
  switch (r) {
    case FitRegime::bigbang_powerlaw: return "bigbang_powerlaw";
    case FitRegime::latetime_exponential: return "latetime_exponential";
    case FitRegime::static_approach: return "static_approach";
  }
  return "?";
}

FitPair fit_bigbang(const Trajectory& traj, double Gamma, const CosmoParams& p) {
  validate(p);
  if (!(Gamma >= 1.0 && Gamma < 2.0)) {
    throw domain_error("fit_bigbang: Gamma must satisfy 1 <= Gamma < 2");
  }
  if (!traj.singular_approach) {
    throw domain_error("fit_bigbang: trajectory did not run against the singular edge");
  }
  // Fit coordinates place the singular time before the data.
  const double flip = traj.direction > 0 ? -1.0 : 1.0;

  std::vector<double> tt, aa, rr;
  double a_lo = std::numeric_limits<double>::infinity(), a_hi = 0;
  for (const Sample& s : traj.samples) {
    if (s.state.a >= 100.0 * traj.a_min_stop) continue;
    tt.push_back(flip * s.t);
    aa.push_back(s.state.a);
    rr.push_back(s.state.rho);
    a_lo = std::min(a_lo, s.state.a);
    a_hi = std::max(a_hi, s.state.a);
  }
  if (tt.size() < 20 || !(a_hi / a_lo >= 30.0)) {
    throw domain_error("fit_bigbang: insufficient dynamic range near the singular edge");
  }

  // Innermost sample is the last pushed (monotone approach to the edge).
  const double s_scale = aa.back() / std::fabs(traj.back().state.adot);
  const num::PowerLawFit fa = num::fit_power_law(tt, aa, 1e-3 * s_scale, 1e3 * s_scale);
  const num::PowerLawFit fr = num::fit_power_law(tt, rr, 1e-3 * s_scale, 1e3 * s_scale);

  // rho1 from the conserved combination rho a^{3 Gamma} next to the edge.
  double rho1 = 0;
  {
    const std::size_t m = std::min<std::size_t>(10, tt.size());
    for (std::size_t i = tt.size() - m; i < tt.size(); ++i) {
      rho1 += rr[i] * std::pow(aa[i], 3.0 * Gamma);
    }
    rho1 /= static_cast<double>(m);
  }

  const auto window = sorted_window(flip * tt.front(), flip * tt.back());

  FitPair out;
  out.a_fit.regime = FitRegime::bigbang_powerlaw;
  out.a_fit.fitted = fa.exponent;
  out.a_fit.target = 2.0 / (3.0 * Gamma);
  out.a_fit.rel_err = std::fabs(fa.exponent - out.a_fit.target) / out.a_fit.target;
  out.a_fit.window = window;
  out.a_fit.prefactor = fa.prefactor;
  out.a_fit.prefactor_target =
      std::pow(6.0 * kPi * Gamma * Gamma * p.G * rho1, 1.0 / (3.0 * Gamma));
  out.a_fit.t_star = flip * fa.t_star;

  out.rho_fit.regime = FitRegime::bigbang_powerlaw;
  out.rho_fit.fitted = fr.exponent;
  out.rho_fit.target = -2.0;
  out.rho_fit.rel_err = std::fabs(fr.exponent - out.rho_fit.target) / 2.0;
  out.rho_fit.window = window;
  out.rho_fit.prefactor = fr.prefactor;
  out.rho_fit.prefactor_target = 1.0 / (6.0 * kPi * Gamma * Gamma * p.G);
  out.rho_fit.t_star = flip * fr.t_star;
  return out;
}

FitPair fit_latetime(const Trajectory& traj, const CosmoParams& p) {
  validate(p);
  if (!(p.lambda > 0)) throw domain_error("fit_latetime: requires lambda > 0");
  if (traj.direction != 1) throw domain_error("fit_latetime: requires a forward trajectory");
  const double a0 = traj.front().state.a;
  const double a_end = traj.back().state.a;
  if (!(a_end >= 0.999 * traj.a_max_stop)) {
    throw domain_error("fit_latetime: trajectory did not reach a_max_stop");
  }
  if (!(std::log(a_end / (10.0 * a0)) >= 3.0)) {
    throw domain_error("fit_latetime: fewer than 3 e-folds past a = 10 a0");
  }

  // Last two e-folds of expansion.
  const double a_cut = a_end * std::exp(-2.0);
  std::vector<double> tt, la, lr;
  for (const Sample& s : traj.samples) {
    if (s.state.a < a_cut) continue;
    tt.push_back(s.t);
    la.push_back(std::log(s.state.a));
    lr.push_back(std::log(s.state.rho));
  }
  if (tt.size() < 10) throw domain_error("fit_latetime: too few samples in the fit window");

  const num::LinearFit fa = num::fit_linear(tt, la);
  const num::LinearFit fr = num::fit_linear(tt, lr);
  const double rate = p.c * std::sqrt(p.lambda / 3.0);
  const auto window = sorted_window(tt.front(), tt.back());

  FitPair out;
  out.a_fit.regime = FitRegime::latetime_exponential;
  out.a_fit.fitted = fa.slope;
  out.a_fit.target = rate;
  out.a_fit.rel_err = std::fabs(fa.slope - rate) / rate;
  out.a_fit.window = window;
  out.a_fit.prefactor = std::exp(fa.intercept);
  out.a_fit.prefactor_target = kNaN;
  out.a_fit.t_star = kNaN;

  out.rho_fit.regime = FitRegime::latetime_exponential;
  out.rho_fit.fitted = -fr.slope;
  out.rho_fit.target = 3.0 * rate;
  out.rho_fit.rel_err = std::fabs(-fr.slope - 3.0 * rate) / (3.0 * rate);
  out.rho_fit.window = window;
  out.rho_fit.prefactor = std::exp(fr.intercept);
  out.rho_fit.prefactor_target = kNaN;
  out.rho_fit.t_star = kNaN;
  return out;
}

AsymptoticFit fit_static_approach(const Trajectory& traj, const CosmoParams& p) {
  validate(p);
  if (!(p.lambda > 0)) throw domain_error("fit_static_approach: requires lambda > 0");
  if (traj.samples.size() < 20) {
    throw domain_error("fit_static_approach: too few samples");
  }
  // Equilibrium value from the conserved dust content.
  const double rho1 = traj.front().flat_a3;
  const double abar = std::cbrt(4.0 * kPi * p.G * rho1 / (p.c * p.c * p.lambda));

  double r_max = 0;
  for (const Sample& s : traj.samples) r_max = std::max(r_max, std::fabs(s.state.a - abar));
  if (r_max < 1e-12 * abar) {
    throw domain_error("fit_static_approach: no decay, trajectory sits at the equilibrium");
  }

  // The equilibrium is a saddle, so a decaying residual eventually hits the
  // round-off seed of the growing mode and turns around.  Split the run at
  // the residual minimum, keep a safety factor above that minimum on the
  // decaying side, cap the window inside the linear regime, and fit
  // whichever leg carries the wider clean range.
  const std::size_t n = traj.samples.size();
  std::vector<double> rr(n);
  std::size_t i_min = 0;
  for (std::size_t i = 0; i < n; ++i) {
    rr[i] = std::fabs(traj.samples[i].state.a - abar);
    if (rr[i] < rr[i_min]) i_min = i;
  }
  const double r_cap = 0.01 * abar;
  auto collect = [&](std::size_t b, std::size_t e, double r_floor, std::vector<double>& tt,
                     std::vector<double>& lr) {
    for (std::size_t i = b; i < e; ++i) {
      if (rr[i] < r_floor || rr[i] > r_cap) continue;
      tt.push_back(traj.samples[i].t);
      lr.push_back(std::log(rr[i]));
    }
  };
  auto range_of = [](const std::vector<double>& lr) {
    return lr.size() < 2 ? 0.0
                         : *std::max_element(lr.begin(), lr.end()) -
                               *std::min_element(lr.begin(), lr.end());
  };
  std::vector<double> tt_d, lr_d, tt_g, lr_g;
  collect(0, i_min + 1, std::max(300.0 * rr[i_min], 1e-11 * abar), tt_d, lr_d);
  collect(i_min, n, std::max(3.0 * rr[i_min], 1e-11 * abar), tt_g, lr_g);
  const bool use_decay = range_of(lr_d) >= range_of(lr_g);
  std::vector<double>& tt = use_decay ? tt_d : tt_g;
  std::vector<double>& lr = use_decay ? lr_d : lr_g;
  if (tt.size() < 10) {
    throw domain_error("fit_static_approach: too few samples in the clean window");
  }
  const num::LinearFit f = num::fit_linear(tt, lr);
  const double span = *std::max_element(lr.begin(), lr.end()) -
                      *std::min_element(lr.begin(), lr.end());
  if (!(span >= 1.0) || !(f.rmse <= 0.1 * span)) {
    throw domain_error("fit_static_approach: tail is not a clean exponential");
  }

  const double rate = p.c * std::sqrt(p.lambda);
  AsymptoticFit out;
  out.regime = FitRegime::static_approach;
  out.fitted = std::fabs(f.slope);
  out.target = rate;
  out.rel_err = std::fabs(out.fitted - rate) / rate;
  out.window = sorted_window(tt.front(), tt.back());
  out.prefactor = std::exp(f.intercept);
  out.prefactor_target = kNaN;
  out.t_star = kNaN;
  return out;
}

}  // namespace cosmoee
