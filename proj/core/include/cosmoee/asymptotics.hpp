#ifndef COSMOEE_ASYMPTOTICS_HPP
#define COSMOEE_ASYMPTOTICS_HPP

#include <utility>

#include "cosmoee/integrator.hpp"

namespace cosmoee {

enum class FitRegime { bigbang_powerlaw, latetime_exponential, static_approach };

const char* to_string(FitRegime r);

struct AsymptoticFit {
  FitRegime regime = FitRegime::bigbang_powerlaw;
  double fitted = 0;   // exponent (power law) or rate (exponential regimes)
  double target = 0;   // theoretical value
  double rel_err = 0;  // |fitted - target| / |target|
  std::pair<double, double> window{0, 0};  // time window used, (lo, hi)
  double prefactor = 0;
  double prefactor_target = 0;  // NaN where no closed-form constant exists
  double t_star = 0;            // fitted singular time; NaN for non-singular regimes
};

struct FitPair {
  AsymptoticFit a_fit;
  AsymptoticFit rho_fit;
};

// Power-law fit of the blow-down tail against
//   a ~ (6 pi Gamma^2 G rho1)^{1/(3 Gamma)} (t - t_minus)^{2/(3 Gamma)}
//   rho ~ (t - t_minus)^{-2} / (6 pi Gamma^2 G)
// with rho1 estimated from rho a^{3 Gamma} on the innermost samples.
// Needs a trajectory that ran against a_min_stop with >= 2 decades of a in
// the window a < 100 * a_min_stop.
FitPair fit_bigbang(const Trajectory& traj, double Gamma, const CosmoParams& p);

// Log-linear fit of the exponential era against
//   a ~ a1 exp(c sqrt(lambda/3) t),  rho ~ rho1 a1^{-3} exp(-3 c sqrt(lambda/3) t);
// the rho law presumes pressure dies superlinearly at low density, so models
// keeping P proportional to rho decay faster (3 Gamma instead of 3) and will
// show a genuine residual against the reported target.
// Needs a forward run that reached a_max_stop with >= 3 e-folds past 10 * a0.
FitPair fit_latetime(const Trajectory& traj, const CosmoParams& p);

// Exponential approach (or departure, for reflected tails) of a to the
// equilibrium value abar = (4 pi G rho1 / (c^2 lambda))^{1/3}; the fitted
// |rate| is compared to c sqrt(lambda).  Rejects trajectories that never
// leave round-off distance of the equilibrium or do not settle into a clean
// exponential tail.
AsymptoticFit fit_static_approach(const Trajectory& traj, const CosmoParams& p);

}  // namespace cosmoee

#endif
