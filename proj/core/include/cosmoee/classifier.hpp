#ifndef COSMOEE_CLASSIFIER_HPP
#define COSMOEE_CLASSIFIER_HPP

#include <string>
#include <vector>

#include "cosmoee/dynamics.hpp"
#include "cosmoee/integrator.hpp"

namespace cosmoee {

enum class PastLabel { BB, EC, AS, STATIC, UNKNOWN };
enum class FutureLabel { BC, EE, AS, STATIC, UNKNOWN };

const char* to_string(PastLabel l);
const char* to_string(FutureLabel l);

// Fate of a universe from initial data.  t_minus / t_plus are finite fitted
// singular times for BB/BC, +-infinity for the eternal outcomes, NaN when the
// side is UNKNOWN.  evidence names the algebraic criterion that licensed a
// label ("deceleration-criterion", "acceleration-criterion",
// "escape-criterion", "static-equilibrium") or "numerical" when integration
// alone decided; "(time-reflected)" marks decisions reached on the reflected
// solution.
struct ScenarioReport {
  double K = 0;
  ConditionFlags flags;
  PastLabel past = PastLabel::UNKNOWN;
  FutureLabel future = FutureLabel::UNKNOWN;
  double t_minus = 0;
  double t_plus = 0;
  std::string past_evidence;
  std::string future_evidence;
  std::string composite;  // e.g. "BB ↗↘ BC", "STATIC"
};

struct ClassifyConfig {
  IntegrationConfig integration;  // tolerances and stops for the decision runs
  double zero_band_rel = 1e-12;   // sign band for the algebraic criteria
  // A trajectory whose |adot| / (omega a) and |addot| / (omega^2 a) both dip
  // below this band (omega = c sqrt(lambda)) has hit the static saddle; the
  // side beyond the dip is labelled an equilibrium approach.  The default sits
  // above the integrator's own wander at the saddle (the turning acceleration
  // of separatrix data bottoms out near 5e-6 at the default tolerances) and
  // below the shallowest dip of a decidably-off-separatrix orbit (a relative
  // energy offset of 1e-8 already dips no lower than 8e-5).
  double equilibrium_band = 2e-5;
  double plateau_rel = 1e-9;  // flatness rate for runs that exhaust the horizon
};

// Decision procedure: algebraic criteria first (deceleration -> past BB,
// K <= 0 -> past BB and future EE, acceleration -> future EE, all for
// adot0 > 0 and models satisfying the required slope bounds / high-density
// linearity), the contracting case by time reflection, the exact equilibrium
// as STATIC, and every remaining gap by integration with stop events.
// Integration is also used to fit finite t_minus / t_plus and to count
// turning points for the composite label.  UNKNOWN appears only if a
// decision run exhausts max_steps without any stop event.
// Requires lambda >= 0.
ScenarioReport classify(const CosmoParams& p, const Eos& eos, const State& s0,
                        const ClassifyConfig& cfg = {});

struct StabilityProbe {
  double growth_rate = 0;  // fitted exponential rate of |a - abar|
  double target = 0;       // c sqrt(lambda)
  double rel_err = 0;
  double drift = 0;        // max |a - abar| / abar (the whole run)
};

// Perturbs the dust equilibrium (abar = 1, rhobar = c^2 lambda / (4 pi G))
// with adot0 = epsilon and fits the departure rate over the linear window
// |a - abar| <= 1e-4 abar, correcting for the sinh shape of the kick.
// epsilon = 0 reports zero rate and the round-off drift.  |epsilon| too
// large for three usable e-folds under the cap is rejected.
StabilityProbe stability_probe(const CosmoParams& p, const Eos& eos, double epsilon);

struct FateScanRow {
  double adot0 = 0;
  std::string composite;
};

struct FateScan {
  std::vector<FateScanRow> rows;
  // Single transition contraction -> escape on the future side and
  // collapse -> eternal on the past side as adot0 increases.
  bool monotone = true;
};

// Classifies a grid of adot0 values (>= 10 of them, spanning both signs) at
// fixed a0, rho0.
FateScan fate_boundary_scan(const CosmoParams& p, const Eos& eos, double a0, double rho0,
                            std::vector<double> adot0_grid,
                            const ClassifyConfig& cfg = {});

}  // namespace cosmoee

#endif
