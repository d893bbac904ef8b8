#ifndef COSMOEE_INTEGRATOR_HPP
#define COSMOEE_INTEGRATOR_HPP

#include <limits>
#include <utility>
#include <vector>

#include "cosmoee/dynamics.hpp"
#include "cosmoee/eos.hpp"

namespace cosmoee {

// direct: integrate (a, adot, rho).
// constrained: integrate (a, adot) and recover rho from rho_flat * a^3 = const.
enum class IntegrationMode { direct, constrained };

struct IntegrationConfig {
  double rel_tol = 1e-10;  // 0 < rel_tol <= 1e-3
  double abs_tol = 1e-12;
  double a_min_stop = 0;   // 0 -> 1e-6 * a0
  double a_max_stop = 0;   // 0 -> 1e6 * a0
  double rho_max_stop = std::numeric_limits<double>::infinity();
  IntegrationMode mode = IntegrationMode::constrained;
  long max_steps = 500000;
  // When nonempty, sample only at these times (plus the run's first and last
  // point) instead of at every accepted step.  Times outside the span are
  // ignored.
  std::vector<double> record_times;
};

enum class EventKind { adot_zero, a_min, a_max, rho_max };

struct TrajectoryEvent {
  double t = 0;
  EventKind kind = EventKind::adot_zero;
  State state;
};

enum class StopReason { reached_t_end, event_stop, singular_approach, max_steps };

struct Sample {
  double t = 0;
  State state;
  double X = 0;        // first integral at the sample
  double flat_a3 = 0;  // rho_flat * a^3 at the sample
};

// Sample times are strictly monotone: increasing for forward runs, decreasing
// for backward ones.  All recorded states lie in the physical domain.
struct Trajectory {
  std::vector<Sample> samples;
  std::vector<TrajectoryEvent> events;
  StopReason stop = StopReason::reached_t_end;
  bool singular_approach = false;  // ended against a_min/rho_max or by step underflow
  int direction = 1;               // +1 forward in t, -1 backward
  double t_start = 0;
  double t_end = 0;
  double a_min_stop = 0;  // thresholds in effect for this run
  double a_max_stop = 0;

  const Sample& front() const { return samples.front(); }
  const Sample& back() const { return samples.back(); }
};

// Adaptive embedded Runge-Kutta 5(4) with dense output.  Halts at t1 or at
// the first stop event (a_min, a_max, rho_max), locating events to 1e-10 in t.
// t1 < t0 integrates the time-reflected system (a, -adot, rho) forward and
// maps the result back, so only one forward code path exists.
// Step-size underflow near a singularity returns the partial trajectory with
// stop == singular_approach.
Trajectory integrate(const CosmoParams& p, const Eos& eos, const State& s0,
                     std::pair<double, double> t_span, const IntegrationConfig& cfg = {});

enum class Direction { past, future };

struct SingularTimeEstimate {
  double t_star = 0;       // estimated existence-interval boundary
  Direction direction = Direction::past;
  double exponent = 0;     // p in a ~ C (t - t_star)^p
  double prefactor = 0;    // C
  double uncertainty = 0;  // split-window stability of t_star
};

// Power-law extrapolation of the blow-down time from the tail of a trajectory
// that ran against a_min_stop.  Needs >= 20 samples with a < 10 * a_min_stop;
// the fit uses samples with a < 100 * a_min_stop.
SingularTimeEstimate estimate_singular_time(const Trajectory& traj, Direction direction);

// Max relative deviation of a(t) between direct and constrained runs of the
// same problem on a shared time grid.
double cross_check_modes(const CosmoParams& p, const Eos& eos, const State& s0,
                         std::pair<double, double> t_span, IntegrationConfig cfg = {});

}  // namespace cosmoee

#endif
