#include "cosmoee/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cosmoee/errors.hpp"
#include "cosmoee/num/fit.hpp"
#include "cosmoee/num/roots.hpp"

namespace cosmoee {

namespace {

using Vec = std::array<double, 3>;

// Dormand-Prince 5(4) pair, FSAL.
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kA71 = 35.0 / 384, kA73 = 500.0 / 1113, kA74 = 125.0 / 192,
                 kA75 = -2187.0 / 6784, kA76 = 11.0 / 84;
// b5 - b4, for the embedded error estimate.
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;
// Quartic dense-output weights.
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

struct DenseStep {
  double t0 = 0, h = 0;
  int dim = 0;
  Vec r1{}, r2{}, r3{}, r4{}, r5{};

  Vec eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    Vec y{};
    for (int i = 0; i < dim; ++i) {
      y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
    }
    return y;
  }
};

// Vector field in internal (always forward) time.  Backward runs are realized
// by reflecting adot once on entry and once more on readout.
struct System {
  const CosmoParams& p;
  const Eos& eos;
  IntegrationMode mode;
  double flat_a3 = 0;  // constrained-mode conserved value
  int dim = 3;

  bool recover_rho(double a, double& rho) const {
    if (!(a > 0) || !std::isfinite(a)) return false;
    try {
      rho = eos.rho_from_flat(flat_a3 / (a * a * a));
    } catch (const domain_error&) {
      return false;
    }
    return rho > 0 && std::isfinite(rho);
  }

  // Fills the full (a, adot, rho) state from an integration vector; returns
  // false outside the physical domain.
  bool unpack(const Vec& y, State& s) const {
    s.a = y[0];
    s.adot = y[1];
    if (mode == IntegrationMode::direct) {
      s.rho = y[2];
      if (!(s.a > 0) || !(s.rho > 0) || !std::isfinite(s.a) || !std::isfinite(s.rho) ||
          !std::isfinite(s.adot)) {
        return false;
      }
      return true;
    }
    if (!std::isfinite(s.adot)) return false;
    return recover_rho(s.a, s.rho);
  }

  bool deriv(const Vec& y, Vec& f) const {
    State s;
    if (!unpack(y, s)) return false;
    const Derivatives d = rhs(p, eos, s);
    f[0] = d.da_dt;
    f[1] = d.dadot_dt;
    if (mode == IntegrationMode::direct) f[2] = d.drho_dt;
    return std::isfinite(f[0]) && std::isfinite(f[1]) &&
           (mode == IntegrationMode::constrained || std::isfinite(f[2]));
  }
};

double error_norm(const System& sys, const Vec& y0, const Vec& y1, const Vec& err,
                  double rel_tol, double abs_tol) {
  double sum = 0;
  for (int i = 0; i < sys.dim; ++i) {
    const double sc = abs_tol + rel_tol * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
    sum += (err[i] / sc) * (err[i] / sc);
  }
  return std::sqrt(sum / sys.dim);
}

double initial_step(const System& sys, const Vec& y0, const Vec& f0, double T,
                    double rel_tol, double abs_tol) {
  double d0 = 0, d1 = 0;
  for (int i = 0; i < sys.dim; ++i) {
    const double sc = abs_tol + rel_tol * std::fabs(y0[i]);
    d0 += (y0[i] / sc) * (y0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / sys.dim);
  d1 = std::sqrt(d1 / sys.dim);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, T);

  Vec y1{}, f1{};
  double d2 = 0;
  for (int tries = 0; tries < 40; ++tries) {
    for (int i = 0; i < sys.dim; ++i) y1[i] = y0[i] + h0 * f0[i];
    if (sys.deriv(y1, f1)) {
      for (int i = 0; i < sys.dim; ++i) {
        const double sc = abs_tol + rel_tol * std::fabs(y0[i]);
        d2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
      }
      d2 = std::sqrt(d2 / sys.dim) / h0;
      break;
    }
    h0 *= 0.1;
  }
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  return std::max(std::min({100.0 * h0, h1, T}), 1e-300);
}

struct Recorder {
  const CosmoParams& p;
  const Eos& eos;
  const System& sys;
  Trajectory& out;
  double t_origin;  // external time at internal tau = 0
  int dir;

  void push(double tau, const State& internal_state) {
    Sample smp;
    smp.t = t_origin + dir * tau;
    smp.state = internal_state;
    smp.state.adot *= dir;
    smp.X = first_integral_x(p, smp.state);
    smp.flat_a3 = eos.rho_flat(smp.state.rho) * std::pow(smp.state.a, 3);
    if (!out.samples.empty() &&
        std::fabs(smp.t - out.samples.back().t) <=
            1e-15 * std::max(1.0, std::fabs(smp.t))) {
      return;  // collapse duplicate sample times
    }
    out.samples.push_back(smp);
  }

  void push_event(double tau, EventKind kind, const State& internal_state) {
    TrajectoryEvent ev;
    ev.t = t_origin + dir * tau;
    ev.kind = kind;
    ev.state = internal_state;
    ev.state.adot *= dir;
    out.events.push_back(ev);
  }
};

}  // namespace

Trajectory integrate(const CosmoParams& p, const Eos& eos, const State& s0,
                     std::pair<double, double> t_span, const IntegrationConfig& cfg) {
  validate(p);
  validate(s0);
  if (!(cfg.rel_tol > 0) || cfg.rel_tol > 1e-3) {
    throw domain_error("integrate: rel_tol must satisfy 0 < rel_tol <= 1e-3");
  }
  if (!(cfg.abs_tol > 0)) throw domain_error("integrate: abs_tol must be positive");
  if (cfg.max_steps < 1) throw domain_error("integrate: max_steps must be >= 1");

  const double a_min = cfg.a_min_stop > 0 ? cfg.a_min_stop : 1e-6 * s0.a;
  const double a_max = cfg.a_max_stop > 0 ? cfg.a_max_stop : 1e6 * s0.a;
  if (!(s0.a > a_min)) throw domain_error("integrate: initial a at or below a_min_stop");
  if (!(s0.a < a_max)) throw domain_error("integrate: initial a at or above a_max_stop");
  if (!(a_min < a_max)) throw domain_error("integrate: a_min_stop must be below a_max_stop");
  if (!(s0.rho < cfg.rho_max_stop)) {
    throw domain_error("integrate: initial rho at or above rho_max_stop");
  }

  const double t0 = t_span.first, t1 = t_span.second;
  const int dir = t1 >= t0 ? 1 : -1;
  const double T = std::fabs(t1 - t0);

  Trajectory out;
  out.direction = dir;
  out.t_start = t0;
  out.t_end = t0;
  out.a_min_stop = a_min;
  out.a_max_stop = a_max;

  System sys{p, eos, cfg.mode};
  sys.dim = cfg.mode == IntegrationMode::direct ? 3 : 2;
  if (cfg.mode == IntegrationMode::constrained) {
    sys.flat_a3 = eos.rho_flat(s0.rho) * s0.a * s0.a * s0.a;
  }

  Recorder rec{p, eos, sys, out, t0, dir};

  // Internal time tau >= 0 increases; adot is reflected for backward runs.
  Vec y{s0.a, dir * s0.adot, s0.rho};
  State s_int{s0.a, dir * s0.adot, s0.rho};
  rec.push(0.0, s_int);

  // Requested external sample times, converted to internal time.
  std::vector<double> want;
  const bool sparse = !cfg.record_times.empty();
  if (sparse) {
    for (double te : cfg.record_times) {
      const double tau = dir * (te - t0);
      if (tau > 0 && tau <= T) want.push_back(tau);
    }
    std::sort(want.begin(), want.end());
  }
  std::size_t want_next = 0;

  if (T == 0.0) return out;

  Vec f{};
  if (!sys.deriv(y, f)) throw domain_error("integrate: initial state outside domain");
  double tau = 0;
  double h = initial_step(sys, y, f, T, cfg.rel_tol, cfg.abs_tol);

  const double event_tol = 1e-10;
  long steps = 0;
  bool done = false;

  while (!done) {
    if (++steps > cfg.max_steps) {
      out.stop = StopReason::max_steps;
      break;
    }
    const double h_floor = 1e-14 * std::max(1.0, std::fabs(tau));
    if (tau + h > T) h = T - tau;
    if (h < h_floor) {
      out.stop = StopReason::singular_approach;
      out.singular_approach = true;
      break;
    }

    // Stage evaluations with domain guard; any failure rejects the step.
    Vec k1 = f, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, yt{}, y1{};
    bool ok = true;
    auto stage = [&](Vec& k, double frac, auto&&... terms) {
      (void)frac;
      for (int i = 0; i < sys.dim; ++i) {
        double acc = 0;
        ((acc += terms.first * terms.second[i]), ...);
        yt[i] = y[i] + h * acc;
      }
      return sys.deriv(yt, k);
    };
    ok = ok && stage(k2, kC2, std::pair{kA21, k1});
    ok = ok && stage(k3, kC3, std::pair{kA31, k1}, std::pair{kA32, k2});
    ok = ok && stage(k4, kC4, std::pair{kA41, k1}, std::pair{kA42, k2}, std::pair{kA43, k3});
    ok = ok && stage(k5, kC5, std::pair{kA51, k1}, std::pair{kA52, k2}, std::pair{kA53, k3},
                     std::pair{kA54, k4});
    ok = ok && stage(k6, 1.0, std::pair{kA61, k1}, std::pair{kA62, k2}, std::pair{kA63, k3},
                     std::pair{kA64, k4}, std::pair{kA65, k5});
    if (ok) {
      for (int i = 0; i < sys.dim; ++i) {
        y1[i] = y[i] + h * (kA71 * k1[i] + kA73 * k3[i] + kA74 * k4[i] + kA75 * k5[i] +
                            kA76 * k6[i]);
      }
      ok = sys.deriv(y1, k7);
    }
    if (!ok) {
      h *= 0.5;
      continue;
    }

    Vec err{};
    for (int i = 0; i < sys.dim; ++i) {
      err[i] = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] + kE6 * k6[i] +
                    kE7 * k7[i]);
    }
    const double en = error_norm(sys, y, y1, err, cfg.rel_tol, cfg.abs_tol);
    if (en > 1.0) {
      h *= std::clamp(0.9 * std::pow(en, -0.2), 0.2, 0.9);
      continue;
    }

    // Accepted: assemble the quartic interpolant for events and sampling.
    DenseStep ds;
    ds.t0 = tau;
    ds.h = h;
    ds.dim = sys.dim;
    for (int i = 0; i < sys.dim; ++i) {
      const double ydiff = y1[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      ds.r1[i] = y[i];
      ds.r2[i] = ydiff;
      ds.r3[i] = bspl;
      ds.r4[i] = ydiff - h * k7[i] - bspl;
      ds.r5[i] = h * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] + kD5 * k5[i] + kD6 * k6[i] +
                      kD7 * k7[i]);
    }
    const double tau1 = tau + h;

    auto a_of = [&](double tt) { return ds.eval(tt)[0]; };
    auto state_at = [&](double tt) {
      State s;
      if (!sys.unpack(ds.eval(tt), s)) {
        throw numeric_error("integrate: dense state left the domain inside an accepted step");
      }
      return s;
    };

    // Stop events: earliest crossing wins.
    double tau_stop = std::numeric_limits<double>::infinity();
    EventKind stop_kind = EventKind::a_min;
    auto consider = [&](double root, EventKind kind) {
      if (root < tau_stop) {
        tau_stop = root;
        stop_kind = kind;
      }
    };
    if (y[0] > a_min && y1[0] <= a_min) {
      consider(num::find_root([&](double tt) { return a_of(tt) - a_min; }, tau, tau1, 1e-15,
                              event_tol),
               EventKind::a_min);
    }
    if (y[0] < a_max && y1[0] >= a_max) {
      consider(num::find_root([&](double tt) { return a_of(tt) - a_max; }, tau, tau1, 1e-15,
                              event_tol),
               EventKind::a_max);
    }
    if (std::isfinite(cfg.rho_max_stop)) {
      const double r0 = cfg.mode == IntegrationMode::direct
                            ? y[2]
                            : state_at(tau).rho;
      const double r1v = cfg.mode == IntegrationMode::direct ? y1[2] : state_at(tau1).rho;
      if (r0 < cfg.rho_max_stop && r1v >= cfg.rho_max_stop) {
        consider(num::find_root(
                     [&](double tt) { return state_at(tt).rho - cfg.rho_max_stop; }, tau,
                     tau1, 1e-15, event_tol),
                 EventKind::rho_max);
      }
    }

    // Turning points (non-stop): require a genuine sign change well above
    // round-off so an equilibrium does not shed spurious events.
    {
      const double g0 = y[1], g1 = y1[1];
      const State sm = state_at(tau);
      const double vel_scale =
          sm.a * std::sqrt(8.0 * std::numbers::pi * p.G / 3.0 * sm.rho +
                           p.c * p.c * std::fabs(p.lambda) / 3.0);
      if (std::signbit(g0) != std::signbit(g1) &&
          std::max(std::fabs(g0), std::fabs(g1)) > 1e-13 * vel_scale) {
        const double te = num::find_root([&](double tt) { return ds.eval(tt)[1]; }, tau,
                                         tau1, 1e-15, event_tol);
        if (te < tau_stop) rec.push_event(te, EventKind::adot_zero, state_at(te));
      }
    }

    const bool stopping = std::isfinite(tau_stop);
    const double tau_new = stopping ? tau_stop : tau1;

    if (sparse) {
      while (want_next < want.size() && want[want_next] <= tau_new) {
        rec.push(want[want_next], state_at(want[want_next]));
        ++want_next;
      }
    }

    if (stopping) {
      const State se = state_at(tau_stop);
      rec.push(tau_stop, se);
      rec.push_event(tau_stop, stop_kind, se);
      out.stop = StopReason::event_stop;
      out.singular_approach =
          stop_kind == EventKind::a_min || stop_kind == EventKind::rho_max;
      tau = tau_stop;
      done = true;
      break;
    }

    tau = tau1;
    y = y1;
    f = k7;  // FSAL
    if (!sparse || tau >= T) {
      State s_now;
      sys.unpack(y, s_now);
      rec.push(tau, s_now);
    }

    if (tau >= T) {
      out.stop = StopReason::reached_t_end;
      break;
    }
    h *= std::clamp(0.9 * std::pow(std::max(en, 1e-10), -0.2), 0.2, 5.0);
  }

  if (sparse && out.stop != StopReason::event_stop && !out.samples.empty()) {
    // Ensure the final reached point is present even in sparse mode.
    State s_now;
    if (sys.unpack(y, s_now)) rec.push(tau, s_now);
  }

  out.t_end = t0 + dir * tau;
  return out;
}

SingularTimeEstimate estimate_singular_time(const Trajectory& traj, Direction direction) {
  if (direction == Direction::past && traj.direction != -1) {
    throw domain_error("estimate_singular_time: past estimate needs a backward trajectory");
  }
  if (direction == Direction::future && traj.direction != 1) {
    throw domain_error("estimate_singular_time: future estimate needs a forward trajectory");
  }
  if (!traj.singular_approach) {
    throw domain_error("estimate_singular_time: trajectory did not approach the singular edge");
  }

  // Times are flipped for the future direction so that in fit coordinates the
  // singularity always lies before the data.
  const double flip = direction == Direction::future ? -1.0 : 1.0;

  std::vector<double> tt, aa, tt_tight, aa_tight;
  for (const Sample& s : traj.samples) {
    if (s.state.a < 100.0 * traj.a_min_stop) {
      tt.push_back(flip * s.t);
      aa.push_back(s.state.a);
    }
    if (s.state.a < 10.0 * traj.a_min_stop) {
      tt_tight.push_back(flip * s.t);
      aa_tight.push_back(s.state.a);
    }
  }
  if (tt_tight.size() < 20) {
    throw domain_error("estimate_singular_time: fewer than 20 samples near the singular edge");
  }

  const Sample& last = traj.back();
  const double s_scale = last.state.a / std::max(std::fabs(last.state.adot), 1e-300);
  const num::PowerLawFit full = num::fit_power_law(tt, aa, 1e-3 * s_scale, 1e3 * s_scale);
  const num::PowerLawFit tight =
      num::fit_power_law(tt_tight, aa_tight, 1e-3 * s_scale, 1e3 * s_scale);

  SingularTimeEstimate est;
  est.direction = direction;
  est.t_star = flip * full.t_star;
  est.exponent = full.exponent;
  est.prefactor = full.prefactor;
  est.uncertainty = std::fabs(full.t_star - tight.t_star);
  return est;
}

double cross_check_modes(const CosmoParams& p, const Eos& eos, const State& s0,
                         std::pair<double, double> t_span, IntegrationConfig cfg) {
  cfg.record_times.clear();
  const int n_grid = 800;
  for (int i = 1; i <= n_grid; ++i) {
    cfg.record_times.push_back(t_span.first +
                               (t_span.second - t_span.first) * i / double(n_grid));
  }
  cfg.mode = IntegrationMode::direct;
  const Trajectory td = integrate(p, eos, s0, t_span, cfg);
  cfg.mode = IntegrationMode::constrained;
  const Trajectory tc = integrate(p, eos, s0, t_span, cfg);

  double dev = 0;
  const std::size_t n = std::min(td.samples.size(), tc.samples.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Sample& d = td.samples[i];
    const Sample& c = tc.samples[i];
    if (std::fabs(d.t - c.t) > 1e-9 * std::max(1.0, std::fabs(d.t))) break;
    dev = std::max(dev, std::fabs(d.state.a - c.state.a) /
                            std::max(d.state.a, c.state.a));
  }
  return dev;
}

}  // namespace cosmoee
