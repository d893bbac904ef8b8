#include "cosmoee/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "cosmoee/errors.hpp"
#include "cosmoee/num/fit.hpp"

namespace cosmoee {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Far horizon for decision runs.  Every fate either triggers a stop event or
// settles onto the static solution long before this, so UNKNOWN can only come
// from max_steps.
constexpr double kHorizon = 1e300;

enum class Arrows { up, down, updown, downup };

const char* arrow_str(Arrows a) {
  switch (a) {
    case Arrows::up: return "↗";
    case Arrows::down: return "↘";
    case Arrows::updown: return "↗↘";
    case Arrows::downup: return "↘↗";
  }
  return "?";
}

// Shape of the time-reflected trajectory: monotone legs flip, one-turn
// shapes are reflection symmetric.
Arrows mirror(Arrows a) {
  switch (a) {
    case Arrows::up: return Arrows::down;
    case Arrows::down: return Arrows::up;
    default: return a;
  }
}

std::string compose(PastLabel past, Arrows a, FutureLabel future) {
  if (past == PastLabel::STATIC && future == FutureLabel::STATIC) return "STATIC";
  return std::string(to_string(past)) + " " + arrow_str(a) + " " + to_string(future);
}

// The algebraic shortcuts presume slope bounds 0 <= dP/drho < c^2 at all
// densities and, for the escape conclusions, a linear high-density regime.
// The polytropic tail violates both above its causal density, so its fates
// are decided by integration alone.
bool structural_assumptions_hold(EosKind k) { return k != EosKind::polytropic_tail; }

struct RunOutcome {
  enum class Kind { collapse, escape, plateau, blowup, exhausted };
  Kind kind = Kind::exhausted;
  double t_sing = kNaN;  // fitted boundary of existence, collapse only
  bool turned = false;   // adot changed sign before any equilibrium dip
};

double robust_singular_time(const Trajectory& tr, Direction side, double fallback) {
  try {
    return estimate_singular_time(tr, side).t_star;
  } catch (const domain_error&) {
    return fallback;  // too few edge samples; the stop time is a lower bound
  }
}

// Flatness of the trailing quarter of a run that exhausted the horizon.
bool rate_plateau(const Trajectory& tr, const CosmoParams& p, const ClassifyConfig& cfg) {
  if (!(p.lambda > 0) || tr.samples.size() < 8) return false;
  const std::size_t n = tr.samples.size();
  const std::size_t i0 = n - n / 4 - 1;
  double lo = kInf, hi = -kInf;
  for (std::size_t i = i0; i < n; ++i) {
    lo = std::min(lo, tr.samples[i].state.a);
    hi = std::max(hi, tr.samples[i].state.a);
  }
  const double dt = std::fabs(tr.samples[n - 1].t - tr.samples[i0].t);
  const double w = p.c * std::sqrt(p.lambda);
  return (hi - lo) / (0.5 * (lo + hi)) <= cfg.plateau_rel * std::max(1.0, w * dt);
}

RunOutcome analyze_run(const Trajectory& tr, const CosmoParams& p, const Eos& eos,
                       Direction side, const ClassifyConfig& cfg, bool label_decided) {
  RunOutcome out;

  // Saddle dip: |adot| and the acceleration both vanish near the static
  // radius.  An ordinary turning point only zeroes the first.  A leg whose
  // label is already fixed by an algebraic criterion cannot end in the
  // equilibrium approach, so the probe (which integrator noise can trip at
  // the saddle) is skipped and the concrete outcome kept.
  double t_dip = kNaN;
  if (p.lambda > 0 && !label_decided) {
    const double w = p.c * std::sqrt(p.lambda);
    auto probe_dip = [&](const State& st, double t) {
      const double vel = std::fabs(st.adot) / (w * st.a);
      const double crit = 4.0 * std::numbers::pi * p.G *
                              (st.rho + 3.0 * eos.pressure(st.rho) / (p.c * p.c)) -
                          p.c * p.c * p.lambda;
      const double acc = std::fabs(crit) / (3.0 * w * w);
      if (vel < cfg.equilibrium_band && acc < cfg.equilibrium_band) {
        if (!std::isfinite(t_dip) || (t - t_dip) * tr.direction < 0) t_dip = t;
      }
    };
    for (const Sample& s : tr.samples) {
      probe_dip(s.state, s.t);
      if (std::isfinite(t_dip)) break;
    }
    // The stepper can stride across a shallow dip, but a turning point inside
    // it is still located by root-finding, so test those too.
    for (const TrajectoryEvent& ev : tr.events) {
      if (ev.kind == EventKind::adot_zero) probe_dip(ev.state, ev.t);
    }
  }

  for (const TrajectoryEvent& ev : tr.events) {
    if (ev.kind != EventKind::adot_zero) continue;
    if (std::isfinite(t_dip) && (ev.t - t_dip) * tr.direction >= 0) continue;
    out.turned = true;
  }

  if (std::isfinite(t_dip)) {
    out.kind = RunOutcome::Kind::plateau;
    return out;
  }

  switch (tr.stop) {
    case StopReason::event_stop: {
      const TrajectoryEvent& ev = tr.events.back();  // the stop event is last
      if (ev.kind == EventKind::a_max) {
        out.kind = RunOutcome::Kind::escape;
      } else if (ev.kind == EventKind::a_min || ev.state.a <= 10.0 * tr.a_min_stop) {
        out.kind = RunOutcome::Kind::collapse;
        out.t_sing = robust_singular_time(tr, side, ev.t);
      } else {
        out.kind = RunOutcome::Kind::blowup;  // rho_max at a scale factor of order one
      }
      return out;
    }
    case StopReason::singular_approach: {
      const Sample& last = tr.back();
      if (last.state.a <= 10.0 * tr.a_min_stop) {
        out.kind = RunOutcome::Kind::collapse;
        out.t_sing = robust_singular_time(tr, side, last.t);
      } else {
        // Step underflow at a scale factor of order one is the density wall
        // of a saturating eos, not a collapse.
        out.kind = RunOutcome::Kind::blowup;
      }
      return out;
    }
    case StopReason::reached_t_end:
      if (rate_plateau(tr, p, cfg)) out.kind = RunOutcome::Kind::plateau;
      return out;
    case StopReason::max_steps:
      return out;
  }
  return out;
}

struct CoreResult {
  ScenarioReport rep;
  Arrows arrows = Arrows::up;
};

// Classification with adot0 >= 0; the contracting case is reflected before
// entry.
CoreResult classify_core(const CosmoParams& p, const Eos& eos, const State& s0,
                         const ClassifyConfig& cfg, const ConditionFlags& flags) {
  CoreResult res;
  ScenarioReport& rep = res.rep;
  rep.K = flags.K;
  rep.flags = flags;

  if (flags.adot_sign == 0 && flags.past_crit_sign == 0) {
    rep.past = PastLabel::STATIC;
    rep.future = FutureLabel::STATIC;
    rep.t_minus = -kInf;
    rep.t_plus = kInf;
    rep.past_evidence = "static-equilibrium";
    rep.future_evidence = "static-equilibrium";
    rep.composite = "STATIC";
    return res;
  }

  bool past_decided = false;
  bool future_decided = false;
  if (flags.adot_sign > 0 && structural_assumptions_hold(eos.kind())) {
    if (flags.cond_8) {
      rep.past = PastLabel::BB;
      rep.past_evidence = "deceleration-criterion";
      past_decided = true;
    }
    if (flags.cond_esc) {
      if (!past_decided) {
        rep.past = PastLabel::BB;
        rep.past_evidence = "escape-criterion";
        past_decided = true;
      }
      rep.future = FutureLabel::EE;
      rep.future_evidence = "escape-criterion";
      future_decided = true;
    }
    if (!future_decided && flags.cond_ex) {
      rep.future = FutureLabel::EE;
      rep.future_evidence = "acceleration-criterion";
      future_decided = true;
    }
  }

  IntegrationConfig icfg = cfg.integration;
  icfg.record_times.clear();
  if (eos.kind() == EosKind::polytropic_tail) {
    // The flattened density saturates for this kind, so constrained recovery
    // has no inverse past the saturation point; its density also genuinely
    // blows up at positive a, which the rho guard must catch.
    icfg.mode = IntegrationMode::direct;
    if (!std::isfinite(icfg.rho_max_stop)) icfg.rho_max_stop = 1e24 * s0.rho;
  }

  const Trajectory back = integrate(p, eos, s0, {0.0, -kHorizon}, icfg);
  const RunOutcome ob = analyze_run(back, p, eos, Direction::past, cfg, past_decided);

  // An expanding solution already known to escape cannot turn, so the
  // forward run adds nothing.
  RunOutcome of;
  bool ran_forward = false;
  if (!(future_decided && flags.adot_sign > 0)) {
    const Trajectory fwd = integrate(p, eos, s0, {0.0, kHorizon}, icfg);
    of = analyze_run(fwd, p, eos, Direction::future, cfg, future_decided);
    ran_forward = true;
  }

  if (!past_decided) {
    switch (ob.kind) {
      case RunOutcome::Kind::collapse:
        rep.past = PastLabel::BB;
        break;
      case RunOutcome::Kind::escape:
        rep.past = PastLabel::EC;
        break;
      case RunOutcome::Kind::plateau:
        rep.past = PastLabel::AS;
        break;
      case RunOutcome::Kind::blowup:
      case RunOutcome::Kind::exhausted:
        rep.past = PastLabel::UNKNOWN;
        break;
    }
    rep.past_evidence = ob.kind == RunOutcome::Kind::blowup
                            ? "numerical (density blow-up at finite scale factor)"
                            : "numerical";
  }
  if (!future_decided) {
    switch (of.kind) {
      case RunOutcome::Kind::collapse:
        rep.future = FutureLabel::BC;
        break;
      case RunOutcome::Kind::escape:
        rep.future = FutureLabel::EE;
        break;
      case RunOutcome::Kind::plateau:
        rep.future = FutureLabel::AS;
        break;
      case RunOutcome::Kind::blowup:
      case RunOutcome::Kind::exhausted:
        rep.future = FutureLabel::UNKNOWN;
        break;
    }
    rep.future_evidence = of.kind == RunOutcome::Kind::blowup
                              ? "numerical (density blow-up at finite scale factor)"
                              : "numerical";
  }

  rep.t_minus = rep.past == PastLabel::BB
                    ? (ob.kind == RunOutcome::Kind::collapse ? ob.t_sing : kNaN)
                    : (rep.past == PastLabel::UNKNOWN ? kNaN : -kInf);
  rep.t_plus = rep.future == FutureLabel::BC
                   ? (ran_forward && of.kind == RunOutcome::Kind::collapse ? of.t_sing : kNaN)
                   : (rep.future == FutureLabel::UNKNOWN ? kNaN : kInf);

  if (flags.adot_sign == 0) {
    res.arrows = flags.past_crit_sign > 0 ? Arrows::updown : Arrows::downup;
  } else if (ran_forward && of.turned) {
    res.arrows = Arrows::updown;
  } else if (ob.turned) {
    res.arrows = Arrows::downup;
  } else {
    res.arrows = Arrows::up;
  }
  rep.composite = compose(rep.past, res.arrows, rep.future);
  return res;
}

PastLabel mirror_past(FutureLabel f) {
  switch (f) {
    case FutureLabel::BC: return PastLabel::BB;
    case FutureLabel::EE: return PastLabel::EC;
    case FutureLabel::AS: return PastLabel::AS;
    case FutureLabel::STATIC: return PastLabel::STATIC;
    case FutureLabel::UNKNOWN: return PastLabel::UNKNOWN;
  }
  return PastLabel::UNKNOWN;
}

FutureLabel mirror_future(PastLabel p) {
  switch (p) {
    case PastLabel::BB: return FutureLabel::BC;
    case PastLabel::EC: return FutureLabel::EE;
    case PastLabel::AS: return FutureLabel::AS;
    case PastLabel::STATIC: return FutureLabel::STATIC;
    case PastLabel::UNKNOWN: return FutureLabel::UNKNOWN;
  }
  return FutureLabel::UNKNOWN;
}

int past_code(PastLabel l) {
  switch (l) {
    case PastLabel::EC: return 0;
    case PastLabel::AS:
    case PastLabel::STATIC: return 1;
    case PastLabel::BB: return 2;
    case PastLabel::UNKNOWN: return -1;
  }
  return -1;
}

int future_code(FutureLabel l) {
  switch (l) {
    case FutureLabel::BC: return 0;
    case FutureLabel::AS:
    case FutureLabel::STATIC: return 1;
    case FutureLabel::EE: return 2;
    case FutureLabel::UNKNOWN: return -1;
  }
  return -1;
}

}  // namespace

const char* to_string(PastLabel l) {
  switch (l) {
    case PastLabel::BB: return "BB";
    case PastLabel::EC: return "EC";
    case PastLabel::AS: return "AS";
    case PastLabel::STATIC: return "STATIC";
    case PastLabel::UNKNOWN: return "UNKNOWN";
  }
  return "UNKNOWN";
}

const char* to_string(FutureLabel l) {
  switch (l) {
    case FutureLabel::BC: return "BC";
    case FutureLabel::EE: return "EE";
    case FutureLabel::AS: return "AS";
    case FutureLabel::STATIC: return "STATIC";
    case FutureLabel::UNKNOWN: return "UNKNOWN";
  }
  return "UNKNOWN";
}

ScenarioReport classify(const CosmoParams& p, const Eos& eos, const State& s0,
                        const ClassifyConfig& cfg) {
  validate(p);
  validate(s0);
  if (p.lambda < 0) throw domain_error("classify: lambda must be nonnegative");

  const ConditionFlags flags = condition_flags(p, eos, s0, cfg.zero_band_rel);
  if (flags.adot_sign >= 0) {
    return classify_core(p, eos, s0, cfg, flags).rep;
  }

  // Contracting data: classify the reflected solution and swap the ends.
  const State refl{s0.a, -s0.adot, s0.rho};
  const ConditionFlags rflags = condition_flags(p, eos, refl, cfg.zero_band_rel);
  const CoreResult co = classify_core(p, eos, refl, cfg, rflags);

  ScenarioReport rep;
  rep.K = flags.K;
  rep.flags = flags;
  rep.past = mirror_past(co.rep.future);
  rep.future = mirror_future(co.rep.past);
  rep.t_minus = -co.rep.t_plus;
  rep.t_plus = -co.rep.t_minus;
  rep.past_evidence = co.rep.future_evidence + " (time-reflected)";
  rep.future_evidence = co.rep.past_evidence + " (time-reflected)";
  rep.composite = compose(rep.past, mirror(co.arrows), rep.future);
  return rep;
}

StabilityProbe stability_probe(const CosmoParams& p, const Eos& eos, double epsilon) {
  validate(p);
  if (!(p.lambda > 0)) throw domain_error("stability_probe: requires lambda > 0");
  if (eos.kind() != EosKind::dust) {
    throw domain_error("stability_probe: the static background is defined for dust");
  }
  if (!std::isfinite(epsilon)) throw domain_error("stability_probe: epsilon must be finite");

  const double c2 = p.c * p.c;
  const double omega = p.c * std::sqrt(p.lambda);
  const double abar = 1.0;
  const double rhobar = c2 * p.lambda / (4.0 * std::numbers::pi * p.G);
  const State s0{abar, epsilon, rhobar};

  StabilityProbe out;
  out.target = omega;

  IntegrationConfig cfg;
  if (epsilon == 0.0) {
    const double t_end = 10.0 / omega;
    const Trajectory tr = integrate(p, eos, s0, {0.0, t_end}, cfg);
    for (const Sample& s : tr.samples) {
      out.drift = std::max(out.drift, std::fabs(s.state.a - abar) / abar);
    }
    return out;
  }

  // Linear departure from the saddle: a - abar = (epsilon/omega) sinh(omega t).
  // The decaying mode is removed analytically below, so the fit window may
  // open at omega t = 0.5; it still needs three e-folds of headroom under the
  // linearity cap.
  const double r0 = std::fabs(epsilon) / omega;
  const double cap = 1e-4 * abar;
  const double x0 = 0.5;
  if (std::log(cap / r0) - x0 < 3.0) {
    throw domain_error("stability_probe: epsilon too large for a linear growth window");
  }
  const double t_end = (std::log(cap / r0) + 1.0) / omega;
  const int n_grid = 400;
  for (int i = 1; i <= n_grid; ++i) cfg.record_times.push_back(t_end * i / n_grid);

  const Trajectory tr = integrate(p, eos, s0, {0.0, t_end}, cfg);
  std::vector<double> tt, lr;
  for (const Sample& s : tr.samples) {
    const double r = std::fabs(s.state.a - abar);
    out.drift = std::max(out.drift, r / abar);
    if (omega * s.t >= x0 && r > 0 && r <= cap) {
      tt.push_back(s.t);
      lr.push_back(std::log(r));
    }
  }
  if (tt.size() < 5) {
    throw numeric_error("stability_probe: too few samples in the linear window");
  }

  // ln sinh(w t) = w t + ln(1 - exp(-2 w t)); peel the second term off with
  // the current rate estimate and refit.  Two corrected passes push the
  // window-start bias below the fit's own noise.
  double rate = num::fit_linear(tt, lr).slope;
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<double> adj(tt.size());
    for (std::size_t i = 0; i < tt.size(); ++i) {
      adj[i] = lr[i] - std::log1p(-std::exp(-2.0 * rate * tt[i]));
    }
    rate = num::fit_linear(tt, adj).slope;
  }
  out.growth_rate = rate;
  out.rel_err = std::fabs(out.growth_rate - omega) / omega;
  return out;
}

FateScan fate_boundary_scan(const CosmoParams& p, const Eos& eos, double a0, double rho0,
                            std::vector<double> adot0_grid, const ClassifyConfig& cfg) {
  if (adot0_grid.size() < 10) {
    throw domain_error("fate_boundary_scan: need at least 10 adot0 values");
  }
  std::sort(adot0_grid.begin(), adot0_grid.end());
  if (!(adot0_grid.front() < 0.0) || !(adot0_grid.back() > 0.0)) {
    throw domain_error("fate_boundary_scan: grid must span both signs of adot0");
  }

  FateScan scan;
  int prev_past = -1, prev_future = -1;
  for (double v : adot0_grid) {
    const ScenarioReport rep = classify(p, eos, {a0, v, rho0}, cfg);
    scan.rows.push_back({v, rep.composite});
    const int pc = past_code(rep.past);
    const int fc = future_code(rep.future);
    if (pc >= 0) {
      if (pc < prev_past) scan.monotone = false;
      prev_past = std::max(prev_past, pc);
    }
    if (fc >= 0) {
      if (fc < prev_future) scan.monotone = false;
      prev_future = std::max(prev_future, fc);
    }
  }
  return scan;
}

}  // namespace cosmoee
