#ifndef COSMOEE_DYNAMICS_HPP
#define COSMOEE_DYNAMICS_HPP

#include "cosmoee/eos.hpp"

namespace cosmoee {

// Background constants.  c and G must be positive; lambda may be any finite
// real here (the fate classifier additionally requires lambda >= 0).
struct CosmoParams {
  double c = 1.0;
  double G = 1.0;
  double lambda = 0.0;
};

inline CosmoParams natural_units(double lambda) { return {1.0, 1.0, lambda}; }

void validate(const CosmoParams& p);

// Point of the reduced phase space, restricted to a > 0, rho > 0.
struct State {
  double a = 1.0;
  double adot = 0.0;
  double rho = 1.0;
};

void validate(const State& s);

struct Derivatives {
  double da_dt = 0;
  double dadot_dt = 0;
  double drho_dt = 0;
};

// Scale-factor / density evolution:
//   da/dt    = adot
//   dadot/dt = (-4 pi G / 3 (rho + 3P/c^2) + c^2 lambda / 3) a
//   drho/dt  = -3 (rho + P/c^2) adot / a
Derivatives rhs(const CosmoParams& p, const Eos& eos, const State& s);

// Conserved along the flow: X = adot^2 - (8 pi G / 3 rho + c^2 lambda / 3) a^2.
double first_integral_x(const CosmoParams& p, const State& s);

// Curvature constant K = -X / c^2, fixed by the initial state.
double friedmann_k(const CosmoParams& p, const State& s);

// Conserved flattened mass content (4 pi / 3) a^3 K^{-3/2} rho_flat.
// Requires K > 0.
double flat_mass(const CosmoParams& p, const Eos& eos, const State& s);

// Signs of the quantities steering the fate analysis, with a zero band so the
// measure-zero equilibrium cases are detectable from constructed data:
//   past_crit = 4 pi G (rho + 3P/c^2) - c^2 lambda
//   cond_8    = past_crit >= 0   (deceleration criterion)
//   cond_Ex   = past_crit <= 0   (acceleration criterion)
//   cond_Esc  = K <= 0           (escape criterion)
struct ConditionFlags {
  double past_crit = 0;
  double K = 0;
  int past_crit_sign = 0;  // -1, 0, +1 after the zero band
  int k_sign = 0;
  int adot_sign = 0;
  bool cond_8 = false;
  bool cond_ex = false;
  bool cond_esc = false;
};

ConditionFlags condition_flags(const CosmoParams& p, const Eos& eos, const State& s,
                               double zero_band_rel = 1e-12);

}  // namespace cosmoee

#endif
