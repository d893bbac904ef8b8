#include "cosmoee/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "cosmoee/errors.hpp"

namespace cosmoee {

namespace {
constexpr double kPi = std::numbers::pi;
}

void validate(const CosmoParams& p) {
  if (!(p.c > 0) || !std::isfinite(p.c)) throw domain_error("params: c must be positive");
  if (!(p.G > 0) || !std::isfinite(p.G)) throw domain_error("params: G must be positive");
  if (!std::isfinite(p.lambda)) throw domain_error("params: lambda must be finite");
}

void validate(const State& s) {
  if (!(s.a > 0) || !std::isfinite(s.a)) throw domain_error("state: a must be positive");
  if (!(s.rho > 0) || !std::isfinite(s.rho)) throw domain_error("state: rho must be positive");
  if (!std::isfinite(s.adot)) throw domain_error("state: adot must be finite");
}

Derivatives rhs(const CosmoParams& p, const Eos& eos, const State& s) {
  const double c2 = p.c * p.c;
  const double P = eos.pressure(s.rho);
  Derivatives d;
  d.da_dt = s.adot;
  d.dadot_dt = (-(4.0 * kPi * p.G / 3.0) * (s.rho + 3.0 * P / c2) + c2 * p.lambda / 3.0) * s.a;
  d.drho_dt = -3.0 * (s.rho + P / c2) * s.adot / s.a;
  return d;
}

double first_integral_x(const CosmoParams& p, const State& s) {
  const double c2 = p.c * p.c;
  return s.adot * s.adot -
         (8.0 * kPi * p.G / 3.0 * s.rho + c2 * p.lambda / 3.0) * s.a * s.a;
}

double friedmann_k(const CosmoParams& p, const State& s) {
  return -first_integral_x(p, s) / (p.c * p.c);
}

double flat_mass(const CosmoParams& p, const Eos& eos, const State& s) {
  const double K = friedmann_k(p, s);
  if (!(K > 0)) throw domain_error("flat_mass: requires positive curvature constant K");
  return (4.0 * kPi / 3.0) * s.a * s.a * s.a * std::pow(K, -1.5) * eos.rho_flat(s.rho);
}

ConditionFlags condition_flags(const CosmoParams& p, const Eos& eos, const State& s,
                               double zero_band_rel) {
  validate(p);
  validate(s);
  const double c2 = p.c * p.c;
  const double P = eos.pressure(s.rho);
  const double matter = 4.0 * kPi * p.G * (s.rho + 3.0 * P / c2);

  ConditionFlags f;
  f.past_crit = matter - c2 * p.lambda;
  f.K = friedmann_k(p, s);

  auto banded_sign = [zero_band_rel](double v, double scale) {
    if (std::fabs(v) <= zero_band_rel * scale) return 0;
    return v > 0 ? 1 : -1;
  };

  // Band scales: the larger of the two competing terms in each quantity.
  f.past_crit_sign = banded_sign(f.past_crit, std::max(matter, c2 * std::fabs(p.lambda)));
  const double energy = (8.0 * kPi * p.G / 3.0 * s.rho + c2 * std::fabs(p.lambda) / 3.0) *
                        s.a * s.a / c2;
  f.k_sign = banded_sign(f.K, std::max(energy, s.adot * s.adot / c2));
  f.adot_sign = banded_sign(s.adot, std::sqrt(energy * c2));

  f.cond_8 = f.past_crit_sign >= 0;
  f.cond_ex = f.past_crit_sign <= 0;
  f.cond_esc = f.k_sign <= 0;
  return f;
}

}  // namespace cosmoee
