#include "cosmoee/eos.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "cosmoee/errors.hpp"
#include "cosmoee/num/fit.hpp"
#include "cosmoee/num/quad.hpp"
#include "cosmoee/num/roots.hpp"

namespace cosmoee {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool ok, const char* msg) {
  if (!ok) throw domain_error(msg);
}

double parse_number(std::string_view tok) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw std::invalid_argument("eos: malformed numeric field '" + std::string(tok) + "'");
  }
  return v;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Eos Eos::dust(double c) {
  require(c > 0, "eos: light speed must be positive");
  Eos e;
  e.kind_ = EosKind::dust;
  e.c_ = c;
  return e;
}

Eos Eos::gamma_law(double Gamma, double c) {
  require(c > 0, "eos: light speed must be positive");
  require(Gamma >= 1.0 && Gamma < 2.0, "eos: gamma_law requires 1 <= Gamma < 2");
  Eos e;
  e.kind_ = EosKind::gamma_law;
  e.c_ = c;
  e.Gamma_ = Gamma;
  return e;
}

Eos Eos::polytropic_tail(double gamma, double coef, double c) {
  require(c > 0, "eos: light speed must be positive");
  require(gamma > 1.0, "eos: polytropic_tail requires gamma > 1");
  require(coef > 0.0, "eos: polytropic_tail requires coef > 0");
  Eos e;
  e.kind_ = EosKind::polytropic_tail;
  e.c_ = c;
  e.gamma_ = gamma;
  e.coef_ = coef;
  return e;
}

Eos Eos::neutron_fermi(double amplitude, double c) {
  require(c > 0, "eos: light speed must be positive");
  require(amplitude > 0, "eos: neutron_fermi requires a positive amplitude");
  Eos e;
  e.kind_ = EosKind::neutron_fermi;
  e.c_ = c;
  e.A_ = amplitude;
  return e;
}

Eos Eos::parse(std::string_view spec, double c) {
  std::vector<std::string_view> tok;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = spec.find(':', pos);
    tok.push_back(spec.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (tok[0] == "dust" && tok.size() == 1) return dust(c);
  if (tok[0] == "gamma" && tok.size() == 2) return gamma_law(parse_number(tok[1]), c);
  if (tok[0] == "poly" && tok.size() == 3) {
    return polytropic_tail(parse_number(tok[1]), parse_number(tok[2]), c);
  }
  if (tok[0] == "neutron" && tok.size() == 2) return neutron_fermi(parse_number(tok[1]), c);
  throw std::invalid_argument(
      "eos: expected 'dust', 'gamma:<G>', 'poly:<gamma>:<coef>' or 'neutron:<A>', got '" +
      std::string(spec) + "'");
}

std::string Eos::spec_string() const {
  switch (kind_) {
    case EosKind::dust:
      return "dust";
    case EosKind::gamma_law:
      return "gamma:" + format_number(Gamma_);
    case EosKind::polytropic_tail:
      return "poly:" + format_number(gamma_) + ":" + format_number(coef_);
    case EosKind::neutron_fermi:
      return "neutron:" + format_number(A_);
  }
  return {};
}

double Eos::pressure(double rho) const {
  require(rho >= 0, "eos: density must be nonnegative");
  switch (kind_) {
    case EosKind::dust:
      return 0.0;
    case EosKind::gamma_law:
      return (Gamma_ - 1.0) * c_ * c_ * rho;
    case EosKind::polytropic_tail:
      return coef_ * std::pow(rho, gamma_);
    case EosKind::neutron_fermi:
      return pressure_of(fermi_momentum(rho));
  }
  return 0.0;
}

double Eos::dp_drho(double rho) const {
  require(rho >= 0, "eos: density must be nonnegative");
  switch (kind_) {
    case EosKind::dust:
      return 0.0;
    case EosKind::gamma_law:
      return (Gamma_ - 1.0) * c_ * c_;
    case EosKind::polytropic_tail:
      return coef_ * gamma_ * std::pow(rho, gamma_ - 1.0);
    case EosKind::neutron_fermi: {
      // Ratio of the two integrands at the Fermi surface: c^2 z^2 / (3 (1 + z^2)).
      const double z = fermi_momentum(rho).zeta;
      return c_ * c_ * z * z / (3.0 * (1.0 + z * z));
    }
  }
  return 0.0;
}

double Eos::rho_of(FermiParam zeta) const {
  require(kind_ == EosKind::neutron_fermi, "eos: Fermi parametrisation needs neutron_fermi");
  require(zeta.zeta >= 0, "eos: Fermi momentum must be nonnegative");
  const double z = zeta.zeta;
  if (z == 0.0) return 0.0;
  const double integral =
      num::integrate([](double q) { return q * q * std::sqrt(1.0 + q * q); }, 0.0, z, 1e-13);
  return 3.0 * A_ * c_ * c_ * c_ * integral;
}

double Eos::pressure_of(FermiParam zeta) const {
  require(kind_ == EosKind::neutron_fermi, "eos: Fermi parametrisation needs neutron_fermi");
  require(zeta.zeta >= 0, "eos: Fermi momentum must be nonnegative");
  const double z = zeta.zeta;
  if (z == 0.0) return 0.0;
  const double integral = num::integrate(
      [](double q) { return q * q * q * q / std::sqrt(1.0 + q * q); }, 0.0, z, 1e-13);
  return A_ * std::pow(c_, 5) * integral;
}

FermiParam Eos::fermi_momentum(double rho) const {
  require(kind_ == EosKind::neutron_fermi, "eos: Fermi parametrisation needs neutron_fermi");
  require(rho >= 0, "eos: density must be nonnegative");
  if (rho == 0.0) return {0.0};
  const double scale = A_ * c_ * c_ * c_;
  // Limiting forms rho ~ A c^3 z^3 (z small) and rho ~ (3/4) A c^3 z^4 (z large)
  // bracket the inverse well.
  const double guess = std::max(std::cbrt(rho / scale), std::pow(4.0 * rho / (3.0 * scale), 0.25));
  double hi = num::expand_upper_bracket(
      [&](double z) { return rho_of(FermiParam{z}); }, 2.0 * guess + 1e-6, rho);
  const double z = num::newton_bracketed(
      [&](double x) {
        const double f = rho_of(FermiParam{x}) - rho;
        const double df = 3.0 * scale * x * x * std::sqrt(1.0 + x * x);
        return std::pair{f, df};
      },
      std::min(guess, hi), 1e-12 * guess, hi);
  return {z};
}

double Eos::rho_flat(double rho) const {
  require(rho >= 0, "eos: density must be nonnegative");
  switch (kind_) {
    case EosKind::dust:
      return rho;
    case EosKind::gamma_law:
      // Normalised at rho = 1; the zero-density anchor diverges for Gamma > 1.
      return std::pow(rho, 1.0 / Gamma_);
    case EosKind::polytropic_tail:
      return rho * std::pow(1.0 + coef_ * std::pow(rho, gamma_ - 1.0) / (c_ * c_),
                            -1.0 / (gamma_ - 1.0));
    case EosKind::neutron_fermi: {
      if (rho == 0.0) return 0.0;
      return rho_flat_of_zeta(fermi_momentum(rho).zeta);
    }
  }
  return rho;
}

double Eos::rho_flat_of_zeta(double z) const {
  if (z == 0.0) return 0.0;
  // log(rho_flat/rho) = integral of w from 0 to z; w is smooth with
  // w -> -(3/5) q near q = 0, so the quadrature sees no endpoint singularity.
  auto w = [&](double q) {
    if (q == 0.0) return 0.0;
    const double r = rho_of(FermiParam{q});
    const double p = pressure_of(FermiParam{q});
    const double drdq = 3.0 * A_ * std::pow(c_, 3) * q * q * std::sqrt(1.0 + q * q);
    return -drdq * p / (c_ * c_ * r * (r + p / (c_ * c_)));
  };
  return rho_of(FermiParam{z}) * std::exp(num::integrate(w, 0.0, z, 1e-12));
}

double Eos::rho_from_flat(double flat) const {
  require(flat >= 0, "eos: flattened density must be nonnegative");
  switch (kind_) {
    case EosKind::dust:
      return flat;
    case EosKind::gamma_law:
      return std::pow(flat, Gamma_);
    case EosKind::polytropic_tail: {
      if (flat == 0.0) return 0.0;
      // rho_flat saturates at (c^2/coef)^{1/(gamma-1)} as rho -> infinity.
      const double sup = std::pow(c_ * c_ / coef_, 1.0 / (gamma_ - 1.0));
      if (flat >= sup) {
        throw domain_error("eos: flattened density at or above the polytrope supremum");
      }
      double hi = num::expand_upper_bracket(
          [&](double r) { return rho_flat(r); }, 2.0 * flat, flat);
      return num::newton_bracketed(
          [&](double r) {
            const double rf = rho_flat(r);
            const double drf = rf / (r + pressure(r) / (c_ * c_));
            return std::pair{rf - flat, drf};
          },
          std::min(2.0 * flat, hi), flat, hi);
    }
    case EosKind::neutron_fermi: {
      if (flat == 0.0) return 0.0;
      auto flat_of_z = [&](double z) { return rho_flat_of_zeta(z); };
      const double guess = std::cbrt(flat / (A_ * std::pow(c_, 3)));
      double hi = num::expand_upper_bracket(flat_of_z, 2.0 * guess + 1e-6, flat);
      const double z = num::newton_bracketed(
          [&](double x) {
            const double r = rho_of(FermiParam{x});
            const double pz = pressure_of(FermiParam{x});
            const double rf = rho_flat_of_zeta(x);
            const double drdz = 3.0 * A_ * std::pow(c_, 3) * x * x * std::sqrt(1.0 + x * x);
            return std::pair{rf - flat, rf * drdz / (r + pz / (c_ * c_))};
          },
          std::min(guess, hi), 1e-12 * guess, hi);
      return rho_of(FermiParam{z});
    }
  }
  return flat;
}

AssumptionReport Eos::check_assumptions(std::span<const double> rho_grid) const {
  const std::size_t n = rho_grid.size();
  require(n >= 4, "eos: assumption grid needs >= 4 points");
  for (std::size_t i = 0; i < n; ++i) {
    require(rho_grid[i] > 0, "eos: assumption grid must be positive");
    if (i > 0) require(rho_grid[i] > rho_grid[i - 1], "eos: assumption grid must be increasing");
  }
  require(rho_grid[n - 1] / rho_grid[0] >= 0.999e6, "eos: assumption grid must span >= 6 decades");

  AssumptionReport rep;
  const double c2 = c_ * c_;

  std::vector<double> p(n), slope(n);
  rep.nonnegative_pressure = true;
  rep.causal_slope = true;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = pressure(rho_grid[i]);
    slope[i] = dp_drho(rho_grid[i]);
    if (p[i] < 0) rep.nonnegative_pressure = false;
    if (!(slope[i] >= 0 && slope[i] < c2)) rep.causal_slope = false;
  }

  rep.pressure_vanishes = p.front() <= c2 * rho_grid.front();

  const double r_top = p[n - 1] / (c2 * rho_grid[n - 1]);
  rep.gamma_high = 1.0 + r_top;

  // Settled when the measured Gamma barely moves across the top decade.
  double gamma_prev = rep.gamma_high;
  for (std::size_t i = n; i-- > 0;) {
    if (rho_grid[i] <= rho_grid[n - 1] / 10.0) {
      gamma_prev = 1.0 + p[i] / (c2 * rho_grid[i]);
      break;
    }
  }
  rep.high_density_linear = std::fabs(rep.gamma_high - gamma_prev) <= 0.01 * rep.gamma_high;

  // Decay exponent of r_top - r(rho) over [top/1000, top/10]; diagnostic only,
  // biased toward the window when the window is short.
  {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < n; ++i) {
      if (rho_grid[i] < rho_grid[n - 1] / 1000.0 || rho_grid[i] > rho_grid[n - 1] / 10.0) continue;
      const double resid = r_top - p[i] / (c2 * rho_grid[i]);
      if (resid <= 1e-14) continue;
      lx.push_back(std::log(rho_grid[i]));
      ly.push_back(std::log(resid));
    }
    rep.sigma_correction =
        lx.size() >= 2 ? -num::fit_linear(lx, ly).slope : kNaN;
  }

  // Low end: slope of log P across the bottom decade.
  if (p[0] == 0.0) {
    // Pressureless on the grid; the polytropic bound holds trivially.
    rep.low_density_polytropic = true;
    rep.gamma_low = kNaN;
  } else {
    std::size_t j = 1;
    while (j + 1 < n && rho_grid[j] < 10.0 * rho_grid[0]) ++j;
    rep.gamma_low = (std::log(p[j]) - std::log(p[0])) /
                    (std::log(rho_grid[j]) - std::log(rho_grid[0]));
    rep.low_density_polytropic = rep.pressure_vanishes && rep.gamma_low > 1.05;
  }
  return rep;
}

}  // namespace cosmoee
