#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cosmoee/eos.hpp"
#include "cosmoee/errors.hpp"
#include "test_support.hpp"

using namespace cosmoee;
using testsupport::rel;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, i / double(n - 1));
  return g;
}

// Fermi-gas values frozen from an independent quadrature oracle (A = c = 1).
struct FermiPoint {
  double zeta, rho, pressure;
};
constexpr FermiPoint kFermiTable[] = {
    {0.5, 0.1339926249385566, 0.005761623655180223},
    {1.0, 1.2604751625374033, 0.15373839983569175},
    {2.0, 14.552095544931527, 3.336448275066791},
    {5.0, 486.72657660933277, 150.65086258976534},
};

}  // namespace

TEST_CASE("dust: pressureless, flat density is the density") {
  const Eos e = Eos::dust();
  CHECK(e.kind() == EosKind::dust);
  CHECK(e.pressure(3.7) == 0.0);
  CHECK(e.dp_drho(3.7) == 0.0);
  CHECK(e.rho_flat(3.7) == 3.7);
  CHECK(e.rho_from_flat(3.7) == 3.7);
  CHECK_THROWS_AS(e.pressure(-1.0), domain_error);
  CHECK_THROWS_AS(Eos::dust(0.0), domain_error);
}

TEST_CASE("gamma_law: linear pressure and the rho^(1/Gamma) flattening") {
  const double c = 2.0;
  const Eos e = Eos::gamma_law(4.0 / 3.0, c);
  CHECK(e.pressure(3.0) == doctest::Approx((1.0 / 3.0) * c * c * 3.0).epsilon(1e-15));
  CHECK(e.dp_drho(3.0) == doctest::Approx((1.0 / 3.0) * c * c).epsilon(1e-15));
  // Anchored at rho_flat(1) = 1.
  CHECK(e.rho_flat(1.0) == 1.0);
  CHECK(e.rho_flat(8.0) == doctest::Approx(std::pow(8.0, 0.75)).epsilon(1e-15));
  CHECK(e.rho_from_flat(e.rho_flat(0.37)) == doctest::Approx(0.37).epsilon(1e-14));

  // Gamma = 1 degenerates to dust.
  const Eos g1 = Eos::gamma_law(1.0);
  CHECK(g1.pressure(5.0) == 0.0);
  CHECK(g1.rho_flat(5.0) == 5.0);

  CHECK_THROWS_AS(Eos::gamma_law(0.99), domain_error);
  CHECK_THROWS_AS(Eos::gamma_law(2.0), domain_error);
}

TEST_CASE("polytropic_tail: power pressure, saturating flattened density") {
  const double gamma = 2.0, coef = 1.0, c = 1.0;
  const Eos e = Eos::polytropic_tail(gamma, coef, c);
  CHECK(e.pressure(3.0) == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(e.dp_drho(3.0) == doctest::Approx(6.0).epsilon(1e-15));

  // Closed form rho (1 + coef rho^{gamma-1}/c^2)^{-1/(gamma-1)}.
  for (double rho : {1e-6, 1e-2, 1.0, 50.0}) {
    const double expect = rho * std::pow(1.0 + coef * std::pow(rho, gamma - 1.0) / (c * c),
                                         -1.0 / (gamma - 1.0));
    CHECK(e.rho_flat(rho) == doctest::Approx(expect).epsilon(1e-12));
  }
  // Low-density anchor rho_flat/rho -> 1.
  CHECK(e.rho_flat(1e-10) / 1e-10 == doctest::Approx(1.0).epsilon(1e-9));

  // rho_flat saturates at (c^2/coef)^{1/(gamma-1)} = 1; the inverse rejects
  // the supremum and round-trips below it.
  CHECK(e.rho_flat(1e12) < 1.0);
  CHECK_THROWS_AS(e.rho_from_flat(1.0), domain_error);
  for (double rho : {1e-3, 0.5, 3.0, 200.0}) {
    CHECK(e.rho_from_flat(e.rho_flat(rho)) == doctest::Approx(rho).epsilon(1e-10));
  }

  CHECK_THROWS_AS(Eos::polytropic_tail(1.0, 1.0), domain_error);
  CHECK_THROWS_AS(Eos::polytropic_tail(2.0, 0.0), domain_error);
}

TEST_CASE("neutron_fermi: frozen quadrature oracle values") {
  const Eos e = Eos::neutron_fermi(1.0);
  for (const auto& pt : kFermiTable) {
    CHECK(rel(e.rho_of({pt.zeta}), pt.rho) <= 1e-12);
    CHECK(rel(e.pressure_of({pt.zeta}), pt.pressure) <= 1e-12);
    // pressure(rho) composes the inverse with the zeta form.
    CHECK(rel(e.pressure(pt.rho), pt.pressure) <= 1e-10);
    // Slope at the Fermi surface: c^2 z^2 / (3 (1 + z^2)).
    const double z = pt.zeta;
    CHECK(rel(e.dp_drho(pt.rho), z * z / (3.0 * (1.0 + z * z))) <= 1e-10);
  }
  CHECK(e.rho_of({0.0}) == 0.0);
  CHECK(e.pressure_of({0.0}) == 0.0);
}

TEST_CASE("neutron_fermi: flattened density collapses to A c^3 zeta^3") {
  // The flattening integral has the closed form rho_flat = A c^3 zeta^3; the
  // implementation integrates it numerically, so agreement is evidence the
  // quadrature route is right.
  const Eos e = Eos::neutron_fermi(1.0);
  for (double z : {0.3, 0.5, 1.0, 2.0, 5.0}) {
    CHECK(rel(e.rho_flat(e.rho_of({z})), z * z * z) <= 1e-10);
  }
  // Amplitude scales both densities linearly at fixed zeta.
  const Eos e3 = Eos::neutron_fermi(3.0);
  CHECK(rel(e3.rho_of({1.5}), 3.0 * e.rho_of({1.5})) <= 1e-13);
  CHECK(rel(e3.pressure_of({1.5}), 3.0 * e.pressure_of({1.5})) <= 1e-13);
  CHECK(rel(e3.rho_flat(e3.rho_of({1.5})), 3.0 * std::pow(1.5, 3)) <= 1e-10);
}

TEST_CASE("neutron_fermi: inverse maps round-trip") {
  const Eos e = Eos::neutron_fermi(0.7);
  for (double z : {1e-3, 0.2, 1.0, 4.0, 20.0}) {
    const double rho = e.rho_of({z});
    CHECK(rel(e.fermi_momentum(rho).zeta, z) <= 1e-11);
    CHECK(rel(e.rho_from_flat(e.rho_flat(rho)), rho) <= 1e-9);
  }
  CHECK(e.fermi_momentum(0.0).zeta == 0.0);
  CHECK(e.rho_from_flat(0.0) == 0.0);
  CHECK_THROWS_AS(Eos::neutron_fermi(0.0), domain_error);
  CHECK_THROWS_AS(Eos::dust().rho_of({1.0}), domain_error);
}

TEST_CASE("neutron_fermi: high-density pressure ratio approaches 1/3") {
  const Eos e = Eos::neutron_fermi(1.0);
  // Frozen oracle point: at rho = 1e6 the ratio is still 0.17% below 1/3.
  CHECK(rel(e.pressure(1e6) / 1e6, 0.33275809210735973) <= 1e-10);
}

TEST_CASE("parse: grammar, round-trips and error kinds") {
  CHECK(Eos::parse("dust").kind() == EosKind::dust);
  CHECK(Eos::parse("gamma:1.5").pressure(2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(Eos::parse("poly:2:0.5").pressure(2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(Eos::parse("neutron:2").kind() == EosKind::neutron_fermi);

  for (const char* spec : {"dust", "gamma:1.5", "poly:2:0.5", "neutron:2"}) {
    const Eos e = Eos::parse(spec);
    const Eos back = Eos::parse(e.spec_string());
    CHECK(back.kind() == e.kind());
    CHECK(back.pressure(0.9) == e.pressure(0.9));
  }

  // Malformed syntax is invalid_argument; out-of-range values are domain_error.
  CHECK_THROWS_AS(Eos::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Eos::parse("fluid"), std::invalid_argument);
  CHECK_THROWS_AS(Eos::parse("gamma:"), std::invalid_argument);
  CHECK_THROWS_AS(Eos::parse("gamma:1.2.3"), std::invalid_argument);
  CHECK_THROWS_AS(Eos::parse("poly:2"), std::invalid_argument);
  CHECK_THROWS_AS(Eos::parse("neutron:1:2"), std::invalid_argument);
  CHECK_THROWS_AS(Eos::parse("gamma:2.5"), domain_error);
  CHECK_THROWS_AS(Eos::parse("neutron:-1"), domain_error);
}

TEST_CASE("check_assumptions: neutron gas satisfies every structural bound") {
  const Eos e = Eos::neutron_fermi(1.0);
  const auto grid = log_grid(1e-3, 1e3, 121);
  const auto rep = e.check_assumptions(grid);
  CHECK(rep.nonnegative_pressure);
  CHECK(rep.causal_slope);
  CHECK(rep.pressure_vanishes);
  CHECK(rep.low_density_polytropic);
  CHECK(rel(rep.gamma_low, 5.0 / 3.0) <= 0.02);
}

TEST_CASE("check_assumptions: gamma law is linear but not polytropic at low density") {
  const Eos e = Eos::gamma_law(4.0 / 3.0);
  const auto rep = e.check_assumptions(log_grid(1e-3, 1e3, 121));
  CHECK(rep.high_density_linear);
  CHECK(rep.gamma_high == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(rep.gamma_low == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(rep.low_density_polytropic);
}

TEST_CASE("check_assumptions: polytrope breaks causality above its causal density") {
  // dP/drho = 1 at rho = (c^2/(coef gamma))^{1/(gamma-1)} = 1/2; the grid
  // crosses it, so the slope bound must fail.
  const Eos e = Eos::polytropic_tail(2.0, 1.0);
  const auto rep = e.check_assumptions(log_grid(1e-3, 1e3, 121));
  CHECK_FALSE(rep.causal_slope);
  CHECK(rep.low_density_polytropic);
  CHECK(rep.gamma_low == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("check_assumptions: dust is trivially polytropic, gamma_low undefined") {
  const auto rep = Eos::dust().check_assumptions(log_grid(1e-3, 1e3, 61));
  CHECK(rep.nonnegative_pressure);
  CHECK(rep.causal_slope);
  CHECK(rep.low_density_polytropic);
  CHECK(std::isnan(rep.gamma_low));
}

TEST_CASE("check_assumptions: grid validation") {
  const Eos e = Eos::dust();
  CHECK_THROWS_AS(e.check_assumptions(std::vector<double>{1.0, 2.0, 3.0}), domain_error);
  CHECK_THROWS_AS(e.check_assumptions(std::vector<double>{1.0, 3.0, 2.0, 4.0}), domain_error);
  CHECK_THROWS_AS(e.check_assumptions(log_grid(1.0, 1e3, 16)), domain_error);
  CHECK_THROWS_AS(e.check_assumptions(std::vector<double>{-1.0, 1.0, 2.0, 1e7}), domain_error);
}
