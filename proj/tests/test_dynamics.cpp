#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cosmoee/dynamics.hpp"
#include "cosmoee/errors.hpp"
#include "test_support.hpp"

using namespace cosmoee;
using testsupport::rel;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("validate: rejects nonphysical parameters and states") {
  CHECK_THROWS_AS(validate(CosmoParams{0.0, 1.0, 1.0}), domain_error);
  CHECK_THROWS_AS(validate(CosmoParams{1.0, -1.0, 1.0}), domain_error);
  CHECK_THROWS_AS(validate(CosmoParams{1.0, 1.0, std::nan("")}), domain_error);
  CHECK_NOTHROW(validate(CosmoParams{1.0, 1.0, -0.5}));  // lambda < 0 is allowed here

  CHECK_THROWS_AS(validate(State{0.0, 1.0, 1.0}), domain_error);
  CHECK_THROWS_AS(validate(State{1.0, 1.0, 0.0}), domain_error);
  CHECK_THROWS_AS(validate(State{1.0, std::nan(""), 1.0}), domain_error);
  CHECK_NOTHROW(validate(State{1.0, -5.0, 1.0}));
}

TEST_CASE("rhs: matches the hand-evaluated field") {
  const CosmoParams p{2.0, 0.5, 3.0};
  const Eos eos = Eos::gamma_law(4.0 / 3.0, p.c);
  const State s{1.5, -0.25, 0.8};
  const double P = (1.0 / 3.0) * p.c * p.c * s.rho;
  const auto d = rhs(p, eos, s);
  CHECK(d.da_dt == s.adot);
  CHECK(d.dadot_dt ==
        doctest::Approx((-(4.0 * kPi * p.G / 3.0) * (s.rho + 3.0 * P / (p.c * p.c)) +
                         p.c * p.c * p.lambda / 3.0) *
                        s.a)
            .epsilon(1e-15));
  CHECK(d.drho_dt ==
        doctest::Approx(-3.0 * (s.rho + P / (p.c * p.c)) * s.adot / s.a).epsilon(1e-15));
}

TEST_CASE("rhs: the dust equilibrium is a fixed point") {
  const CosmoParams p = natural_units(3.0);
  const Eos eos = Eos::dust();
  const double rhobar = p.c * p.c * p.lambda / (4.0 * kPi * p.G);
  const auto d = rhs(p, eos, State{2.3, 0.0, rhobar});
  CHECK(d.da_dt == 0.0);
  // The two acceleration terms cancel to one ulp of c^2 lambda / 3.
  CHECK(std::fabs(d.dadot_dt) <= 1e-15 * p.c * p.c * p.lambda);
  CHECK(d.drho_dt == 0.0);
}

TEST_CASE("first integral, curvature constant and flattened mass") {
  const CosmoParams p{1.0, 1.0, 2.0};
  const State s{1.2, 0.7, 0.9};
  const double manual = 0.7 * 0.7 - (8.0 * kPi / 3.0 * 0.9 + 2.0 / 3.0) * 1.2 * 1.2;
  CHECK(first_integral_x(p, s) == doctest::Approx(manual).epsilon(1e-15));
  CHECK(friedmann_k(p, s) == doctest::Approx(-manual).epsilon(1e-15));

  const Eos eos = Eos::dust();
  const double K = friedmann_k(p, s);
  REQUIRE(K > 0);
  CHECK(flat_mass(p, eos, s) ==
        doctest::Approx((4.0 * kPi / 3.0) * std::pow(1.2, 3) * std::pow(K, -1.5) * 0.9)
            .epsilon(1e-14));

  // Open data has K <= 0 and no flattened mass.
  const State open{1.0, 10.0, 0.1};
  REQUIRE(friedmann_k(p, open) < 0);
  CHECK_THROWS_AS(flat_mass(p, eos, open), domain_error);
}

TEST_CASE("first integral is constant along the field directionally") {
  // dX/dt = 2 adot (dadot/dt) - (8 pi G/3)(drho/dt a^2 + 2 rho a adot)
  //         - (2 c^2 lambda/3) a adot vanishes identically on solutions.
  const CosmoParams p{1.3, 0.7, 1.1};
  const Eos eos = Eos::gamma_law(1.7, p.c);
  const State s{0.9, -0.4, 2.2};
  const auto d = rhs(p, eos, s);
  const double c2 = p.c * p.c;
  const double dX = 2.0 * s.adot * d.dadot_dt -
                    (8.0 * kPi * p.G / 3.0) * (d.drho_dt * s.a * s.a + 2.0 * s.rho * s.a * s.adot) -
                    (2.0 * c2 * p.lambda / 3.0) * s.a * s.adot;
  CHECK(std::fabs(dX) <= 1e-14 * std::fabs(first_integral_x(p, s)));
}

TEST_CASE("condition_flags: strict signs away from the bands") {
  const CosmoParams p = natural_units(3.0);
  const Eos eos = Eos::dust();
  const double rhocrit = p.c * p.c * p.lambda / (4.0 * kPi * p.G);

  const auto sup = condition_flags(p, eos, State{1.0, 0.5, 2.0 * rhocrit});
  CHECK(sup.past_crit_sign == 1);
  CHECK(sup.cond_8);
  CHECK_FALSE(sup.cond_ex);
  CHECK(sup.adot_sign == 1);

  const auto sub = condition_flags(p, eos, State{1.0, -0.5, 0.5 * rhocrit});
  CHECK(sub.past_crit_sign == -1);
  CHECK(sub.cond_ex);
  CHECK_FALSE(sub.cond_8);
  CHECK(sub.adot_sign == -1);

  // Fast expansion makes K negative: the escape criterion.
  const auto open = condition_flags(p, eos, State{1.0, 5.0, 0.5 * rhocrit});
  CHECK(open.k_sign == -1);
  CHECK(open.cond_esc);
}

TEST_CASE("condition_flags: zero bands absorb constructed round-off") {
  const CosmoParams p = natural_units(3.0);
  const Eos eos = Eos::dust();
  const double rhocrit = p.c * p.c * p.lambda / (4.0 * kPi * p.G);

  // Exactly critical density: both one-sided conditions hold.
  const auto crit = condition_flags(p, eos, State{1.0, 0.0, rhocrit});
  CHECK(crit.past_crit_sign == 0);
  CHECK(crit.cond_8);
  CHECK(crit.cond_ex);
  CHECK(crit.adot_sign == 0);

  // A few ulps off still lands in the band; far off does not.
  const auto near = condition_flags(p, eos, State{1.0, 0.0, rhocrit * (1.0 + 1e-14)});
  CHECK(near.past_crit_sign == 0);
  const auto far = condition_flags(p, eos, State{1.0, 0.0, rhocrit * (1.0 + 1e-9)});
  CHECK(far.past_crit_sign == 1);

  // K band: closed data built to sit on K = 0.
  const double energy = 8.0 * kPi * p.G / 3.0 * rhocrit + p.c * p.c * p.lambda / 3.0;
  const auto flat = condition_flags(p, eos, State{1.0, std::sqrt(energy), rhocrit});
  CHECK(flat.k_sign == 0);
  CHECK(flat.cond_esc);

  // The band scales with the input, not with absolute size.
  const auto tiny = condition_flags(p, eos, State{1e-8, 0.0, rhocrit});
  CHECK(tiny.past_crit_sign == 0);
}

TEST_CASE("condition_flags: validates its inputs") {
  const CosmoParams p = natural_units(1.0);
  CHECK_THROWS_AS(condition_flags(p, Eos::dust(), State{-1.0, 0.0, 1.0}), domain_error);
  CHECK_THROWS_AS(condition_flags(CosmoParams{0.0, 1.0, 1.0}, Eos::dust(), State{1.0, 0.0, 1.0}),
                  domain_error);
}
