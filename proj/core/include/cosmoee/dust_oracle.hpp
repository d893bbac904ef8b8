#ifndef COSMOEE_DUST_ORACLE_HPP
#define COSMOEE_DUST_ORACLE_HPP

#include <string>

#include "cosmoee/dynamics.hpp"

namespace cosmoee::dust {

// Pressureless case analysis in the rescaled variable xi = a sqrt(lambda/K),
// driven by the cubic f_alpha(xi) = xi^3 - 3 xi + 2 alpha and the parameter
// alpha = (4 pi G rho1 / c^2) sqrt(lambda / K^3), K > 0.
//
// For 0 < alpha < 1, f_alpha has two positive simple roots xi1 < 1 < xi2
// separating a low branch (0, xi1) from a high branch (xi2, inf).  alpha = 1
// has the double root xi = 1 (the static value); alpha > 1 has no positive
// root and a single unobstructed branch.

enum class Branch { low, high };

enum class DustCase { case0_0, case0_1, case1_0, case1_1, case2 };

const char* to_string(Branch b);
const char* to_string(DustCase c);

struct CubicRoots {
  int count = 0;  // 2: simple pair; 1: double root at 1; 0: none positive
  double xi1 = 0;
  double xi2 = 0;
};

struct DustSetup {
  double rho1 = 0;   // rho * a^3, conserved for dust
  double K = 0;      // curvature constant, > 0
  double alpha = 0;
  CubicRoots roots;

  DustCase case_for(Branch b) const;
};

double alpha_of(const CosmoParams& p, double rho1, double K);

DustSetup make_setup(const CosmoParams& p, double rho1, double K);

double f_alpha(double alpha, double xi);

// Positive roots by the trigonometric solution of the depressed cubic,
// polished to residual |f_alpha| < 1e-13.
CubicRoots cubic_roots(double alpha);

// xi <-> a for a given setup.
double xi_of_a(const CosmoParams& p, const DustSetup& setup, double a);
double a_of_xi(const CosmoParams& p, const DustSetup& setup, double xi);

// I = integral of sqrt(xi / f_alpha) over [xi_from, xi_to], the elapsed time
// in units of 1/(c sqrt(lambda/3)).  Antisymmetric under swapping the limits.
// Both limits must lie in one positivity interval of f_alpha; endpoints may
// sit exactly on a simple root (the inverse-square-root singularity is
// removed by the substitution xi = root +/- s^2).  The alpha = 1 double root
// is a non-integrable endpoint and is rejected.
double time_integral(double alpha, double xi_from, double xi_to);

// Elapsed coordinate time between two xi values: I / (c sqrt(lambda/3)).
double elapsed_time(const CosmoParams& p, double alpha, double xi_from, double xi_to);

// Closed-form antiderivative of sqrt(xi / f_1) for alpha = 1, in terms of
// x = sqrt(xi / (xi + 2)); one logarithmic formula per side of the double
// root.  Increasing in xi on both branches.
double case1_time_integral(double xi);

// Scenario label of the full orbit through the given branch, e.g.
// "BB ↗↘ BC".  adot_sign only matters where the orbit is monotone
// (alpha >= 1); 0 is accepted only on the turning-point cases (alpha < 1).
std::string classify_alpha(double alpha, Branch branch, int adot_sign);

struct CoastingInfo {
  double t_m = 0;       // time from the initial singularity to the coasting point
  double adot_min = 0;  // positive minimum of adot, attained at t_m
  double a_m = 0;       // = (4 pi G rho1 / (c^2 lambda))^{1/3}
};

// Lemaitre coasting diagnostics of the expanding alpha > 1 solution.
CoastingInfo lemaitre_coasting(const CosmoParams& p, const DustSetup& setup);

}  // namespace cosmoee::dust

#endif
