#include "cosmoee/dust_oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cosmoee/errors.hpp"
#include "cosmoee/num/quad.hpp"

namespace cosmoee::dust {

namespace {
constexpr double kPi = std::numbers::pi;

double sqrt3() { return std::sqrt(3.0); }
}  // namespace

const char* to_string(Branch b) { return b == Branch::low ? "low" : "high"; }

const char* to_string(DustCase c) {
  switch (c) {
    case DustCase::case0_0: return "Case0_0";
    case DustCase::case0_1: return "Case0_1";
    case DustCase::case1_0: return "Case1_0";
    case DustCase::case1_1: return "Case1_1";
    case DustCase::case2: return "Case2";
  }
  return "?";
}

DustCase DustSetup::case_for(Branch b) const {
  if (alpha < 1.0) return b == Branch::low ? DustCase::case0_0 : DustCase::case0_1;
  if (alpha == 1.0) return b == Branch::low ? DustCase::case1_1 : DustCase::case1_0;
  if (b == Branch::low) throw domain_error("dust: no low branch for alpha > 1");
  return DustCase::case2;
}

double alpha_of(const CosmoParams& p, double rho1, double K) {
  validate(p);
  if (!(K > 0)) throw domain_error("dust: case analysis requires K > 0");
  if (!(rho1 > 0)) throw domain_error("dust: rho1 must be positive");
  if (!(p.lambda > 0)) throw domain_error("dust: case analysis requires lambda > 0");
  return 4.0 * kPi * p.G * rho1 / (p.c * p.c) * std::sqrt(p.lambda / (K * K * K));
}

DustSetup make_setup(const CosmoParams& p, double rho1, double K) {
  DustSetup s;
  s.rho1 = rho1;
  s.K = K;
  s.alpha = alpha_of(p, rho1, K);
  s.roots = cubic_roots(s.alpha);
  return s;
}

double f_alpha(double alpha, double xi) { return (xi * xi - 3.0) * xi + 2.0 * alpha; }

CubicRoots cubic_roots(double alpha) {
  if (!(alpha > 0)) throw domain_error("dust: alpha must be positive");
  CubicRoots r;
  if (alpha > 1.0) return r;
  if (alpha == 1.0) {
    r.count = 1;
    r.xi1 = r.xi2 = 1.0;
    return r;
  }
  // Depressed cubic xi^3 - 3 xi + 2 alpha: roots 2 cos(phi/3 - 2 pi k / 3)
  // with phi = arccos(-alpha).
  const double phi = std::acos(-alpha);
  double x2 = 2.0 * std::cos(phi / 3.0);                 // in (1, sqrt(3))
  double x1 = 2.0 * std::cos(phi / 3.0 - 2.0 * kPi / 3.0);  // in (0, 1)
  // One Newton polish apiece keeps the residual at the round-off floor.
  for (double* x : {&x1, &x2}) {
    const double fp = 3.0 * (*x) * (*x) - 3.0;
    if (fp != 0.0) *x -= f_alpha(alpha, *x) / fp;
  }
  r.count = 2;
  r.xi1 = x1;
  r.xi2 = x2;
  return r;
}

double xi_of_a(const CosmoParams& p, const DustSetup& setup, double a) {
  if (!(a > 0)) throw domain_error("dust: a must be positive");
  return a * std::sqrt(p.lambda / setup.K);
}

double a_of_xi(const CosmoParams& p, const DustSetup& setup, double xi) {
  if (!(xi > 0)) throw domain_error("dust: xi must be positive");
  return xi * std::sqrt(setup.K / p.lambda);
}

namespace {

struct Cell {
  double lo = 0;                                       // left edge (0 or xi2)
  double hi = std::numeric_limits<double>::infinity();  // right edge (xi1 or inf)
  bool lo_is_root = false;
  bool hi_is_root = false;
};

Cell cell_of(double alpha, const CubicRoots& roots, double x, double snap_tol) {
  if (alpha > 1.0) return {};
  if (alpha == 1.0) {
    if (std::fabs(x - 1.0) <= snap_tol) {
      throw domain_error("dust: time integral diverges at the alpha=1 double root");
    }
    return x < 1.0 ? Cell{0.0, 1.0, false, false}
                   : Cell{1.0, std::numeric_limits<double>::infinity(), false, false};
  }
  if (x <= roots.xi1 + snap_tol && x < 1.0) return {0.0, roots.xi1, false, true};
  if (x >= roots.xi2 - snap_tol && x > 1.0) {
    return {roots.xi2, std::numeric_limits<double>::infinity(), true, false};
  }
  throw domain_error("dust: xi lies in the forbidden band between the roots");
}

double sqrt_integrand(double alpha, double xi) {
  return std::sqrt(xi / f_alpha(alpha, xi));
}

// Integral over [lo, hi] where the cell edge `root` coincides with a simple
// root of f_alpha adjacent to the interval; xi = root +/- s^2 removes the
// 1/sqrt singularity.  side: -1 when root <= lo (left edge), +1 when
// root >= hi (right edge).  o1, o2 are the other two roots of the cubic:
// the substitution cancels the (xi - root) factor exactly, so the reduced
// integrand is evaluated through the factored form and stays finite where
// f_alpha itself rounds to a negative value next to the root.
double edge_regularized(double lo, double hi, double root, int side, double o1, double o2) {
  auto reduced = [&](double xi) {
    return 2.0 * std::sqrt(xi / std::fabs((xi - o1) * (xi - o2)));
  };
  if (side < 0) {
    const double s_lo = std::sqrt(std::max(lo - root, 0.0));
    const double s_hi = std::sqrt(hi - root);
    return num::integrate([&](double s) { return reduced(root + s * s); }, s_lo, s_hi);
  }
  const double s_lo = std::sqrt(std::max(root - hi, 0.0));
  const double s_hi = std::sqrt(root - lo);
  return num::integrate([&](double s) { return reduced(root - s * s); }, s_lo, s_hi);
}

}  // namespace

double time_integral(double alpha, double xi_from, double xi_to) {
  if (!(alpha > 0)) throw domain_error("dust: alpha must be positive");
  if (xi_from > xi_to) return -time_integral(alpha, xi_to, xi_from);
  if (!(xi_from >= 0)) throw domain_error("dust: xi must be nonnegative");
  if (xi_from == xi_to) return 0.0;

  const CubicRoots roots = cubic_roots(alpha);
  const double snap = 1e-12 * std::max(1.0, xi_to);
  const Cell ca = cell_of(alpha, roots, xi_from, snap);
  const Cell cb = cell_of(alpha, roots, xi_to, snap);
  if (ca.lo != cb.lo) {
    throw domain_error("dust: integration interval straddles a root of f_alpha");
  }

  double lo = xi_from, hi = xi_to;
  if (ca.lo_is_root) lo = std::max(lo, ca.lo);  // snap inside after round-off
  if (ca.hi_is_root) hi = std::min(hi, ca.hi);

  // sqrt(xi) has an unbounded slope at the origin; xi = s^2 smooths it out.
  // Harmless away from zero, so apply it whenever the left end is tiny.
  auto lower_piece = [&](double a, double b) {
    if (a < 1e-3 * b) {
      return num::integrate(
          [&](double s) { return 2.0 * s * s / std::sqrt(f_alpha(alpha, s * s)); }, std::sqrt(a),
          std::sqrt(b));
    }
    return num::integrate([&](double xi) { return sqrt_integrand(alpha, xi); }, a, b);
  };

  if (!ca.lo_is_root && !ca.hi_is_root) {
    return lower_piece(lo, hi);
  }

  const double x3 = -(roots.xi1 + roots.xi2);  // roots of the depressed cubic sum to zero
  const double mid = 0.5 * (lo + hi);
  double total = 0;
  if (ca.lo_is_root) {
    total += edge_regularized(lo, mid, ca.lo, -1, roots.xi1, x3);
  } else {
    total += lower_piece(lo, mid);
  }
  if (ca.hi_is_root) {
    total += edge_regularized(mid, hi, ca.hi, +1, roots.xi2, x3);
  } else {
    total += num::integrate([&](double xi) { return sqrt_integrand(alpha, xi); }, mid, hi);
  }
  return total;
}

double elapsed_time(const CosmoParams& p, double alpha, double xi_from, double xi_to) {
  validate(p);
  if (!(p.lambda > 0)) throw domain_error("dust: elapsed time requires lambda > 0");
  return time_integral(alpha, xi_from, xi_to) / (p.c * std::sqrt(p.lambda / 3.0));
}

double case1_time_integral(double xi) {
  if (!(xi > 0)) throw domain_error("dust: xi must be positive");
  if (xi == 1.0) throw domain_error("dust: closed form diverges at the double root");
  const double x = std::sqrt(xi / (xi + 2.0));
  const double r3 = sqrt3();
  if (xi > 1.0) {
    return std::log((r3 * x - 1.0) / (r3 * x + 1.0)) / r3 +
           std::log((1.0 + x) / (1.0 - x));
  }
  return std::log((1.0 + r3 * x) / (1.0 - r3 * x)) / r3 +
         std::log((1.0 - x) / (1.0 + x));
}

std::string classify_alpha(double alpha, Branch branch, int adot_sign) {
  if (!(alpha > 0)) throw domain_error("dust: alpha must be positive");
  if (alpha > 1.0 && branch == Branch::low) {
    throw domain_error("dust: no low branch for alpha > 1");
  }
  if (alpha < 1.0) {
    // Turning-point orbits; the label covers the whole orbit, so the current
    // sign of adot does not matter.
    return branch == Branch::low ? "BB ↗↘ BC" : "EC ↘↗ EE";
  }
  if (adot_sign == 0) {
    throw domain_error("dust: adot = 0 does not occur on a monotone branch");
  }
  if (alpha == 1.0) {
    if (branch == Branch::high) {
      return adot_sign > 0 ? "AS ↗ EE" : "EC ↘ AS";
    }
    return adot_sign > 0 ? "BB ↗ AS" : "AS ↘ BC";
  }
  return adot_sign > 0 ? "BB ↗ EE" : "EC ↘ BC";
}

CoastingInfo lemaitre_coasting(const CosmoParams& p, const DustSetup& setup) {
  if (!(setup.alpha > 1.0)) throw domain_error("dust: coasting requires alpha > 1");
  const double xi_bar = std::cbrt(setup.alpha);
  CoastingInfo info;
  info.a_m = a_of_xi(p, setup, xi_bar);
  info.adot_min =
      p.c * std::sqrt(setup.K / 3.0) * std::sqrt(f_alpha(setup.alpha, xi_bar) / xi_bar);
  info.t_m = elapsed_time(p, setup.alpha, 0.0, xi_bar);
  return info;
}

}  // namespace cosmoee::dust
