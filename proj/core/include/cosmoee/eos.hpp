#ifndef COSMOEE_EOS_HPP
#define COSMOEE_EOS_HPP

#include <span>
#include <string>
#include <string_view>

namespace cosmoee {

enum class EosKind { dust, gamma_law, polytropic_tail, neutron_fermi };

// Dimensionless Fermi momentum of the degenerate neutron gas (>= 0).
struct FermiParam {
  double zeta = 0;
};

// Pointwise and asymptotic checks of the structural assumptions the dynamics
// relies on, evaluated on a caller-supplied density grid:
//   * slope bounds 0 <= dP/drho < c^2 and P >= 0, P -> 0 at low density;
//   * high-density linearity P/(c^2 rho) -> Gamma - 1 (measured Gamma and the
//     fitted decay exponent of the residual are reported, not asserted);
//   * low-density polytropic bound P = O(rho^gamma) with gamma > 1.
struct AssumptionReport {
  bool nonnegative_pressure = false;
  bool causal_slope = false;
  bool pressure_vanishes = false;

  bool high_density_linear = false;
  double gamma_high = 0;         // 1 + P/(c^2 rho) at the top grid point
  double sigma_correction = 0;   // decay exponent of the ratio residual, NaN if unresolved

  bool low_density_polytropic = false;
  double gamma_low = 0;          // d log P / d log rho at the grid bottom, NaN if P == 0
};

// Barotropic equation of state P = P(rho) together with the derived
// "flattened" density rho_flat, the solution of
//     d log rho_flat / d rho = 1 / (rho + P(rho)/c^2)
// normalised so that rho_flat * a^3 is conserved along the flow.  Kinds with
// P = O(rho^g), g > 1 at low density anchor rho_flat/rho -> 1 as rho -> 0;
// the gamma-law family (P proportional to rho) anchors rho_flat = 1 at
// rho = 1 instead, since the zero-density normalisation integral diverges.
class Eos {
 public:
  static Eos dust(double c = 1.0);
  static Eos gamma_law(double Gamma, double c = 1.0);                 // 1 <= Gamma < 2
  static Eos polytropic_tail(double gamma, double coef, double c = 1.0);  // gamma > 1, coef > 0
  static Eos neutron_fermi(double amplitude, double c = 1.0);         // amplitude > 0

  // Accepts "dust", "gamma:<G>", "poly:<gamma>:<coef>", "neutron:<A>".
  // Malformed syntax -> std::invalid_argument; out-of-range -> domain_error.
  static Eos parse(std::string_view spec, double c = 1.0);
  std::string spec_string() const;  // round-trips through parse

  EosKind kind() const { return kind_; }
  double light_speed() const { return c_; }

  double pressure(double rho) const;
  double dp_drho(double rho) const;
  double rho_flat(double rho) const;
  double rho_from_flat(double flat) const;  // inverse of rho_flat

  AssumptionReport check_assumptions(std::span<const double> rho_grid) const;

  // Neutron-gas parametrisation, valid only for kind() == neutron_fermi.
  FermiParam fermi_momentum(double rho) const;
  double rho_of(FermiParam zeta) const;
  double pressure_of(FermiParam zeta) const;

 private:
  Eos() = default;

  double rho_flat_of_zeta(double z) const;

  EosKind kind_ = EosKind::dust;
  double c_ = 1.0;
  double Gamma_ = 1.0;   // gamma_law
  double gamma_ = 0.0;   // polytropic_tail
  double coef_ = 0.0;    // polytropic_tail
  double A_ = 0.0;       // neutron_fermi amplitude
};

}  // namespace cosmoee

#endif
