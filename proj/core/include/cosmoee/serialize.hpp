#ifndef COSMOEE_SERIALIZE_HPP
#define COSMOEE_SERIALIZE_HPP

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "cosmoee/asymptotics.hpp"
#include "cosmoee/classifier.hpp"
#include "cosmoee/eos.hpp"
#include "cosmoee/integrator.hpp"

namespace cosmoee {

// Shortest decimal form that round-trips the double exactly.
std::string fmt_roundtrip(double v);

// CSV with header t,a,adot,rho,P,X,flat_a3, one row per sample.
std::string trajectory_csv(const Trajectory& traj, const Eos& eos);

// Parses the trajectory CSV back into its seven columns.
// Malformed text -> std::invalid_argument.
std::vector<std::array<double, 7>> parse_trajectory_csv(std::string_view text);

// JSON reports.  Non-finite numbers follow one rule everywhere:
// +-infinity becomes the string "+inf"/"-inf", NaN becomes null.
std::string classify_json(const ScenarioReport& rep);
std::string fit_json(const AsymptoticFit& fit);
std::string fit_pair_json(const FitPair& pair);
std::string stability_json(const StabilityProbe& probe);
std::string assumptions_json(const AssumptionReport& rep);

struct DustScanRow {
  double alpha = 0;
  std::string branch;
  std::string case_name;
  double xi1 = 0;  // NaN when no positive root exists
  double xi2 = 0;
  std::string scenario;
};

// CSV with header alpha,branch,case,xi1,xi2,scenario.
std::string dust_scan_csv(const std::vector<DustScanRow>& rows);

// Two-column (t, y) plot files "<base>.a.dat", "<base>.rho.dat",
// "<base>.adot.dat".
void write_plotdata(const std::string& base, const Trajectory& traj);

// Writes through a temp file in the same directory and renames into place;
// failures throw std::runtime_error carrying the path.
void atomic_write_file(const std::string& path, std::string_view content);

}  // namespace cosmoee

#endif
