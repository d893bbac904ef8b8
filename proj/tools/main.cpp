// cosmoee: simulate and classify homogeneous isotropic universes with a
// cosmological constant, check equations of state, and fit asymptotic laws.
//
// Exit codes: 0 success, 2 invalid physical input (domain error), 3 numerical
// failure, 64 usage error, 1 anything else (I/O and the like).

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cosmoee/asymptotics.hpp"
#include "cosmoee/classifier.hpp"
#include "cosmoee/dust_oracle.hpp"
#include "cosmoee/dynamics.hpp"
#include "cosmoee/eos.hpp"
#include "cosmoee/errors.hpp"
#include "cosmoee/integrator.hpp"
#include "cosmoee/serialize.hpp"

namespace {

using namespace cosmoee;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kHorizon = 1e300;

struct Opts {
  std::string eos_spec = "dust";
  double a0 = 1.0;
  double adot0 = 0.0;
  double rho0 = 1.0;
  double c = 1.0;
  double G = 1.0;
  double lambda = 0.0;
  std::string preset;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::string mode = "constrained";
  double a_min = 0.0;
  double a_max = 0.0;
  double rho_max = std::numeric_limits<double>::infinity();
  std::string out;

  CLI::Option* c_opt = nullptr;
  CLI::Option* g_opt = nullptr;
};

void add_param_options(CLI::App* cmd, Opts& o) {
  o.c_opt = cmd->add_option("--c", o.c, "Speed of light");
  o.g_opt = cmd->add_option("--G", o.G, "Gravitational constant");
  cmd->add_option("--lambda", o.lambda, "Cosmological constant");
  cmd->add_option("--preset", o.preset, "Unit preset; 'natural' sets c = G = 1")
      ->check(CLI::IsMember({"natural"}));
  cmd->add_option("--out", o.out, "Output path (default: stdout)");
}

void add_state_options(CLI::App* cmd, Opts& o) {
  cmd->add_option("--eos", o.eos_spec,
                  "Equation of state: dust | gamma:<G> | poly:<g>:<coef> | neutron:<A>");
  cmd->add_option("--a0", o.a0, "Initial scale factor");
  cmd->add_option("--adot0", o.adot0, "Initial expansion speed");
  cmd->add_option("--rho0", o.rho0, "Initial density (rho, not rho_flat)");
}

void add_integration_options(CLI::App* cmd, Opts& o) {
  cmd->add_option("--rel-tol", o.rel_tol, "Relative step tolerance");
  cmd->add_option("--abs-tol", o.abs_tol, "Absolute step tolerance");
  cmd->add_option("--mode", o.mode, "rho handling: direct ODE or constrained recovery")
      ->check(CLI::IsMember({"direct", "constrained"}));
  cmd->add_option("--a-min", o.a_min, "Stop threshold on a (0: 1e-6 * a0)");
  cmd->add_option("--a-max", o.a_max, "Stop threshold on a (0: 1e6 * a0)");
  cmd->add_option("--rho-max", o.rho_max, "Stop threshold on rho");
}

CosmoParams params_of(const Opts& o) {
  CosmoParams p{o.c, o.G, o.lambda};
  if (o.preset == "natural") {
    if (!o.c_opt->count()) p.c = 1.0;
    if (!o.g_opt->count()) p.G = 1.0;
  }
  return p;
}

IntegrationConfig integration_of(const Opts& o) {
  IntegrationConfig cfg;
  cfg.rel_tol = o.rel_tol;
  cfg.abs_tol = o.abs_tol;
  cfg.mode = o.mode == "direct" ? IntegrationMode::direct : IntegrationMode::constrained;
  cfg.a_min_stop = o.a_min;
  cfg.a_max_stop = o.a_max;
  cfg.rho_max_stop = o.rho_max;
  return cfg;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  atomic_write_file(out, text);
}

// "lo:hi:n" -> n equally spaced values, endpoints included.
std::vector<double> parse_grid(const std::string& spec) {
  double lo = 0, hi = 0;
  long n = 0;
  char tail = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%ld%c", &lo, &hi, &n, &tail) != 3 || n < 1) {
    throw std::invalid_argument("grid must be lo:hi:n with n >= 1: " + spec);
  }
  std::vector<double> g;
  if (n == 1) {
    g.push_back(lo);
    return g;
  }
  for (long i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * double(i) / double(n - 1));
  return g;
}

double infer_gamma(const std::string& eos_spec) {
  if (eos_spec == "dust") return 1.0;
  if (eos_spec.rfind("gamma:", 0) == 0) return std::strtod(eos_spec.c_str() + 6, nullptr);
  return kNaN;
}

int run(int argc, char** argv) {
  CLI::App app{"Homogeneous isotropic universe simulator and fate classifier"};
  app.require_subcommand(1);

  Opts o;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Integrate a trajectory and write its CSV");
  double t0 = 0.0, t1 = kNaN;
  std::string plot_base;
  add_state_options(sim, o);
  add_param_options(sim, o);
  add_integration_options(sim, o);
  sim->add_option("--t0", t0, "Start time");
  sim->add_option("--t1", t1, "End time (default: 10/(c sqrt(lambda)), or 10 if lambda = 0)");
  sim->add_option("--plot-base", plot_base, "Also write <base>.{a,rho,adot}.dat plot columns");

  // classify
  auto* cls = app.add_subcommand("classify", "Report past/future fate as JSON");
  double zero_band = 1e-12;
  add_state_options(cls, o);
  add_param_options(cls, o);
  add_integration_options(cls, o);
  cls->add_option("--zero-band", zero_band, "Relative sign band for the algebraic criteria");

  // dust-scan
  auto* scan = app.add_subcommand("dust-scan", "Tabulate dust cases over an alpha grid");
  std::string alpha_spec;
  std::string branch = "auto";
  int adot_sign = 1;
  scan->add_option("--alpha", alpha_spec, "Grid lo:hi:n")->required();
  scan->add_option("--branch", branch, "low | high | auto (low when alpha <= 1)")
      ->check(CLI::IsMember({"low", "high", "auto"}));
  scan->add_option("--adot-sign", adot_sign, "Orbit direction on monotone branches")
      ->check(CLI::IsMember({-1, 1}));
  add_param_options(scan, o);  // accepted for interface uniformity; the table is unitless

  // eos-check
  auto* chk = app.add_subcommand("eos-check", "Evaluate structural assumptions on a rho grid");
  double rho_lo = 1e-3, rho_hi = 1e3;
  int chk_n = 121;
  chk->add_option("--eos", o.eos_spec, "Equation of state spec");
  chk->add_option("--rho-lo", rho_lo, "Grid bottom")->check(CLI::PositiveNumber);
  chk->add_option("--rho-hi", rho_hi, "Grid top")->check(CLI::PositiveNumber);
  chk->add_option("--n", chk_n, "Log-spaced grid size")->check(CLI::Range(2, 100000));
  add_param_options(chk, o);

  // fit
  auto* fit = app.add_subcommand("fit", "Fit an asymptotic law on a fresh integration");
  std::string regime;
  double fit_gamma = kNaN;
  double fit_t1 = kNaN;
  fit->add_option("--regime", regime, "bigbang | latetime | static")
      ->required()
      ->check(CLI::IsMember({"bigbang", "latetime", "static"}));
  add_state_options(fit, o);
  add_param_options(fit, o);
  add_integration_options(fit, o);
  fit->add_option("--Gamma", fit_gamma,
                  "Effective Gamma for the bigbang law (default: from the eos when linear)");
  fit->add_option("--t1", fit_t1, "Horizon for the static regime (default: 30/(c sqrt(lambda)))");

  // stability
  auto* stab = app.add_subcommand("stability", "Probe the static dust equilibrium");
  double epsilon = 0.0;
  stab->add_option("--epsilon", epsilon, "Initial adot perturbation")->required();
  stab->add_option("--eos", o.eos_spec, "Equation of state spec (must be dust)");
  add_param_options(stab, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help text or the usage complaint
    return code == 0 ? 0 : 64;
  }

  const CosmoParams p = params_of(o);

  if (sim->parsed()) {
    const Eos eos = Eos::parse(o.eos_spec, p.c);
    if (std::isnan(t1)) t1 = p.lambda > 0 ? 10.0 / (p.c * std::sqrt(p.lambda)) : 10.0;
    const Trajectory traj =
        integrate(p, eos, {o.a0, o.adot0, o.rho0}, {t0, t1}, integration_of(o));
    emit(o.out, trajectory_csv(traj, eos));
    if (!plot_base.empty()) write_plotdata(plot_base, traj);
    return 0;
  }

  if (cls->parsed()) {
    const Eos eos = Eos::parse(o.eos_spec, p.c);
    ClassifyConfig cfg;
    cfg.integration = integration_of(o);
    cfg.zero_band_rel = zero_band;
    emit(o.out, classify_json(classify(p, eos, {o.a0, o.adot0, o.rho0}, cfg)));
    return 0;
  }

  if (scan->parsed()) {
    std::vector<DustScanRow> rows;
    for (double alpha : parse_grid(alpha_spec)) {
      dust::Branch b;
      if (branch == "auto") {
        b = alpha <= 1.0 ? dust::Branch::low : dust::Branch::high;
      } else {
        b = branch == "low" ? dust::Branch::low : dust::Branch::high;
      }
      dust::DustSetup setup;
      setup.alpha = alpha;
      setup.roots = dust::cubic_roots(alpha);
      DustScanRow row;
      row.alpha = alpha;
      row.branch = dust::to_string(b);
      row.case_name = dust::to_string(setup.case_for(b));
      row.xi1 = setup.roots.count > 0 ? setup.roots.xi1 : kNaN;
      row.xi2 = setup.roots.count > 0 ? setup.roots.xi2 : kNaN;
      row.scenario = dust::classify_alpha(alpha, b, adot_sign);
      rows.push_back(std::move(row));
    }
    emit(o.out, dust_scan_csv(rows));
    return 0;
  }

  if (chk->parsed()) {
    const Eos eos = Eos::parse(o.eos_spec, p.c);
    if (!(rho_lo < rho_hi)) throw std::invalid_argument("eos-check: need rho-lo < rho-hi");
    std::vector<double> grid;
    for (int i = 0; i < chk_n; ++i) {
      grid.push_back(rho_lo * std::pow(rho_hi / rho_lo, double(i) / double(chk_n - 1)));
    }
    emit(o.out, assumptions_json(eos.check_assumptions(grid)));
    return 0;
  }

  if (fit->parsed()) {
    const Eos eos = Eos::parse(o.eos_spec, p.c);
    const State s0{o.a0, o.adot0, o.rho0};
    const IntegrationConfig icfg = integration_of(o);
    if (regime == "bigbang") {
      double Gamma = std::isnan(fit_gamma) ? infer_gamma(o.eos_spec) : fit_gamma;
      if (std::isnan(Gamma)) {
        throw std::invalid_argument("fit: --Gamma is required for this equation of state");
      }
      const Trajectory traj = integrate(p, eos, s0, {0.0, -kHorizon}, icfg);
      emit(o.out, fit_pair_json(fit_bigbang(traj, Gamma, p)));
    } else if (regime == "latetime") {
      const Trajectory traj = integrate(p, eos, s0, {0.0, kHorizon}, icfg);
      emit(o.out, fit_pair_json(fit_latetime(traj, p)));
    } else {
      if (std::isnan(fit_t1)) {
        if (!(p.lambda > 0)) throw domain_error("fit: static regime requires lambda > 0");
        fit_t1 = 30.0 / (p.c * std::sqrt(p.lambda));
      }
      const Trajectory traj = integrate(p, eos, s0, {0.0, fit_t1}, icfg);
      emit(o.out, fit_json(fit_static_approach(traj, p)));
    }
    return 0;
  }

  // stability
  const Eos eos = Eos::parse(o.eos_spec, p.c);
  emit(o.out, stability_json(stability_probe(p, eos, epsilon)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 64;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
