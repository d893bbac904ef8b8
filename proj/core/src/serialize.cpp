#include "cosmoee/serialize.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace cosmoee {

namespace {

using Json = nlohmann::ordered_json;

// Shared non-finite policy for every JSON report.
Json jnum(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

Json fit_object(const AsymptoticFit& fit) {
  Json j;
  j["regime"] = to_string(fit.regime);
  j["fitted"] = jnum(fit.fitted);
  j["target"] = jnum(fit.target);
  j["rel_err"] = jnum(fit.rel_err);
  j["window"] = Json::array({jnum(fit.window.first), jnum(fit.window.second)});
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

double parse_field(const char* s, char** end) {
  const double v = std::strtod(s, end);
  if (*end == s) throw std::invalid_argument("trajectory CSV: malformed number");
  return v;
}

}  // namespace

std::string fmt_roundtrip(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const Trajectory& traj, const Eos& eos) {
  std::string out = "t,a,adot,rho,P,X,flat_a3\n";
  for (const Sample& s : traj.samples) {
    out += fmt_roundtrip(s.t);
    out += ',';
    out += fmt_roundtrip(s.state.a);
    out += ',';
    out += fmt_roundtrip(s.state.adot);
    out += ',';
    out += fmt_roundtrip(s.state.rho);
    out += ',';
    out += fmt_roundtrip(eos.pressure(s.state.rho));
    out += ',';
    out += fmt_roundtrip(s.X);
    out += ',';
    out += fmt_roundtrip(s.flat_a3);
    out += '\n';
  }
  return out;
}

std::vector<std::array<double, 7>> parse_trajectory_csv(std::string_view text) {
  constexpr std::string_view header = "t,a,adot,rho,P,X,flat_a3";
  std::size_t pos = text.find('\n');
  if (pos == std::string_view::npos || text.substr(0, pos) != header) {
    throw std::invalid_argument("trajectory CSV: missing or wrong header");
  }
  std::vector<std::array<double, 7>> rows;
  ++pos;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string line(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty()) continue;
    std::array<double, 7> row{};
    const char* s = line.c_str();
    char* end = nullptr;
    for (int i = 0; i < 7; ++i) {
      row[i] = parse_field(s, &end);
      s = end;
      if (i < 6) {
        if (*s != ',') throw std::invalid_argument("trajectory CSV: expected 7 columns");
        ++s;
      }
    }
    if (*s != '\0') throw std::invalid_argument("trajectory CSV: trailing characters");
    rows.push_back(row);
  }
  return rows;
}

std::string classify_json(const ScenarioReport& rep) {
  Json j;
  j["K"] = jnum(rep.K);
  j["flags"] = {{"cond8", rep.flags.cond_8},
                {"condEx", rep.flags.cond_ex},
                {"condEsc", rep.flags.cond_esc}};
  j["past"] = {{"label", to_string(rep.past)},
               {"t_minus", jnum(rep.t_minus)},
               {"evidence", rep.past_evidence}};
  j["future"] = {{"label", to_string(rep.future)},
                 {"t_plus", jnum(rep.t_plus)},
                 {"evidence", rep.future_evidence}};
  j["composite"] = rep.composite;
  return dump(j);
}

std::string fit_json(const AsymptoticFit& fit) { return dump(fit_object(fit)); }

std::string fit_pair_json(const FitPair& pair) {
  Json j;
  j["a"] = fit_object(pair.a_fit);
  j["rho"] = fit_object(pair.rho_fit);
  return dump(j);
}

std::string stability_json(const StabilityProbe& probe) {
  Json j;
  j["growth_rate"] = jnum(probe.growth_rate);
  j["target"] = jnum(probe.target);
  j["rel_err"] = jnum(probe.rel_err);
  j["drift"] = jnum(probe.drift);
  return dump(j);
}

std::string assumptions_json(const AssumptionReport& rep) {
  Json j;
  j["nonnegative_pressure"] = rep.nonnegative_pressure;
  j["causal_slope"] = rep.causal_slope;
  j["pressure_vanishes"] = rep.pressure_vanishes;
  j["high_density_linear"] = rep.high_density_linear;
  j["gamma_high"] = jnum(rep.gamma_high);
  j["sigma_correction"] = jnum(rep.sigma_correction);
  j["low_density_polytropic"] = rep.low_density_polytropic;
  j["gamma_low"] = jnum(rep.gamma_low);
  return dump(j);
}

std::string dust_scan_csv(const std::vector<DustScanRow>& rows) {
  std::string out = "alpha,branch,case,xi1,xi2,scenario\n";
  for (const DustScanRow& r : rows) {
    out += fmt_roundtrip(r.alpha);
    out += ',';
    out += r.branch;
    out += ',';
    out += r.case_name;
    out += ',';
    out += fmt_roundtrip(r.xi1);
    out += ',';
    out += fmt_roundtrip(r.xi2);
    out += ',';
    out += r.scenario;
    out += '\n';
  }
  return out;
}

void write_plotdata(const std::string& base, const Trajectory& traj) {
  auto column = [&](auto&& pick) {
    std::string out;
    for (const Sample& s : traj.samples) {
      out += fmt_roundtrip(s.t);
      out += ' ';
      out += fmt_roundtrip(pick(s));
      out += '\n';
    }
    return out;
  };
  atomic_write_file(base + ".a.dat", column([](const Sample& s) { return s.state.a; }));
  atomic_write_file(base + ".rho.dat", column([](const Sample& s) { return s.state.rho; }));
  atomic_write_file(base + ".adot.dat", column([](const Sample& s) { return s.state.adot; }));
}

void atomic_write_file(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + tmp);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::remove(tmp.c_str());
      throw std::runtime_error("write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

}  // namespace cosmoee
