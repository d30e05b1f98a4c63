// config.hpp
//
// Run configuration: a plain-text file of `section.key = value` lines.
//
//   # comment                    blank lines and '#' comments are ignored
//   material.lambda = 1.0
//   study.deltas = 0.4, 0.2, 0.1 lists are comma separated
//
// Unknown keys, duplicate keys, malformed values and violated constraints are
// all collected and reported together.

#pragma once

#include "material.hpp"
#include "solver.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rodlimit {

struct ConfigIssue {
  std::string key;
  std::string message;
};

/// Thrown with every problem found in a configuration.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<ConfigIssue> issues)
      : std::runtime_error(summary(issues)), issues_(std::move(issues)) {}
  const std::vector<ConfigIssue> &issues() const { return issues_; }

private:
  static std::string summary(const std::vector<ConfigIssue> &issues) {
    std::string s = "invalid configuration:";
    for (const auto &i : issues)
      s += " [" + i.key + "] " + i.message + ";";
    return s;
  }
  std::vector<ConfigIssue> issues_;
};

struct LawConfig {
  DegradationKind degradation = DegradationKind::QuadraticAT;
  DamageEnergyKind damage_energy = DamageEnergyKind::AT2;
  std::vector<double> degradation_table;
  std::vector<double> damage_energy_table;
};

struct MeshConfig {
  int nxy = 16;
  int nz = 32;
  int nz1d = 64;
};

struct StudyConfig {
  std::vector<double> deltas = {0.4, 0.2, 0.1};
  std::string output_dir = "out";
  bool warm_start = true;
};

struct RecoveryConfig {
  std::string source = "kink"; // kink | affine | minimizer
  double kink_at = 0.5;
  double first_slope_factor = 0.5; // first slope = -factor * eps_z
  std::vector<double> deltas = {0.4, 0.2, 0.1, 0.05};
};

struct RunConfig {
  MaterialParams material;
  LawConfig law;
  MeshConfig mesh;
  SolverConfig solver;
  StudyConfig study;
  RecoveryConfig recovery;

  ConstitutiveLaw constitutive_law() const {
    TabulatedCurve dt, wt;
    if (law.degradation == DegradationKind::Tabulated)
      dt = TabulatedCurve(law.degradation_table);
    if (law.damage_energy == DamageEnergyKind::Tabulated)
      wt = TabulatedCurve(law.damage_energy_table);
    return ConstitutiveLaw(law.degradation, law.damage_energy, material.eta, material.w1, dt,
                           wt);
  }
};

namespace detail {

inline std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool parse_double(const std::string &s, double &out) {
  const auto t = trim(s);
  if (t.empty())
    return false;
  const char *end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline bool parse_int(const std::string &s, long long &out) {
  const auto t = trim(s);
  if (t.empty())
    return false;
  const char *end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline bool parse_list(const std::string &s, std::vector<double> &out) {
  out.clear();
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v;
    if (!parse_double(item, v))
      return false;
    out.push_back(v);
  }
  return !out.empty();
}

} // namespace detail

/// Parses and validates configuration text. Throws ConfigError.
inline RunConfig parse_config(const std::string &text) {
  RunConfig cfg;
  std::vector<ConfigIssue> issues;
  std::map<std::string, std::string> seen;

  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = detail::trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({"line " + std::to_string(lineno), "expected 'key = value'"});
      continue;
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (seen.count(key))
      issues.push_back({key, "duplicate key"});
    seen[key] = value;
  }

  auto num = [&](const std::string &key, double &dst) {
    if (auto it = seen.find(key); it != seen.end()) {
      if (!detail::parse_double(it->second, dst))
        issues.push_back({key, "not a number: '" + it->second + "'"});
      seen.erase(it);
    }
  };
  auto integer = [&](const std::string &key, auto &dst) {
    if (auto it = seen.find(key); it != seen.end()) {
      long long v;
      if (!detail::parse_int(it->second, v))
        issues.push_back({key, "not an integer: '" + it->second + "'"});
      else
        dst = static_cast<std::remove_reference_t<decltype(dst)>>(v);
      seen.erase(it);
    }
  };
  auto list = [&](const std::string &key, std::vector<double> &dst) {
    if (auto it = seen.find(key); it != seen.end()) {
      if (!detail::parse_list(it->second, dst))
        issues.push_back({key, "not a comma-separated list of numbers"});
      seen.erase(it);
    }
  };
  auto text_value = [&](const std::string &key, std::string &dst) {
    if (auto it = seen.find(key); it != seen.end()) {
      dst = it->second;
      seen.erase(it);
    }
  };
  auto boolean = [&](const std::string &key, bool &dst) {
    if (auto it = seen.find(key); it != seen.end()) {
      if (it->second == "true" || it->second == "1")
        dst = true;
      else if (it->second == "false" || it->second == "0")
        dst = false;
      else
        issues.push_back({key, "expected true or false"});
      seen.erase(it);
    }
  };

  auto &m = cfg.material;
  num("material.lambda", m.lambda);
  num("material.mu", m.mu);
  num("material.eta", m.eta);
  num("material.w1", m.w1);
  num("material.ell", m.ell);
  num("material.L", m.bigL);
  num("material.eps_z", m.eps_z);

  std::string deg, dmg;
  text_value("law.degradation", deg);
  text_value("law.damage_energy", dmg);
  list("law.degradation_table", cfg.law.degradation_table);
  list("law.damage_energy_table", cfg.law.damage_energy_table);
  if (deg == "quadratic" || deg.empty())
    cfg.law.degradation = DegradationKind::QuadraticAT;
  else if (deg == "tabulated")
    cfg.law.degradation = DegradationKind::Tabulated;
  else
    issues.push_back({"law.degradation", "expected quadratic or tabulated"});
  if (dmg == "AT2" || dmg.empty())
    cfg.law.damage_energy = DamageEnergyKind::AT2;
  else if (dmg == "AT1")
    cfg.law.damage_energy = DamageEnergyKind::AT1;
  else if (dmg == "tabulated")
    cfg.law.damage_energy = DamageEnergyKind::Tabulated;
  else
    issues.push_back({"law.damage_energy", "expected AT1, AT2 or tabulated"});

  integer("mesh.nxy", cfg.mesh.nxy);
  integer("mesh.nz", cfg.mesh.nz);
  integer("mesh.nz1d", cfg.mesh.nz1d);

  auto &s = cfg.solver;
  integer("solver.outer_max_iters", s.outer_max_iters);
  num("solver.outer_tol_alpha", s.outer_tol_alpha);
  num("solver.outer_tol_energy", s.outer_tol_energy);
  num("solver.cg_tol", s.cg_tol);
  integer("solver.cg_max_iters", s.cg_max_iters);
  num("solver.pgd_tol", s.pgd_tol);
  integer("solver.pgd_max_iters", s.pgd_max_iters);
  integer("solver.seed", s.seed);
  integer("solver.multistart", s.multistart);
  num("solver.init_perturbation", s.init_perturbation);

  list("study.deltas", cfg.study.deltas);
  text_value("study.output_dir", cfg.study.output_dir);
  boolean("study.warm_start", cfg.study.warm_start);

  text_value("recovery.source", cfg.recovery.source);
  num("recovery.kink_at", cfg.recovery.kink_at);
  num("recovery.first_slope_factor", cfg.recovery.first_slope_factor);
  list("recovery.deltas", cfg.recovery.deltas);

  for (const auto &[key, value] : seen)
    issues.push_back({key, "unknown key"});

  // constraint checks
  static const std::map<std::string, std::string> material_keys = {
      {"mu must be > 0", "material.mu"},      {"lambda + mu must be > 0", "material.lambda"},
      {"3 lambda + 2 mu must be > 0", "material.lambda"},
      {"eta must lie in (0,1)", "material.eta"}, {"w1 must be > 0", "material.w1"},
      {"ell must be > 0", "material.ell"},    {"L must be > 0", "material.L"},
      {"eps_z must be finite", "material.eps_z"}};
  for (const auto &e : validation_errors(m))
    issues.push_back({material_keys.at(e), e});
  if (cfg.mesh.nxy < 4)
    issues.push_back({"mesh.nxy", "must be >= 4"});
  if (cfg.mesh.nz < 2)
    issues.push_back({"mesh.nz", "must be >= 2"});
  if (cfg.mesh.nz1d < 2)
    issues.push_back({"mesh.nz1d", "must be >= 2"});
  for (const auto &e : s.validation_errors())
    issues.push_back({e.substr(0, e.find(' ')), e.substr(e.find(' ') + 1)});

  auto check_deltas = [&](const std::string &key, const std::vector<double> &d) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!(d[i] > 0.0 && d[i] <= 1.0)) {
        issues.push_back({key, "entries must lie in (0,1]"});
        return;
      }
      if (i > 0 && !(d[i] < d[i - 1])) {
        issues.push_back({key, "must be strictly decreasing"});
        return;
      }
    }
  };
  check_deltas("study.deltas", cfg.study.deltas);
  check_deltas("recovery.deltas", cfg.recovery.deltas);
  if (cfg.study.output_dir.empty())
    issues.push_back({"study.output_dir", "must not be empty"});
  const auto &src = cfg.recovery.source;
  if (src != "kink" && src != "affine" && src != "minimizer")
    issues.push_back({"recovery.source", "expected kink, affine or minimizer"});
  if (!(cfg.recovery.kink_at > 0.0 && cfg.recovery.kink_at < 1.0))
    issues.push_back({"recovery.kink_at", "must lie in (0,1)"});

  if (issues.empty()) {
    try {
      (void)cfg.constitutive_law();
    } catch (const ParameterError &e) {
      issues.push_back({"law", e.what()});
    }
  }
  if (!issues.empty())
    throw ConfigError(std::move(issues));
  return cfg;
}

inline RunConfig load_config(const std::string &path, std::string *raw_text = nullptr) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw std::ios_base::failure("cannot read config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  if (raw_text)
    *raw_text = ss.str();
  return parse_config(ss.str());
}

} // namespace rodlimit
