#include "rodlimit/config.hpp"
#include "rodlimit/io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rodlimit;

namespace {

std::vector<std::string> issue_keys(const std::string &text) {
  try {
    parse_config(text);
  } catch (const ConfigError &e) {
    std::vector<std::string> keys;
    for (const auto &i : e.issues())
      keys.push_back(i.key);
    return keys;
  }
  return {};
}

bool has(const std::vector<std::string> &v, const std::string &k) {
  return std::find(v.begin(), v.end(), k) != v.end();
}

} // namespace

TEST(Config, ShippedDefaultParses) {
  const auto cfg = load_config(RODLIMIT_SOURCE_DIR "/configs/default.cfg");
  EXPECT_EQ(cfg.material.eps_z, 2.0);
  EXPECT_EQ(cfg.law.damage_energy, DamageEnergyKind::AT2);
  EXPECT_EQ(cfg.mesh.nxy, 16);
  EXPECT_EQ(cfg.study.deltas, (std::vector<double>{0.4, 0.2, 0.1}));
  EXPECT_EQ(cfg.solver.seed, 1u);
  EXPECT_TRUE(cfg.study.warm_start);
}

TEST(Config, DefaultsAndComments) {
  const auto cfg = parse_config("# nothing but a comment\n\nmaterial.eps_z = 0.5 # trailing\n");
  EXPECT_EQ(cfg.material.eps_z, 0.5);
  EXPECT_EQ(cfg.mesh.nz, 32);
  EXPECT_EQ(cfg.recovery.source, "kink");
}

TEST(Config, EveryIssueReportedAtOnce) {
  const auto keys = issue_keys("material.mu = -1\n"
                               "material.eta = 2\n"
                               "mesh.nxy = 2\n"
                               "solver.cg_tol = 0\n"
                               "study.deltas = 0.1, 0.2\n"
                               "bogus.key = 1\n"
                               "material.w1 = abc\n"
                               "no equals sign here\n");
  EXPECT_TRUE(has(keys, "material.mu"));
  EXPECT_TRUE(has(keys, "material.eta"));
  EXPECT_TRUE(has(keys, "mesh.nxy"));
  EXPECT_TRUE(has(keys, "solver.cg_tol"));
  EXPECT_TRUE(has(keys, "study.deltas"));
  EXPECT_TRUE(has(keys, "bogus.key"));
  EXPECT_TRUE(has(keys, "material.w1"));
  EXPECT_TRUE(has(keys, "line 8"));
}

TEST(Config, DuplicatesAndBadEnums) {
  EXPECT_TRUE(has(issue_keys("mesh.nz = 4\nmesh.nz = 5\n"), "mesh.nz"));
  EXPECT_TRUE(has(issue_keys("law.damage_energy = AT3\n"), "law.damage_energy"));
  EXPECT_TRUE(has(issue_keys("law.degradation = cubic\n"), "law.degradation"));
  EXPECT_TRUE(has(issue_keys("recovery.source = spline\n"), "recovery.source"));
  EXPECT_TRUE(has(issue_keys("study.warm_start = maybe\n"), "study.warm_start"));
  EXPECT_TRUE(has(issue_keys("study.deltas = 0.4, 0\n"), "study.deltas"));
  EXPECT_TRUE(has(issue_keys("mesh.nz = 3.5\n"), "mesh.nz"));
  EXPECT_TRUE(has(issue_keys("material.lambda = -0.8\n"), "material.lambda")); // E < 0
}

TEST(Config, TabulatedLaw) {
  const auto cfg = parse_config("material.eta = 0.1\n"
                                "law.degradation = tabulated\n"
                                "law.degradation_table = 1, 0.6, 0.3, 0.1\n"
                                "law.damage_energy = tabulated\n"
                                "law.damage_energy_table = 0, 0.2, 0.5, 1\n");
  const auto law = cfg.constitutive_law();
  EXPECT_DOUBLE_EQ(law.a(1.0), 0.1);
  EXPECT_DOUBLE_EQ(law.w(1.0), 1.0);
  EXPECT_TRUE(has(issue_keys("law.degradation = tabulated\n"), "law"));
  EXPECT_TRUE(has(issue_keys("law.degradation = tabulated\n"
                             "law.degradation_table = 1, 0.7, 0.8, 0.01\n"),
                  "law"));
}

TEST(Config, MissingFile) {
  EXPECT_THROW(load_config("/nonexistent/run.cfg"), std::ios_base::failure);
}

TEST(Io, HashIsStableAndSensitive) {
  EXPECT_EQ(config_hash(""), "cbf29ce484222325"); // FNV-1a offset basis
  EXPECT_EQ(config_hash("a"), "af63dc4c8601ec8c");
  EXPECT_NE(config_hash("mesh.nz = 4\n"), config_hash("mesh.nz = 5\n"));
}

TEST(Io, SeventeenDigitsRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) {
    EXPECT_EQ(std::stod(fmt17(v)), v);
  }
}

TEST(Io, CsvDeclaresHash) {
  CsvTable t("00ff", {"a", "b"});
  t.add({1.0, 0.5});
  EXPECT_EQ(t.str(), "# config_hash=00ff\na,b\n1,0.5\n");
}

TEST(Io, SvgDeclaresHashAndSkipsNonPositive) {
  LogLogPlot p("t", "x", "y");
  p.add_series("s", {0.4, 0.2, 0.1}, {1.0, 0.0, 0.01});
  const auto s = p.svg("abc");
  EXPECT_NE(s.find("config_hash=abc"), std::string::npos);
  std::size_t circles = 0;
  for (auto pos = s.find("<circle"); pos != std::string::npos; pos = s.find("<circle", pos + 1))
    ++circles;
  EXPECT_EQ(circles, 2u);
}

TEST(Io, UnwritablePathThrows) {
  EXPECT_THROW(write_text("/nonexistent-dir/x.csv", "x"), IoError);
}
