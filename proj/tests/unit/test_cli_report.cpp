#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "confspec/cli_report.hpp"
#include "confspec/errors.hpp"
#include "helpers.hpp"

using namespace confspec;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("confspec_" + name);
  fs::remove_all(dir);
  return dir;
}

nlohmann::json square_config(const fs::path& out) {
  return {{"model", {{"kind", "flat"}}},
          {"domain", {{"shape", "box"}, {"lo", {0, 0}}, {"hi", {1, 1}}}},
          {"h", 1.0 / 32},
          {"k", 6},
          {"inequalities", {{{"family", "yang"}, {"k", {1, 2, 3, 4, 5}}}, {{"family", "cheng_conjecture"}, {"k", 5}}}},
          {"output_dir", out.string()}};
}

void expect_config_error(const nlohmann::json& doc, const std::string& field) {
  try {
    parse_config(doc);
    FAIL() << "expected ConfigError on " << field;
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), field) << e.what();
  }
}

}  // namespace

TEST(CliReport, ParsesAndHashes) {
  const auto a = parse_config(square_config("/tmp/a"));
  const auto b = parse_config(square_config("/tmp/b"));
  EXPECT_EQ(a.model.dim, 2);
  EXPECT_EQ(a.inequalities.size(), 2u);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 16u);
  auto doc = square_config("/tmp/a");
  doc["k"] = 7;
  EXPECT_NE(parse_config(doc).hash(), a.hash());
  EXPECT_DOUBLE_EQ(a.level_h(2), 1.0 / 128);
}

TEST(CliReport, ConfigErrors) {
  auto doc = square_config("/tmp/x");
  doc["k"] = 0;
  expect_config_error(doc, "k");
  doc = square_config("/tmp/x");
  doc["bogus"] = 1;
  expect_config_error(doc, "bogus");
  doc = square_config("/tmp/x");
  doc["inequalities"][0]["k"] = {6};
  expect_config_error(doc, "inequalities[0].k");
  doc = square_config("/tmp/x");
  doc["inequalities"] = {{{"family", "poincare_disk_weighted"}, {"k", 1}}};
  expect_config_error(doc, "inequalities[0].family");
  doc = square_config("/tmp/x");
  doc.erase("h");
  expect_config_error(doc, "h");
  doc = square_config("/tmp/x");
  doc["model"]["kind"] = "klein";
  expect_config_error(doc, "model.kind");
  try {
    parse_config_text("{\n  \"h\": 0.1,\n  \"k\": ]\n}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(CliReport, RatioDefaultsComeFromTheDomain) {
  nlohmann::json doc = {{"model", {{"kind", "half_space_power"}, {"t", 2.0}}},
                        {"domain", {{"shape", "box"}, {"lo", {0, 1}}, {"hi", {1, 2}}}},
                        {"h", 1.0 / 16},
                        {"k", 3},
                        {"inequalities", {{{"family", "rho_ratio"}, {"k", 2}}, {{"family", "ab_bounds"}, {"k", 2}}}}};
  const auto cfg = parse_config(doc);
  EXPECT_DOUBLE_EQ(cfg.inequalities[0].params.rho_max, 1.0);
  EXPECT_DOUBLE_EQ(cfg.inequalities[0].params.rho_min, 0.25);
  EXPECT_DOUBLE_EQ(cfg.inequalities[1].params.a, 1.0);
  EXPECT_DOUBLE_EQ(cfg.inequalities[1].params.b, 4.0);
}

TEST(CliReport, RunWritesReportsAndIsDeterministic) {
  const fs::path one = fresh_dir("run1"), two = fresh_dir("run2");
  const auto a = run(parse_config(square_config(one)));
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.oracle.kind, "analytic");
  EXPECT_TRUE(a.oracle.passed);
  for (const char* f : {"eigenvalues.csv", "reports.json", "weyl.csv", "slack_vs_k.csv"})
    EXPECT_TRUE(fs::exists(one / f)) << f;
  const auto reports = nlohmann::json::parse(slurp(one / "reports.json"));
  EXPECT_EQ(reports.at("config_hash"), parse_config(square_config(one)).hash());
  EXPECT_TRUE(reports.contains("grid"));
  int conjecture = 0;
  for (const auto& r : reports.at("reports")) {
    if (r.at("family") == "yang") EXPECT_TRUE(r.at("satisfied").get<bool>());
    if (r.at("family") == "cheng_conjecture") ++conjecture;
  }
  EXPECT_EQ(conjecture, 1);

  run(parse_config(square_config(two)));
  for (const char* f : {"eigenvalues.csv", "reports.json", "weyl.csv", "slack_vs_k.csv"})
    EXPECT_EQ(slurp(one / f), slurp(two / f)) << f;

  const auto values = read_eigenvalue_csv((one / "eigenvalues.csv").string());
  ASSERT_EQ(values.size(), 6u);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(values[i], a.levels[0].spectrum.eigenvalues[i]);
  const auto rep = check_sequence_file((one / "eigenvalues.csv").string(), "yang", 2, 5);
  EXPECT_TRUE(rep.satisfied);
  fs::remove_all(one);
  fs::remove_all(two);
}

TEST(CliReport, FaultInjectionFailsTheRun) {
  // The flipped boundary weights leave the stiffness indefinite on the square.
  const fs::path dir = fresh_dir("fault");
  auto doc = square_config(dir);
  doc["inject_fault"] = true;
  EXPECT_THROW(run(parse_config(doc)), NumericalError);
  fs::remove_all(dir);
}

TEST(CliReport, LevelsProduceConvergence) {
  const fs::path dir = fresh_dir("ladder");
  auto doc = square_config(dir);
  doc["h"] = 1.0 / 16;
  doc["levels"] = 3;
  doc["k"] = 2;
  doc["inequalities"] = nlohmann::json::array();
  const auto out = run(parse_config(doc));
  ASSERT_TRUE(out.convergence.has_value());
  EXPECT_NEAR(out.convergence->orders[0], 2.0, 0.3);
  EXPECT_NEAR(out.convergence->richardson[0] / (2 * std::numbers::pi * std::numbers::pi), 1.0, 5e-4);
  EXPECT_TRUE(fs::exists(dir / "convergence.csv"));
  doc["levels"] = 2;
  EXPECT_THROW(convergence_study(parse_config(doc)), ConfigError);
  fs::remove_all(dir);
}

TEST(CliReport, IdenticalLevelsGiveNanOrder) {
  const auto r = testing_util::solve(ConformalFactorModel::flat(2), testing_util::unit_square(), 0.25, 2);
  std::vector<LevelResult> levels(3, LevelResult{0.25, 9, r});
  const auto rec = convergence_record(levels);
  ASSERT_EQ(rec.orders.size(), 2u);
  EXPECT_TRUE(std::isnan(rec.orders[0]));
  EXPECT_FALSE(rec.notes[0].empty());
}

TEST(CliReport, ThreadsFromEnvironment) {
  ::unsetenv("CONFSPEC_THREADS");
  EXPECT_EQ(configured_threads(), 1);
  ::setenv("CONFSPEC_THREADS", "3", 1);
  EXPECT_EQ(configured_threads(), 3);
  ::setenv("CONFSPEC_THREADS", "zero", 1);
  EXPECT_EQ(configured_threads(), 1);
  ::unsetenv("CONFSPEC_THREADS");
}

TEST(CliReport, ReadsPlainEigenvalueLists) {
  const fs::path p = fs::path(::testing::TempDir()) / "plain.csv";
  std::ofstream(p) << "# square\n19.739208802178716\n49.348022005446793\n";
  const auto v = read_eigenvalue_csv(p.string());
  ASSERT_EQ(v.size(), 2u);
  EXPECT_DOUBLE_EQ(v[1], 49.348022005446793);
  fs::remove(p);
}
