// Copyright 2026 The semiflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "semiflow/cli/config.hpp"
#include "semiflow/cli/emit.hpp"
#include "semiflow/cli/runner.hpp"

namespace semiflow::cli {
namespace {

const std::filesystem::path kFixtures = SEMIFLOW_FIXTURE_DIR;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text, kFixtures);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kZeroSpec = R"({"kind": "exponential", "generator": {"type": "zero", "d": 2}})";

std::string one_suite(const std::string& name, const std::string& spec, const std::string& extra = "") {
  return R"({"suites": [{"name": ")" + name + R"(", "spec": )" + spec + R"(, "tol": 1e-8)" + extra +
         "}]}";
}

// ---------------------------------------------------------------------------
// load_config

TEST(LoadConfig, MinimalFixture) {
  const SuiteConfig cfg = load_config(kFixtures / "minimal.json");
  ASSERT_EQ(cfg.suites.size(), 1u);
  EXPECT_EQ(cfg.suites[0].name, "semigroup-law");
  EXPECT_EQ(cfg.suites[0].id, "semigroup-law");
  EXPECT_GT(cfg.suites[0].tol, 0.0);
}

TEST(LoadConfig, FullFixtureKeepsDeclaredOrder) {
  for (const char* file : {"full_dephasing.json", "full_identity.json"}) {
    const SuiteConfig cfg = load_config(kFixtures / file);
    // Oracle: the names as a generic JSON parser sees them.
    const auto raw = Json::parse(read_file(kFixtures / file));
    ASSERT_EQ(cfg.suites.size(), 12u) << file;
    ASSERT_EQ(raw["suites"].size(), 12u);
    std::set<std::string> distinct;
    for (std::size_t k = 0; k < 12; ++k) {
      EXPECT_EQ(cfg.suites[k].name, raw["suites"][k]["name"].get<std::string>());
      EXPECT_EQ(cfg.suites[k].tol, raw["suites"][k]["tol"].get<double>());
      distinct.insert(cfg.suites[k].name);
    }
    EXPECT_EQ(distinct.size(), kSuiteNames.size());
  }
}

TEST(LoadConfig, UnknownSuiteNameIsNamed) {
  const std::string msg = error_of(one_suite("semigroup-lav", kZeroSpec));
  EXPECT_NE(msg.find("semigroup-lav"), std::string::npos) << msg;
  EXPECT_NE(msg.find("suites[0].name"), std::string::npos) << msg;
}

TEST(LoadConfig, UnknownKeysRejectedAtEveryLevel) {
  EXPECT_NE(error_of(R"({"suites": [], "extra": 1})").find("'extra'"), std::string::npos);
  EXPECT_NE(error_of(one_suite("semigroup-law", kZeroSpec, R"(, "colour": 1)")).find("'colour'"),
            std::string::npos);
  EXPECT_NE(error_of(one_suite("semigroup-law",
                               R"({"kind": "exponential", "generator": {"type": "zero", "d": 2, "x": 0}})"))
                .find("suites[0].spec.generator: unknown key 'x'"),
            std::string::npos);
  EXPECT_NE(error_of(one_suite("semigroup-law", kZeroSpec, R"(, "params": {"t_seq": [1]})"))
                .find("'t_seq'"),
            std::string::npos);
  EXPECT_NE(error_of(one_suite("pettis", kZeroSpec, R"(, "params": {"quadrature": {"order": 3}})"))
                .find("quadrature: unknown key 'order'"),
            std::string::npos);
}

TEST(LoadConfig, ParseErrorReportsLineAndColumn) {
  const std::string msg = error_of("{\n  \"suites\": [\n    {\"name\": \"pettis\",,}\n  ]\n}\n");
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("column"), std::string::npos) << msg;
}

TEST(LoadConfig, ValidationNamesOffendingField) {
  EXPECT_NE(error_of(one_suite("pettis", R"({"kind": "shift_example", "n": 16})")).find("'step'"),
            std::string::npos);
  EXPECT_NE(error_of(one_suite("pettis", kZeroSpec, R"(, "params": {"mode": "both"})"))
                .find("suites[0].params.mode"),
            std::string::npos);
  EXPECT_NE(error_of(one_suite("wot-zero", kZeroSpec, R"(, "params": {"a": "matrices/missing.txt"})"))
                .find("suites[0].params.a"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"suites": [{"name": "pettis", "spec": )" + std::string(kZeroSpec) + "}]}")
                .find("'tol'"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"suites": [{"name": "pettis", "spec": )" + std::string(kZeroSpec) +
                     R"(, "tol": -1}]})")
                .find("suites[0].tol"),
            std::string::npos);
  // Two suites with the same name need distinct ids.
  const std::string twice = R"({"suites": [{"name": "pettis", "spec": )" + std::string(kZeroSpec) +
                            R"(, "tol": 1}, {"name": "pettis", "spec": )" + kZeroSpec +
                            R"(, "tol": 1}]})";
  EXPECT_NE(error_of(twice).find("duplicate"), std::string::npos);
}

TEST(LoadConfig, MatrixPathsResolveAgainstConfigDirectory) {
  const SuiteConfig cfg = load_config(kFixtures / "full_dephasing.json");
  const std::string g = cfg.suites[0].spec["generator"]["g"].get<std::string>();
  EXPECT_TRUE(std::filesystem::path(g).is_absolute());
  EXPECT_TRUE(std::filesystem::exists(g));
}

TEST(LoadConfig, MissingFileIsIoError) {
  EXPECT_THROW(load_config(kFixtures / "does_not_exist.json"), IoError);
}

TEST(Override, AppliesByNameOrId) {
  SuiteConfig cfg = load_config(kFixtures / "full_dephasing.json");
  apply_override(cfg, "pettis.tol=0.5");
  apply_override(cfg, "gks-form.tol=1e-3");
  for (const auto& s : cfg.suites) {
    if (s.name == "pettis") {
      EXPECT_EQ(s.tol, 0.5);
    }
    if (s.name == "gks-form") {
      EXPECT_EQ(s.tol, 1e-3);
    }
  }
  EXPECT_THROW(apply_override(cfg, "pettis.eps=1"), ConfigError);
  EXPECT_THROW(apply_override(cfg, "nope.tol=1"), ConfigError);
  EXPECT_THROW(apply_override(cfg, "pettis.tol=abc"), ConfigError);
  EXPECT_THROW(apply_override(cfg, "pettis"), ConfigError);
}

// ---------------------------------------------------------------------------
// run_suites

TEST(RunSuites, IdentityFullRunPasses) {
  const SuiteConfig cfg = load_config(kFixtures / "full_identity.json");
  const auto reports = run_suites(cfg, 1, 42);
  ASSERT_EQ(reports.size(), 12u);
  for (std::size_t k = 0; k < reports.size(); ++k) {
    EXPECT_EQ(reports[k].suite, cfg.suites[k].name);
    EXPECT_TRUE(reports[k].pass()) << reports[k].suite << " " << reports[k].error.value_or("");
    // The shift family is a genuine discretization; its residual is O(step).
    const double cap = reports[k].suite == "omega-invariance" ? 0.1 : 1e-8;
    EXPECT_LE(reports[k].max_residual(), cap) << reports[k].suite;
  }
}

TEST(RunSuites, DephasingFullRunMatchesClosedForms) {
  const SuiteConfig cfg = load_config(kFixtures / "full_dephasing.json");
  const auto reports = run_suites(cfg, 2, 42);
  ASSERT_EQ(reports.size(), 12u);
  for (const auto& r : reports) {
    EXPECT_TRUE(r.pass()) << r.suite << " " << r.error.value_or("");
  }
  auto by_name = [&](const std::string& n) -> const VerificationReport& {
    for (const auto& r : reports) {
      if (r.suite == n) return r;
    }
    throw std::runtime_error("missing " + n);
  };
  // T_t(s_x) = e^{-2t} s_x, so every matrix-unit pairing moves by at most |e^{-2t} - 1|.
  EXPECT_NEAR(by_name("wot-zero").residual("final_residual").value, 1.0 - std::exp(-2e-4), 1e-15);
  // Plain quotient error ||((e^{-2h} - 1)/h + 2) s_x|| at the last default step.
  const double h = 0.00625;
  EXPECT_NEAR(by_name("difference-quotient").residual("final_error").value,
              std::abs((std::exp(-2.0 * h) - 1.0) / h + 2.0), 1e-9);
  EXPECT_LE(by_name("resolvent-agreement").residual("laplace_vs_direct").value, 1e-6);
  EXPECT_LE(by_name("pettis").residual("pairing_residual").value, 1e-12);
}

TEST(RunSuites, ZeroToleranceFailsOnlyThatSuite) {
  SuiteConfig cfg = load_config(kFixtures / "full_dephasing.json");
  apply_override(cfg, "exp-bound.tol=0");
  const auto reports = run_suites(cfg, 3, 42);
  for (const auto& r : reports) {
    EXPECT_EQ(r.pass(), r.suite != "exp-bound") << r.suite;
  }
}

TEST(RunSuites, ErrorsBecomeFailedReports) {
  const std::string text = R"({"suites": [
    {"name": "gks-form", "spec": )" + std::string(kZeroSpec) + R"(, "tol": 1e-8},
    {"name": "omega-invariance", "spec": )" + kZeroSpec + R"(, "tol": 1e-8},
    {"name": "semigroup-law", "spec": )" + kZeroSpec + R"(, "tol": 1e-8}]})";
  const auto reports = run_suites(parse_config(text, kFixtures), 2, 42);
  ASSERT_EQ(reports.size(), 3u);
  EXPECT_FALSE(reports[0].pass());
  ASSERT_TRUE(reports[0].error.has_value());
  EXPECT_NE(reports[0].error->find("gks-form"), std::string::npos);
  EXPECT_FALSE(reports[1].pass());
  EXPECT_TRUE(reports[2].pass());
}

TEST(RunSuites, DeterministicAcrossParallelism) {
  const SuiteConfig cfg = load_config(kFixtures / "full_dephasing.json");
  const std::string serial = format_json(run_suites(cfg, 1, 42), 42);
  for (int p : {2, 4, 12, 32}) {
    EXPECT_EQ(format_json(run_suites(cfg, p, 42), 42), serial) << "parallelism " << p;
  }
}

TEST(RunSuites, SeedDrivesRandomDraws) {
  const std::string text = one_suite("commutation", kZeroSpec);
  const SuiteConfig cfg = parse_config(text, kFixtures);
  const auto a = run_suites(cfg, 1, 1);
  const auto b = run_suites(cfg, 1, 2);
  EXPECT_EQ(std::get<std::int64_t>(*a[0].find_meta("seed")), 1);
  EXPECT_EQ(std::get<std::int64_t>(*b[0].find_meta("seed")), 2);
  EXPECT_NE(a[0].residuals[0].value, b[0].residuals[0].value);
  EXPECT_EQ(suite_seed(42, 3), 42u ^ 3u);
}

TEST(RunSuites, RejectsBadParallelism) {
  EXPECT_THROW(run_suites(load_config(kFixtures / "minimal.json"), 0, 42), DomainError);
}

// ---------------------------------------------------------------------------
// emit_report

TEST(EmitReport, EmptyList) {
  const auto j = Json::parse(format_json({}));
  EXPECT_EQ(j["version"], kReportVersion);
  EXPECT_TRUE(j["reports"].is_array());
  EXPECT_TRUE(j["reports"].empty());
}

TEST(EmitReport, OnePassingSuite) {
  VerificationReport r("pettis");
  r.add("pairing_residual", 1e-15, 1e-12).meta("mode", "shared").meta("functionals", 4);
  const auto j = Json::parse(format_json({r}));
  ASSERT_EQ(j["reports"].size(), 1u);
  EXPECT_EQ(j["reports"][0]["suite"], "pettis");
  EXPECT_EQ(j["reports"][0]["pass"], true);
  EXPECT_EQ(j["reports"][0]["residuals"]["pairing_residual"].get<double>(), 1e-15);
  EXPECT_EQ(j["reports"][0]["metadata"]["mode"], "shared");
  EXPECT_FALSE(j["reports"][0].contains("error"));
}

TEST(EmitReport, FailureAndNonFiniteResiduals) {
  VerificationReport bad("closedness");
  bad.add("generator_at_limit", NAN, 1e-6);
  VerificationReport err("gks-form");
  err.error = "boom";
  const auto j = Json::parse(format_json({bad, err}));
  EXPECT_EQ(j["reports"][0]["pass"], false);
  EXPECT_TRUE(j["reports"][0]["residuals"]["generator_at_limit"].is_null());
  EXPECT_EQ(j["reports"][1]["error"], "boom");
}

TEST(EmitReport, JsonRoundTripIsBitIdentical) {
  const auto reports = run_suites(load_config(kFixtures / "full_dephasing.json"), 4, 42);
  const std::string text = format_json(reports, 42);
  EXPECT_EQ(Json::parse(text).dump(2) + "\n", text);
  // Every residual survives the text form exactly.
  const auto j = Json::parse(text);
  for (std::size_t k = 0; k < reports.size(); ++k) {
    for (const auto& res : reports[k].residuals) {
      EXPECT_EQ(j["reports"][k]["residuals"][res.name].get<double>(), res.value);
    }
  }
}

TEST(EmitReport, TextHasOneLinePerSuiteAndTable) {
  VerificationReport a("pettis");
  a.add("pairing_residual", 0.0, 1.0);
  VerificationReport b("gks-form");
  b.add("generator_vs_sesquilinear", 2.0, 1.0);
  const std::string text = format_text({a, b});
  EXPECT_EQ(text.rfind("PASS  pettis", 0), 0u);
  EXPECT_NE(text.find("\nFAIL  gks-form"), std::string::npos);
  EXPECT_NE(text.find("generator_vs_sesquilinear"), std::string::npos);
  EXPECT_NE(text.find("1/2 suites passed"), std::string::npos);
}

TEST(EmitReport, WriteFailureIsIoError) {
  EXPECT_THROW(emit_report({}, ReportFormat::kJson, "/nonexistent-dir/report.json"), IoError);
  const auto path = std::filesystem::temp_directory_path() / "semiflow_emit_test.json";
  emit_report({}, ReportFormat::kJson, path.string());
  EXPECT_EQ(Json::parse(read_file(path))["reports"].size(), 0u);
  std::filesystem::remove(path);
  EXPECT_THROW(parse_format("yaml"), ConfigError);
}

}  // namespace
}  // namespace semiflow::cli
