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

// semiflow: run verification suites from a config file and report.
//
// Exit status: 0 when every suite passes, 1 when any fails, 2 on a bad
// config or command line, 3 when the report cannot be written.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semiflow/cli/config.hpp"
#include "semiflow/cli/emit.hpp"
#include "semiflow/cli/runner.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

std::uint64_t seed_from_env() {
  const char* env = std::getenv("SEMIFLOW_SEED");
  if (!env || !*env) return kDefaultSeed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw semiflow::ConfigError(std::string("SEMIFLOW_SEED: not an integer: ") + env);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run semigroup verification suites described by a JSON config."};
  std::string config_path;
  std::string out_path;
  std::string format = "text";
  std::optional<std::uint64_t> seed_flag;
  int parallel = 1;
  std::vector<std::string> overrides;

  app.add_option("--config", config_path, "Suite config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "Report destination (default: stdout)");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", seed_flag, "Global seed (default 42, or SEMIFLOW_SEED)");
  app.add_option("--parallel", parallel, "Worker threads")->check(CLI::Range(1, 256));
  app.add_option("--override", overrides, "SUITE.tol=VALUE; repeatable")->take_all();
  CLI11_PARSE(app, argc, argv);

  semiflow::cli::SuiteConfig cfg;
  std::uint64_t seed = kDefaultSeed;
  try {
    seed = seed_flag ? *seed_flag : seed_from_env();
    cfg = semiflow::cli::load_config(config_path);
    for (const auto& o : overrides) semiflow::cli::apply_override(cfg, o);
  } catch (const std::exception& e) {
    std::cerr << "semiflow: " << e.what() << '\n';
    return 2;
  }

  const auto reports = semiflow::cli::run_suites(cfg, parallel, seed);
  try {
    semiflow::cli::emit_report(reports, semiflow::cli::parse_format(format), out_path, seed);
  } catch (const std::exception& e) {
    std::cerr << "semiflow: " << e.what() << '\n';
    return 3;
  }
  for (const auto& r : reports) {
    if (!r.pass()) return 1;
  }
  return 0;
}
