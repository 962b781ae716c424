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

#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "semiflow/errors.hpp"
#include "semiflow/report.hpp"

namespace semiflow::cli {

inline constexpr int kReportVersion = 1;

enum class ReportFormat { kJson, kText };

inline ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::kJson;
  if (s == "text") return ReportFormat::kText;
  throw ConfigError("unknown report format '" + s + "' (expected json or text)");
}

/// {version, seed, reports: [{suite, pass, residuals, tolerances, metadata[, error]}]}.
/// Wall time is left out so identical runs give identical bytes.
inline nlohmann::json report_json(const std::vector<VerificationReport>& reports,
                                  std::optional<std::uint64_t> seed = std::nullopt) {
  nlohmann::json doc;
  doc["version"] = kReportVersion;
  if (seed) doc["seed"] = *seed;
  doc["reports"] = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["suite"] = r.suite;
    j["pass"] = r.pass();
    j["residuals"] = nlohmann::json::object();
    j["tolerances"] = nlohmann::json::object();
    for (const auto& res : r.residuals) {
      j["residuals"][res.name] = res.value;  // non-finite values serialize as null
      j["tolerances"][res.name] = res.tolerance;
    }
    j["metadata"] = nlohmann::json::object();
    for (const auto& [k, v] : r.metadata) {
      std::visit([&](const auto& x) { j["metadata"][k] = x; }, v);
    }
    if (r.error) j["error"] = *r.error;
    doc["reports"].push_back(std::move(j));
  }
  return doc;
}

inline std::string format_json(const std::vector<VerificationReport>& reports,
                               std::optional<std::uint64_t> seed = std::nullopt) {
  return report_json(reports, seed).dump(2) + "\n";
}

/// One status line per suite, then a residual table.
inline std::string format_text(const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  char buf[256];
  std::size_t passed = 0;
  for (const auto& r : reports) {
    if (r.pass()) ++passed;
    std::string id = r.suite;
    if (auto v = r.find_meta("id")) {
      if (const auto* s = std::get_if<std::string>(&*v)) id = *s;
    }
    std::snprintf(buf, sizeof buf, "%s  %-28s max residual %.3e  (%.2fs)", r.pass() ? "PASS" : "FAIL",
                  id.c_str(), r.max_residual(), r.wall_time_seconds);
    os << buf;
    if (r.error) os << "  error: " << *r.error;
    os << '\n';
  }
  os << '\n';
  std::snprintf(buf, sizeof buf, "%-28s %-30s %12s %12s  %s\n", "suite", "residual", "value", "tol", "ok");
  os << buf;
  for (const auto& r : reports) {
    std::string id = r.suite;
    if (auto v = r.find_meta("id")) {
      if (const auto* s = std::get_if<std::string>(&*v)) id = *s;
    }
    for (const auto& res : r.residuals) {
      std::snprintf(buf, sizeof buf, "%-28s %-30s %12.4e %12.4e  %s\n", id.c_str(), res.name.c_str(),
                    res.value, res.tolerance, res.ok() ? "yes" : "NO");
      os << buf;
    }
  }
  os << '\n' << passed << '/' << reports.size() << " suites passed\n";
  return os.str();
}

/// Writes to `out_path`, or stdout when it is empty.
inline void emit_report(const std::vector<VerificationReport>& reports, ReportFormat format,
                        const std::string& out_path, std::optional<std::uint64_t> seed = std::nullopt) {
  const std::string body = format == ReportFormat::kJson ? format_json(reports, seed) : format_text(reports);
  if (out_path.empty()) {
    std::cout << body;
    std::cout.flush();
    if (!std::cout) throw IoError("write to stdout failed");
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + out_path + "' for writing");
  out << body;
  out.flush();
  if (!out) throw IoError("write to '" + out_path + "' failed");
}

}  // namespace semiflow::cli
