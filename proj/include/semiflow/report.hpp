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

#include <cmath>
#include <cstdint>
#include <algorithm>
#include <optional>
#include <type_traits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "semiflow/errors.hpp"

namespace semiflow {

struct Residual {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;

  bool ok() const noexcept { return std::isfinite(value) && value <= tolerance; }
};

using MetaValue = std::variant<std::int64_t, double, std::string>;

/// Structured outcome of a verification check. `pass()` is derived from the
/// residuals, so it can never disagree with them.
struct VerificationReport {
  std::string suite;
  std::vector<Residual> residuals;
  std::vector<std::pair<std::string, MetaValue>> metadata;
  std::optional<std::string> error;
  double wall_time_seconds = 0.0;  // informational; not part of the JSON schema

  VerificationReport() = default;
  explicit VerificationReport(std::string name) : suite(std::move(name)) {}

  bool pass() const noexcept {
    if (error) return false;
    for (const auto& r : residuals) {
      if (!r.ok()) return false;
    }
    return true;
  }

  VerificationReport& add(std::string name, double value, double tolerance) {
    residuals.push_back({std::move(name), value, tolerance});
    return *this;
  }

  template <typename T>
  VerificationReport& meta(std::string key, T value) {
    if constexpr (std::is_integral_v<T>) {
      metadata.emplace_back(std::move(key), static_cast<std::int64_t>(value));
    } else if constexpr (std::is_floating_point_v<T>) {
      metadata.emplace_back(std::move(key), static_cast<double>(value));
    } else {
      metadata.emplace_back(std::move(key), std::string(value));
    }
    return *this;
  }

  const Residual& residual(const std::string& name) const {
    for (const auto& r : residuals) {
      if (r.name == name) return r;
    }
    throw DomainError("report '" + suite + "' has no residual '" + name + "'");
  }

  /// Largest residual value (0 when there are none).
  double max_residual() const noexcept {
    double m = 0.0;
    for (const auto& r : residuals) m = std::max(m, r.value);
    return m;
  }

  std::optional<MetaValue> find_meta(const std::string& key) const {
    for (const auto& [k, v] : metadata) {
      if (k == key) return v;
    }
    return std::nullopt;
  }
};

}  // namespace semiflow
