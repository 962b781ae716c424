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

// Suite configuration: a JSON document listing suites, each with a
// semigroup spec, per-suite parameters and a tolerance. Matrices are
// referenced by path (relative to the config file) in the matrix text format.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "semiflow/errors.hpp"
#include "semiflow/matrix_core.hpp"

namespace semiflow::cli {

using Json = nlohmann::json;

inline constexpr std::array<std::string_view, 12> kSuiteNames = {
    "semigroup-law",       "exp-bound",          "wot-zero",   "pettis",
    "commutation",         "resolvent-agreement", "resolvent-equation",
    "difference-quotient", "closedness",          "cp-unital",  "gks-form",
    "omega-invariance"};

inline bool is_suite_name(std::string_view name) {
  return std::find(kSuiteNames.begin(), kSuiteNames.end(), name) != kSuiteNames.end();
}

struct SuiteEntry {
  std::string name;
  std::string id;  // defaults to name
  Json spec;       // validated, matrix paths resolved to absolute
  Json params;     // validated object (possibly empty)
  double tol = 0.0;
};

struct SuiteConfig {
  std::vector<SuiteEntry> suites;
  std::filesystem::path base_dir;
};

namespace detail {

inline void reject_unknown(const Json& obj, const std::string& where,
                           std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

inline const Json& require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  return j;
}

inline const Json& require_key(const Json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing required key '" + key + "'");
  return *it;
}

inline Json& require_key(Json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing required key '" + key + "'");
  return *it;
}

inline void require_number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
}

inline void require_positive_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    throw ConfigError(where + ": expected a positive integer");
  }
}

inline void require_positive(const Json& j, const std::string& where) {
  require_number(j, where);
  if (!(j.get<double>() > 0.0)) throw ConfigError(where + ": expected a positive number");
}

inline void require_number_list(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array of numbers");
  for (std::size_t k = 0; k < j.size(); ++k) require_number(j[k], where + "[" + std::to_string(k) + "]");
}

// Matrix references are file paths; they are resolved against the config
// directory and parsed once here so bad files surface at load time.
inline void resolve_matrix_path(Json& j, const std::filesystem::path& base, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + ": expected a matrix file path");
  std::filesystem::path p(j.get<std::string>());
  if (p.is_relative()) p = base / p;
  try {
    (void)load_matrix(p.string());
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  j = p.lexically_normal().string();
}

// A matrix parameter: a path, or one of the keywords "random" / "identity".
inline void resolve_matrix_param(Json& j, const std::filesystem::path& base, const std::string& where) {
  if (j.is_string() && (j == "random" || j == "identity")) return;
  resolve_matrix_path(j, base, where);
}

inline void validate_generator(Json& g, const std::filesystem::path& base, const std::string& where) {
  require_object(g, where);
  const Json& type = require_key(g, "type", where);
  if (!type.is_string()) throw ConfigError(where + ".type: expected a string");
  const std::string t = type.get<std::string>();
  if (t == "zero") {
    reject_unknown(g, where, {"type", "d"});
    require_positive_int(require_key(g, "d", where), where + ".d");
  } else if (t == "superoperator") {
    reject_unknown(g, where, {"type", "matrix"});
    resolve_matrix_path(require_key(g, "matrix", where), base, where + ".matrix");
  } else if (t == "lindblad" || t == "markovian") {
    if (t == "lindblad") {
      reject_unknown(g, where, {"type", "kraus", "g"});
      resolve_matrix_path(require_key(g, "g", where), base, where + ".g");
    } else {
      reject_unknown(g, where, {"type", "kraus", "hamiltonian"});
      if (g.contains("hamiltonian")) resolve_matrix_path(g["hamiltonian"], base, where + ".hamiltonian");
    }
    Json& kraus = require_key(g, "kraus", where);
    if (!kraus.is_array()) throw ConfigError(where + ".kraus: expected an array of matrix paths");
    for (std::size_t k = 0; k < kraus.size(); ++k) {
      resolve_matrix_path(kraus[k], base, where + ".kraus[" + std::to_string(k) + "]");
    }
  } else if (t == "random_markovian") {
    reject_unknown(g, where, {"type", "d", "kraus_count", "scale"});
    require_positive_int(require_key(g, "d", where), where + ".d");
    if (g.contains("kraus_count")) require_positive_int(g["kraus_count"], where + ".kraus_count");
    if (g.contains("scale")) require_positive(g["scale"], where + ".scale");
  } else {
    throw ConfigError(where + ".type: unknown generator type '" + t + "'");
  }
}

inline void validate_contraction(Json& c, const std::filesystem::path& base, const std::string& where) {
  require_object(c, where);
  const Json& type = require_key(c, "type", where);
  if (!type.is_string()) throw ConfigError(where + ".type: expected a string");
  const std::string t = type.get<std::string>();
  if (t == "matrix_group") {
    reject_unknown(c, where, {"type", "k"});
    resolve_matrix_path(require_key(c, "k", where), base, where + ".k");
  } else if (t == "cyclic_shift" || t == "truncated_shift") {
    reject_unknown(c, where, {"type", "d", "step"});
    require_positive_int(require_key(c, "d", where), where + ".d");
    require_positive(require_key(c, "step", where), where + ".step");
  } else {
    throw ConfigError(where + ".type: unknown contraction type '" + t + "'");
  }
}

inline void validate_spec(Json& s, const std::filesystem::path& base, const std::string& where) {
  require_object(s, where);
  const Json& kind = require_key(s, "kind", where);
  if (!kind.is_string()) throw ConfigError(where + ".kind: expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "exponential") {
    reject_unknown(s, where, {"kind", "generator"});
    validate_generator(require_key(s, "generator", where), base,
                       where + ".generator");
  } else if (k == "conjugation") {
    reject_unknown(s, where, {"kind", "contraction"});
    validate_contraction(require_key(s, "contraction", where), base,
                         where + ".contraction");
  } else if (k == "shift_example") {
    reject_unknown(s, where, {"kind", "n", "step"});
    require_positive_int(require_key(s, "n", where), where + ".n");
    require_positive(require_key(s, "step", where), where + ".step");
  } else {
    throw ConfigError(where + ".kind: unknown spec kind '" + k + "'");
  }
}

inline void validate_quadrature(const Json& q, const std::string& where) {
  require_object(q, where);
  reject_unknown(q, where, {"rule", "nodes", "panels", "abs_tol", "max_depth", "t_max"});
  if (q.contains("rule")) {
    if (!q["rule"].is_string() ||
        (q["rule"] != "gauss-legendre" && q["rule"] != "adaptive-simpson")) {
      throw ConfigError(where + ".rule: expected 'gauss-legendre' or 'adaptive-simpson'");
    }
  }
  for (const char* key : {"nodes", "panels", "max_depth"}) {
    if (q.contains(key)) require_positive_int(q[key], where + "." + key);
  }
  for (const char* key : {"abs_tol", "t_max"}) {
    if (q.contains(key)) require_positive(q[key], where + "." + key);
  }
}

inline void validate_lambda(const Json& l, const std::string& where) {
  if (l.is_number()) return;
  if (l.is_object()) {
    reject_unknown(l, where, {"re", "im"});
    require_number(require_key(l, "re", where), where + ".re");
    if (l.contains("im")) require_number(l["im"], where + ".im");
    return;
  }
  throw ConfigError(where + ": expected a number or {\"re\", \"im\"}");
}

inline void validate_params(const std::string& suite, Json& p, const std::filesystem::path& base,
                            const std::string& where) {
  require_object(p, where);
  static const std::map<std::string, std::set<std::string>> allowed = {
      {"semigroup-law", {"t_grid"}},
      {"exp-bound", {"delta", "samples", "horizon", "verify_samples"}},
      {"wot-zero", {"a", "t_seq"}},
      {"pettis", {"a", "mode", "lambda", "eps", "quadrature", "interval"}},
      {"commutation", {"a", "superoperator", "lambda", "eps", "quadrature", "interval"}},
      {"resolvent-agreement", {"lambda", "eps", "quadrature"}},
      {"resolvent-equation", {"lambda", "eps", "quadrature"}},
      {"difference-quotient", {"a", "h_seq", "richardson", "expected_order", "order_tol"}},
      {"closedness", {"lambda", "eps", "quadrature", "b_limit", "direction", "count", "power"}},
      {"cp-unital", {"times"}},
      {"gks-form", {}},
      {"omega-invariance", {"s_grid", "samples"}},
  };
  const auto& keys = allowed.at(suite);
  for (const auto& [key, _] : p.items()) {
    if (!keys.count(key)) throw ConfigError(where + ": unknown key '" + key + "' for suite " + suite);
  }
  for (const char* key : {"t_grid", "t_seq", "h_seq", "times", "s_grid"}) {
    if (p.contains(key)) require_number_list(p[key], where + "." + key);
  }
  for (const char* key : {"samples", "verify_samples", "count"}) {
    if (p.contains(key)) require_positive_int(p[key], where + "." + key);
  }
  for (const char* key : {"delta", "horizon", "eps", "power", "expected_order", "order_tol"}) {
    if (p.contains(key)) require_positive(p[key], where + "." + key);
  }
  for (const char* key : {"a", "superoperator", "b_limit", "direction"}) {
    if (p.contains(key)) resolve_matrix_param(p[key], base, where + "." + key);
  }
  if (p.contains("lambda")) validate_lambda(p["lambda"], where + ".lambda");
  if (p.contains("quadrature")) validate_quadrature(p["quadrature"], where + ".quadrature");
  if (p.contains("mode") && (!p["mode"].is_string() ||
                             (p["mode"] != "shared" && p["mode"] != "independent"))) {
    throw ConfigError(where + ".mode: expected 'shared' or 'independent'");
  }
  if (p.contains("richardson") && !p["richardson"].is_boolean()) {
    throw ConfigError(where + ".richardson: expected a boolean");
  }
  if (p.contains("interval")) {
    const Json& iv = p["interval"];
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() ||
        !(iv[1].is_number() || iv[1].is_null())) {
      throw ConfigError(where + ".interval: expected [lo, hi] with hi a number or null (infinite)");
    }
  }
}

// "line L, column C" for a byte offset into `text`.
inline std::string position_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Parses and validates a config document. `base_dir` anchors relative matrix paths.
inline SuiteConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    // Keep only the reason from "[json.exception...] parse error at line L, column C: reason".
    std::string reason = e.what();
    if (auto k = reason.find(", column "); k != std::string::npos) {
      if (auto c = reason.find(": ", k); c != std::string::npos) reason = reason.substr(c + 2);
    }
    throw ConfigError("config parse error at " + detail::position_of(text, e.byte) + ": " + reason);
  }
  detail::require_object(doc, "config");
  detail::reject_unknown(doc, "config", {"suites", "description"});
  const Json& suites = detail::require_key(doc, "suites", "config");
  if (!suites.is_array()) throw ConfigError("config.suites: expected an array");

  SuiteConfig cfg;
  cfg.base_dir = base_dir;
  std::set<std::string> ids;
  for (std::size_t k = 0; k < suites.size(); ++k) {
    const std::string where = "suites[" + std::to_string(k) + "]";
    Json s = suites[k];
    detail::require_object(s, where);
    detail::reject_unknown(s, where, {"name", "id", "spec", "params", "tol"});
    const Json& name = detail::require_key(s, "name", where);
    if (!name.is_string()) throw ConfigError(where + ".name: expected a string");
    SuiteEntry e;
    e.name = name.get<std::string>();
    if (!is_suite_name(e.name)) throw ConfigError(where + ".name: unknown suite '" + e.name + "'");
    e.id = e.name;
    if (s.contains("id")) {
      if (!s["id"].is_string() || s["id"].get<std::string>().empty()) {
        throw ConfigError(where + ".id: expected a non-empty string");
      }
      e.id = s["id"].get<std::string>();
    }
    if (!ids.insert(e.id).second) {
      throw ConfigError(where + ".id: duplicate suite id '" + e.id + "' (set a distinct \"id\")");
    }
    e.spec = detail::require_key(s, "spec", where);
    detail::validate_spec(e.spec, base_dir, where + ".spec");
    e.params = s.value("params", Json::object());
    detail::validate_params(e.name, e.params, base_dir, where + ".params");
    const Json& tol = detail::require_key(s, "tol", where);
    detail::require_number(tol, where + ".tol");
    e.tol = tol.get<double>();
    if (!(e.tol >= 0.0) || !std::isfinite(e.tol)) {
      throw ConfigError(where + ".tol: expected a finite non-negative number");
    }
    cfg.suites.push_back(std::move(e));
  }
  return cfg;
}

inline SuiteConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), std::filesystem::absolute(path).parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

/// Applies "SUITE.tol=VALUE", where SUITE is a suite id or name (all matches).
inline void apply_override(SuiteConfig& cfg, const std::string& text) {
  const auto eq = text.find('=');
  const auto dot = text.rfind('.', eq);
  if (eq == std::string::npos || dot == std::string::npos || dot == 0) {
    throw ConfigError("override '" + text + "': expected SUITE.tol=VALUE");
  }
  const std::string suite = text.substr(0, dot);
  const std::string field = text.substr(dot + 1, eq - dot - 1);
  if (field != "tol") throw ConfigError("override '" + text + "': only 'tol' can be overridden");
  const std::string value = text.substr(eq + 1);
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || *end != '\0' || !std::isfinite(v) || v < 0.0) {
    throw ConfigError("override '" + text + "': tol must be a finite non-negative number");
  }
  bool hit = false;
  for (auto& s : cfg.suites) {
    if (s.id == suite || s.name == suite) {
      s.tol = v;
      hit = true;
    }
  }
  if (!hit) throw ConfigError("override '" + text + "': no suite named '" + suite + "'");
}

}  // namespace semiflow::cli
