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

// Weak (functional-by-functional) integration of operator-valued paths on
// [0, inf) with Lebesgue measure. Infinite intervals are truncated at the
// point where an exponential domination envelope has tail mass below eps.
//
// Paths are assumed continuous on the integration interval; measurability
// is not something that can be checked at runtime.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "semiflow/matrix_core.hpp"
#include "semiflow/operator_space.hpp"
#include "semiflow/quantum_maps.hpp"
#include "semiflow/report.hpp"

namespace semiflow {

struct GaussLegendre {
  int nodes = 8;  // per panel, in [2, 64]
};
struct AdaptiveSimpson {
  double abs_tol = 1e-12;
  int max_depth = 48;
};
using QuadratureRule = std::variant<GaussLegendre, AdaptiveSimpson>;

/// ||integrand(t)|| <= m e^{-(re_lambda - omega) t} ||A||.
struct DominationBound {
  double m = 1.0;
  double omega = 0.0;
  double re_lambda = 1.0;
};

struct TailTruncation {
  DominationBound bound;
  double norm_a = 1.0;
  double eps = 1e-9;
};

struct QuadratureConfig {
  QuadratureRule rule = GaussLegendre{8};
  int panels = 64;
  double t_max = 10.0;  // used for infinite intervals when no tail is given
  std::optional<TailTruncation> tail;

  void validate() const {
    if (panels < 1) throw DomainError("QuadratureConfig: panels must be >= 1");
    if (!(t_max > 0.0)) throw DomainError("QuadratureConfig: t_max must be > 0");
    if (const auto* gl = std::get_if<GaussLegendre>(&rule)) {
      if (gl->nodes < 2 || gl->nodes > 64) {
        throw DomainError("QuadratureConfig: Gauss-Legendre nodes must be in [2, 64]");
      }
    }
    if (const auto* as = std::get_if<AdaptiveSimpson>(&rule)) {
      if (!(as->abs_tol > 0.0)) throw DomainError("QuadratureConfig: abs_tol must be > 0");
    }
  }
};

struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  static Interval half_line() { return {}; }
  bool infinite() const noexcept { return std::isinf(hi); }
};

/// t -> f(t) in B(H).
struct OperatorPath {
  std::function<ComplexMatrix(double)> fn;
  HilbertDim d;

  ComplexMatrix operator()(double t) const {
    ComplexMatrix v = fn(t);
    if (v.rows() != d.value() || v.cols() != d.value()) {
      throw EvaluationError("OperatorPath: value at t=" + std::to_string(t) + " has shape " +
                            detail::shape_string(v) + ", expected dimension " +
                            std::to_string(d.value()));
    }
    if (!all_finite(v)) {
      throw EvaluationError("OperatorPath: non-finite value at t=" + std::to_string(t));
    }
    return v;
  }
};

/// Smallest t_max with m ||A|| e^{(omega - re_lambda) t_max} / (re_lambda - omega) <= eps,
/// i.e. the envelope's tail integral beyond t_max is at most eps.
inline double tail_truncation_point(const DominationBound& bound, double norm_a, double eps) {
  if (!(bound.re_lambda > bound.omega)) {
    throw HypothesisViolation("tail truncation needs Re(lambda) > omega (Re(lambda) = " +
                              std::to_string(bound.re_lambda) +
                              ", omega = " + std::to_string(bound.omega) + ")");
  }
  if (!(eps > 0.0)) throw DomainError("tail_truncation_point: eps must be > 0");
  const double gap = bound.re_lambda - bound.omega;
  const double total = bound.m * norm_a / gap;
  if (total <= eps) return 0.0;
  return std::log(total / eps) / gap;
}

// ---------------------------------------------------------------------------

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// Nodes and weights by Newton iteration on P_n.
inline GaussLegendreRule gauss_legendre_rule(int n) {
  if (n < 1) throw DomainError("gauss_legendre_rule: n must be >= 1");
  GaussLegendreRule r{std::vector<double>(n), std::vector<double>(n)};
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return r;
}

namespace detail {

inline double magnitude(const Complex& z) { return std::abs(z); }
inline double magnitude(const ComplexMatrix& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

inline bool finite_value(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
inline bool finite_value(const ComplexMatrix& m) { return all_finite(m); }

template <class Value>
Value simpson_recurse(const std::function<Value(double)>& g, double a, double b, const Value& fa,
                      const Value& fm, const Value& fb, const Value& whole, double tol,
                      int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const Value flm = g(lm);
  const Value frm = g(rm);
  const Value left = ((m - a) / 6.0) * (fa + 4.0 * flm + fm);
  const Value right = ((b - m) / 6.0) * (fm + 4.0 * frm + fb);
  const Value diff = left + right - whole;
  if (depth <= 0 || magnitude(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_recurse(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Resolves an interval to finite bounds [lo, hi].
inline std::pair<double, double> finite_bounds(const Interval& iv, const QuadratureConfig& cfg) {
  if (!(iv.lo >= 0.0) || !std::isfinite(iv.lo)) throw DomainError("Interval: lo must be finite, >= 0");
  if (!(iv.hi >= iv.lo)) throw DomainError("Interval: hi must be >= lo");
  if (!iv.infinite()) return {iv.lo, iv.hi};
  double t_max = cfg.t_max;
  if (cfg.tail) t_max = tail_truncation_point(cfg.tail->bound, cfg.tail->norm_a, cfg.tail->eps);
  return {iv.lo, std::max(iv.lo, t_max)};
}

/// Composite quadrature of g over [lo, hi] with config's rule and panels.
/// Every entry of a matrix-valued g shares the same nodes.
template <class Value>
Value integrate(const std::function<Value(double)>& g, double lo, double hi,
                const QuadratureConfig& cfg, Value zero) {
  cfg.validate();
  auto checked = [&g](double t) -> Value {
    Value v = g(t);
    if (!finite_value(v)) {
      throw EvaluationError("integrand is not finite at t=" + std::to_string(t));
    }
    return v;
  };
  Value acc = zero;
  if (hi <= lo) return acc;
  const double width = (hi - lo) / cfg.panels;
  if (const auto* gl = std::get_if<GaussLegendre>(&cfg.rule)) {
    const GaussLegendreRule rule = gauss_legendre_rule(gl->nodes);
    for (int p = 0; p < cfg.panels; ++p) {
      const double a = lo + p * width;
      const double half = 0.5 * width;
      const double mid = a + half;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        acc += (half * rule.weights[k]) * checked(mid + half * rule.nodes[k]);
      }
    }
    return acc;
  }
  const auto& as = std::get<AdaptiveSimpson>(cfg.rule);
  const std::function<Value(double)> gc = checked;
  for (int p = 0; p < cfg.panels; ++p) {
    const double a = lo + p * width;
    const double b = (p + 1 == cfg.panels) ? hi : a + width;
    const Value fa = gc(a);
    const Value fm = gc(0.5 * (a + b));
    const Value fb = gc(b);
    const Value whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
    acc += simpson_recurse(gc, a, b, fa, fm, fb, whole, as.abs_tol / cfg.panels, as.max_depth);
  }
  return acc;
}

}  // namespace detail

inline Complex scalar_integral(const std::function<Complex(double)>& g, const Interval& iv,
                               const QuadratureConfig& cfg) {
  const auto [lo, hi] = detail::finite_bounds(iv, cfg);
  return detail::integrate<Complex>(g, lo, hi, cfg, Complex{});
}

/// Entrywise quadrature with shared nodes: pairing any functional with the
/// result equals the same quadrature applied to the paired path.
inline ComplexMatrix vector_integral(const OperatorPath& f, const Interval& iv,
                                     const QuadratureConfig& cfg) {
  const auto [lo, hi] = detail::finite_bounds(iv, cfg);
  const int d = f.d.value();
  return detail::integrate<ComplexMatrix>([&f](double t) { return f(t); }, lo, hi, cfg,
                                          ComplexMatrix::Zero(d, d));
}

enum class PairingMode {
  kSharedNodes,          // scalar side uses the vector side's rule
  kIndependentAdaptive,  // scalar side uses adaptive Simpson
};

/// |eta(int f) - int eta(f)| over every functional of the basis.
inline VerificationReport pettis_consistency_check(const OperatorPath& f,
                                                   const FunctionalBasis& basis,
                                                   const Interval& iv,
                                                   const QuadratureConfig& cfg, double tol,
                                                   PairingMode mode = PairingMode::kSharedNodes,
                                                   AdaptiveSimpson independent = {}) {
  const ComplexMatrix vec = vector_integral(f, iv, cfg);
  QuadratureConfig scalar_cfg = cfg;
  if (mode == PairingMode::kIndependentAdaptive) scalar_cfg.rule = independent;
  double worst = 0.0;
  for (const auto& eta : basis.functionals) {
    const Complex s = scalar_integral([&](double t) { return pair(eta, f(t)); }, iv, scalar_cfg);
    worst = std::max(worst, std::abs(pair(eta, vec) - s));
  }
  const double t_max = detail::finite_bounds(iv, cfg).second;
  VerificationReport rep("pettis");
  rep.add("pairing_residual", worst, tol)
      .meta("mode", mode == PairingMode::kSharedNodes ? "shared" : "independent")
      .meta("t_max", t_max)
      .meta("functionals", static_cast<std::int64_t>(basis.functionals.size()));
  return rep;
}

/// ||s(int f) - int s(f)|| in operator norm.
inline VerificationReport commutation_check(const Superoperator& s, const OperatorPath& f,
                                            const Interval& iv, const QuadratureConfig& cfg,
                                            double tol) {
  if (!(s.dim() == f.d)) throw ShapeError("commutation_check: superoperator/path dimension mismatch");
  const ComplexMatrix outside = s(vector_integral(f, iv, cfg));
  const OperatorPath mapped{[&](double t) { return s(f(t)); }, f.d};
  const ComplexMatrix inside = vector_integral(mapped, iv, cfg);
  VerificationReport rep("commutation");
  rep.add("commutation_residual", op_norm(outside - inside), tol)
      .meta("t_max", detail::finite_bounds(iv, cfg).second);
  return rep;
}

}  // namespace semiflow
