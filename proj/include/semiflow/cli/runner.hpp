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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "semiflow/cli/config.hpp"
#include "semiflow/semiflow.hpp"

namespace semiflow::cli {

/// A spec built from config, plus its Lindblad form when it has one.
struct ResolvedSpec {
  SemigroupSpec spec;
  std::optional<LindbladForm> form;
};

namespace detail {

inline ComplexMatrix load_square(const Json& path, const char* what) {
  ComplexMatrix m = load_matrix(path.get<std::string>());
  if (m.rows() != m.cols()) {
    throw ShapeError(std::string(what) + ": matrix '" + path.get<std::string>() + "' is not square");
  }
  return m;
}

inline LindbladForm random_markovian(Rng& rng, int d, int kraus_count, double scale) {
  std::vector<ComplexMatrix> ks;
  for (int j = 0; j < kraus_count; ++j) ks.push_back(scale * random_matrix(rng, d, d));
  return markovian_completion(KrausSet(std::move(ks)), scale * random_hermitian(rng, d));
}

inline std::vector<double> list_or(const Json& p, const char* key, std::vector<double> fallback) {
  if (!p.contains(key)) return fallback;
  return p[key].get<std::vector<double>>();
}

// Default time grids: tenths of [0, 1] for continuous families, small
// multiples of the step for discretized ones.
inline std::vector<double> default_times(const SemigroupSpec& spec, std::vector<double> continuous,
                                         std::vector<int> multiples) {
  const auto h = spec.grid_step();
  if (!h) return continuous;
  std::vector<double> out;
  for (int m : multiples) out.push_back(m * *h);
  return out;
}

/// "identity", "random" (unit operator norm, drawn from rng) or a matrix file.
inline ComplexMatrix matrix_param(const Json& p, const char* key, HilbertDim d, Rng& rng) {
  const Json v = p.value(key, Json("random"));
  ComplexMatrix m;
  if (v == "identity") {
    m = identity(d.value());
  } else if (v == "random") {
    m = random_matrix(rng, d.value(), d.value());
    m /= op_norm(m);
  } else {
    m = load_matrix(v.get<std::string>());
  }
  if (m.rows() != d.value() || m.cols() != d.value()) {
    throw ShapeError(std::string("params.") + key + ": expected a " + std::to_string(d.value()) +
                     "x" + std::to_string(d.value()) + " matrix, got " + semiflow::detail::shape_string(m));
  }
  return m;
}

inline Complex lambda_param(const Json& p, const ExponentialBound& bound) {
  if (!p.contains("lambda")) return default_lambda(bound);
  const Json& l = p["lambda"];
  if (l.is_number()) return {l.get<double>(), 0.0};
  return {l["re"].get<double>(), l.value("im", 0.0)};
}

inline QuadratureConfig quadrature_param(const Json& p) {
  QuadratureConfig cfg;
  if (!p.contains("quadrature")) return cfg;
  const Json& q = p["quadrature"];
  if (q.value("rule", std::string("gauss-legendre")) == "adaptive-simpson") {
    AdaptiveSimpson a;
    a.abs_tol = q.value("abs_tol", a.abs_tol);
    a.max_depth = q.value("max_depth", a.max_depth);
    cfg.rule = a;
  } else {
    cfg.rule = GaussLegendre{q.value("nodes", 8)};
  }
  cfg.panels = q.value("panels", cfg.panels);
  cfg.t_max = q.value("t_max", cfg.t_max);
  return cfg;
}

inline Interval interval_param(const Json& p) {
  if (!p.contains("interval")) return Interval::half_line();
  const Json& iv = p["interval"];
  Interval out;
  out.lo = iv[0].get<double>();
  out.hi = iv[1].is_null() ? std::numeric_limits<double>::infinity() : iv[1].get<double>();
  return out;
}

// t -> e^{-lambda t} T_t(A); discretized families are held constant on each cell.
inline OperatorPath damped_orbit(const SemigroupSpec& spec, const ComplexMatrix& a, Complex lambda) {
  const auto h = spec.grid_step();
  return OperatorPath{[spec, a, lambda, h](double t) -> ComplexMatrix {
                        const double s = h ? std::floor(t / *h) * *h : t;
                        return std::exp(-lambda * t) * apply_at(spec, s, a);
                      },
                      spec.dim()};
}

inline QuadratureConfig with_tail(QuadratureConfig cfg, const ExponentialBound& bound,
                                  Complex lambda, double norm_a, double eps) {
  cfg.tail = TailTruncation{DominationBound{bound.m, bound.omega, lambda.real()}, norm_a, eps};
  return cfg;
}

inline VerificationReport dispatch(const SuiteEntry& e, const ResolvedSpec& r, Rng& rng) {
  const SemigroupSpec& spec = r.spec;
  const Json& p = e.params;
  const HilbertDim d = spec.dim();
  const double tol = e.tol;
  const std::string& name = e.name;

  if (name == "semigroup-law") {
    return check_semigroup_law(
        spec, list_or(p, "t_grid", default_times(spec, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0},
                                                 {1, 2, 3, 4, 5, 6, 7, 8})),
        tol);
  }
  if (name == "exp-bound") {
    const ExponentialBound b =
        estimate_exponential_bound(spec, p.value("delta", 0.1), p.value("samples", 201));
    return verify_exponential_bound(spec, b, p.value("horizon", 5.0), p.value("verify_samples", 101),
                                    tol);
  }
  if (name == "wot-zero") {
    const ComplexMatrix a = matrix_param(p, "a", d, rng);
    return check_wot_continuity_at_zero(
        spec, functional_basis(d), a,
        list_or(p, "t_seq", default_times(spec, {1e-1, 1e-2, 1e-3, 1e-4}, {8, 4, 2, 1})), tol);
  }
  if (name == "gks-form") {
    if (!r.form) {
      throw ConfigError("gks-form needs an exponential spec with a lindblad, markovian or "
                        "random_markovian generator");
    }
    return gks_form_check(*r.form, tol);
  }
  if (name == "omega-invariance") {
    const auto* sx = std::get_if<ShiftExampleSpec>(&spec.variant());
    if (!sx) throw ConfigError("omega-invariance needs a shift_example spec");
    return omega_invariance_check(
        sx->grid, list_or(p, "s_grid", default_times(spec, {}, {1, 2, 3, 4, 5, 6, 7, 8})), tol, rng,
        p.value("samples", 8));
  }
  if (name == "cp-unital") {
    double cp_violation = 0.0;
    double min_eig = INFINITY;
    double unital = 0.0;
    const auto times = list_or(p, "times", default_times(spec, {0.1, 0.5, 1.0}, {1, 2, 4}));
    for (double t : times) {
      const LinearMap map = map_at(spec, t);
      const CpReport cp = is_completely_positive(map, d, tol);
      min_eig = std::min(min_eig, cp.min_eigenvalue);
      cp_violation = std::max(cp_violation, -cp.min_eigenvalue);
      unital = std::max(unital, is_unital(map, d, tol).residual);
    }
    VerificationReport rep("cp-unital");
    rep.add("cp_violation", cp_violation, tol)
        .add("unital_residual", unital, tol)
        .meta("spec", spec.kind())
        .meta("min_choi_eigenvalue", min_eig)
        .meta("times", static_cast<std::int64_t>(times.size()));
    return rep;
  }
  if (name == "difference-quotient") {
    const ComplexMatrix a = matrix_param(p, "a", d, rng);
    std::optional<ComplexMatrix> reference;
    if (!spec.grid_step()) reference = generator_of(spec)(a);
    const auto h_seq = list_or(
        p, "h_seq", default_times(spec, {0.1, 0.05, 0.025, 0.0125, 0.00625}, {8, 4, 2, 1}));
    DifferenceQuotientResult dq = generator_difference_quotient(
        spec, a, h_seq, functional_basis(d), p.value("richardson", false), reference, tol);
    if (p.contains("expected_order")) {
      const double want = p["expected_order"].get<double>();
      dq.report.add("order_deviation", std::abs(dq.observed_order - want),
                    p.value("order_tol", 0.1 * want));
    }
    return dq.report;
  }

  // Everything below integrates along the orbit or needs the resolvent.
  const ExponentialBound bound = estimate_exponential_bound(spec);
  const Complex lambda = lambda_param(p, bound);
  const double eps = p.value("eps", 1e-9);
  const QuadratureConfig quad = quadrature_param(p);

  auto with_bound = [&](VerificationReport rep) {
    if (!rep.find_meta("m")) rep.meta("m", bound.m).meta("omega", bound.omega);
    if (!rep.find_meta("lambda_re")) rep.meta("lambda_re", lambda.real()).meta("lambda_im", lambda.imag());
    if (!rep.find_meta("spec")) rep.meta("spec", spec.kind());
    return rep;
  };

  if (name == "pettis" || name == "commutation") {
    const ComplexMatrix a = matrix_param(p, "a", d, rng);
    const OperatorPath f = damped_orbit(spec, a, lambda);
    const Interval iv = interval_param(p);
    const QuadratureConfig cfg = with_tail(quad, bound, lambda, op_norm(a), eps);
    if (name == "pettis") {
      const PairingMode mode = p.value("mode", std::string("shared")) == "independent"
                                   ? PairingMode::kIndependentAdaptive
                                   : PairingMode::kSharedNodes;
      return with_bound(pettis_consistency_check(f, functional_basis(d), iv, cfg, tol, mode));
    }
    Superoperator s = Superoperator::zero(d);
    const Json sv = p.value("superoperator", Json("random"));
    if (sv == "identity") {
      s = Superoperator::identity(d);
    } else if (sv == "random") {
      s = Superoperator(d, random_matrix(rng, d.squared(), d.squared()));
    } else {
      s = Superoperator(d, load_matrix(sv.get<std::string>()));
    }
    return with_bound(commutation_check(s, f, iv, cfg, tol));
  }

  const Superoperator l = generator_of(spec);
  if (name == "resolvent-agreement") {
    return with_bound(resolvent_agreement_check(spec, l, lambda, bound, eps, quad, tol));
  }
  if (name == "resolvent-equation") {
    return with_bound(resolvent_equation_check(spec, l, lambda, bound, eps, quad, tol));
  }
  if (name == "closedness") {
    const ComplexMatrix b = matrix_param(p, "b_limit", d, rng);
    const ComplexMatrix dir = matrix_param(p, "direction", d, rng);
    const ClosednessCase cs = make_closedness_case(lambda, b, dir, p.value("count", 10),
                                                   p.value("power", 1.0), e.id);
    return with_bound(closedness_harness(spec, l, cs, bound, eps, quad, functional_basis(d), tol));
  }
  throw ConfigError("unknown suite '" + name + "'");
}

}  // namespace detail

/// Builds the spec; random generators draw from `rng`.
inline ResolvedSpec resolve_spec(const Json& s, Rng& rng) {
  const std::string kind = s["kind"].get<std::string>();
  if (kind == "shift_example") {
    return {SemigroupSpec::shift_example(GridSpec::exponential(s["n"].get<int>(), s["step"].get<double>())),
            std::nullopt};
  }
  if (kind == "conjugation") {
    const Json& c = s["contraction"];
    const std::string type = c["type"].get<std::string>();
    if (type == "matrix_group") {
      return {SemigroupSpec::conjugation(MatrixGroup{detail::load_square(c["k"], "matrix_group.k")}),
              std::nullopt};
    }
    const int d = c["d"].get<int>();
    const double step = c["step"].get<double>();
    if (type == "cyclic_shift") return {SemigroupSpec::conjugation(CyclicShift{d, step}), std::nullopt};
    return {SemigroupSpec::conjugation(TruncatedShift{d, step}), std::nullopt};
  }
  const Json& g = s["generator"];
  const std::string type = g["type"].get<std::string>();
  if (type == "zero") {
    return {SemigroupSpec::exponential(Superoperator::zero(HilbertDim(g["d"].get<int>()))),
            std::nullopt};
  }
  if (type == "superoperator") {
    const ComplexMatrix m = detail::load_square(g["matrix"], "superoperator.matrix");
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m.rows()))));
    if (Eigen::Index{d} * d != m.rows()) {
      throw ShapeError("superoperator.matrix: size " + std::to_string(m.rows()) + " is not a square d^2");
    }
    return {SemigroupSpec::exponential(Superoperator(HilbertDim(d), m)), std::nullopt};
  }
  LindbladForm form;
  if (type == "random_markovian") {
    form = detail::random_markovian(rng, g["d"].get<int>(), g.value("kraus_count", 2),
                                    g.value("scale", 0.5));
  } else {
    std::vector<ComplexMatrix> ks;
    for (const auto& k : g["kraus"]) ks.push_back(detail::load_square(k, "kraus"));
    if (type == "lindblad") {
      form = LindbladForm{KrausSet(std::move(ks)), detail::load_square(g["g"], "lindblad.g")};
    } else {
      if (ks.empty() && !g.contains("hamiltonian")) {
        throw ConfigError("markovian generator needs kraus operators or a hamiltonian");
      }
      const ComplexMatrix h = g.contains("hamiltonian")
                                  ? detail::load_square(g["hamiltonian"], "markovian.hamiltonian")
                                  : ComplexMatrix::Zero(ks.front().rows(), ks.front().cols());
      form = markovian_completion(KrausSet(std::move(ks)), h);
    }
  }
  return {SemigroupSpec::exponential(lindblad_generator(form)), form};
}

/// Per-suite seed: the global seed XOR the suite's position.
inline std::uint64_t suite_seed(std::uint64_t seed, std::size_t index) {
  return seed ^ static_cast<std::uint64_t>(index);
}

/// Runs one suite; any exception becomes a failed report carrying the message.
inline VerificationReport run_suite(const SuiteEntry& e, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport rep(e.name);
  try {
    if (!(e.tol > 0.0)) throw DomainError("tolerance must be > 0 (got " + std::to_string(e.tol) + ")");
    Rng rng(seed);
    const ResolvedSpec r = resolve_spec(e.spec, rng);
    rep = detail::dispatch(e, r, rng);
  } catch (const std::exception& ex) {
    rep = VerificationReport(e.name);
    rep.error = ex.what();
  }
  rep.suite = e.name;
  rep.meta("id", e.id).meta("tol", e.tol);
  if (seed <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    rep.meta("seed", static_cast<std::int64_t>(seed));
  } else {
    rep.meta("seed", std::to_string(seed));
  }
  rep.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

/// One report per suite in declared order; `parallelism` workers share an
/// index counter and write into disjoint slots.
inline std::vector<VerificationReport> run_suites(const SuiteConfig& cfg, int parallelism,
                                                  std::uint64_t seed) {
  if (parallelism < 1) throw DomainError("run_suites: parallelism must be >= 1");
  std::vector<VerificationReport> out(cfg.suites.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < cfg.suites.size(); k = next++) {
      out[k] = run_suite(cfg.suites[k], suite_seed(seed, k));
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(parallelism),
                                                    std::max<std::size_t>(cfg.suites.size(), 1));
  if (workers <= 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace semiflow::cli
