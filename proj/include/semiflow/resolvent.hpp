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

// Resolvents R(lambda) of a semigroup, built two ways:
//   laplace  R(lambda) A = int_0^inf e^{-lambda t} T_t A dt  (weak integral,
//            tail-truncated with the exponential bound), and
//   direct   R(lambda) = (lambda - L)^{-1}.
// The checks here compare the two, verify the resolvent equation, and run
// the closedness argument for the generator along sequences: finite
// dimensional weak topologies are metrizable, so nets are not needed.

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "semiflow/matrix_core.hpp"
#include "semiflow/operator_space.hpp"
#include "semiflow/quantum_maps.hpp"
#include "semiflow/report.hpp"
#include "semiflow/semigroup.hpp"
#include "semiflow/weak_integration.hpp"

namespace semiflow {

enum class ResolventMethod { kLaplace, kDirect };

struct ResolventResult {
  Complex lambda;
  Superoperator r;
  ResolventMethod method = ResolventMethod::kDirect;
  double truncation_eps = 0.0;  // laplace only
  double t_max = 0.0;           // laplace only
};

/// Default spectral parameter: omega_hat + 2.
inline Complex default_lambda(const ExponentialBound& bound) { return {bound.omega + 2.0, 0.0}; }

/// Laplace transform of the semigroup, column by column over the matrix
/// units (all columns share quadrature nodes, so the d^2 x d^2 path is
/// integrated at once). Discretized families are piecewise constant in time
/// between grid points and are integrated cell by cell.
inline ResolventResult laplace_resolvent(const SemigroupSpec& spec, Complex lambda,
                                         const ExponentialBound& bound, double eps,
                                         const QuadratureConfig& cfg) {
  if (!(lambda.real() > bound.omega)) {
    throw HypothesisViolation("laplace_resolvent: Re(lambda) = " + std::to_string(lambda.real()) +
                              " must exceed omega = " + std::to_string(bound.omega));
  }
  const HilbertDim d = spec.dim();
  const DominationBound env{bound.m, bound.omega, lambda.real()};
  double t_max = tail_truncation_point(env, 1.0, eps);
  const ComplexMatrix zero = ComplexMatrix::Zero(d.squared(), d.squared());
  ComplexMatrix r;
  if (auto h = spec.grid_step()) {
    const long cells = static_cast<long>(std::ceil(t_max / *h - 1e-9));
    t_max = cells * *h;
    r = zero;
    QuadratureConfig cell_cfg = cfg;
    cell_cfg.panels = 1;
    cell_cfg.tail.reset();
    for (long k = 0; k < cells; ++k) {
      const Complex w = scalar_integral([lambda](double t) { return std::exp(-lambda * t); },
                                        Interval{k * *h, (k + 1) * *h}, cell_cfg);
      r += w * evaluate(spec, k * *h).matrix();
    }
  } else {
    r = detail::integrate<ComplexMatrix>(
        [&](double t) -> ComplexMatrix { return std::exp(-lambda * t) * evaluate(spec, t).matrix(); },
        0.0, t_max, cfg, zero);
  }
  return {lambda, Superoperator(d, std::move(r)), ResolventMethod::kLaplace, eps, t_max};
}

/// (lambda - L)^{-1}; SingularityError when lambda is (numerically) in the spectrum.
inline ResolventResult direct_resolvent(const Superoperator& l, Complex lambda) {
  const Eigen::Index n = l.dim().squared();
  const ComplexMatrix shifted = lambda * ComplexMatrix::Identity(n, n) - l.matrix();
  return {lambda, Superoperator(l.dim(), solve(shifted, ComplexMatrix::Identity(n, n))),
          ResolventMethod::kDirect, 0.0, 0.0};
}

namespace detail {

inline VerificationReport& resolvent_meta(VerificationReport& rep, const ResolventResult& r,
                                          const ExponentialBound& bound) {
  rep.meta("lambda_re", r.lambda.real())
      .meta("lambda_im", r.lambda.imag())
      .meta("t_max", r.t_max)
      .meta("truncation_eps", r.truncation_eps)
      .meta("bound_m", bound.m)
      .meta("bound_omega", bound.omega);
  return rep;
}

}  // namespace detail

inline VerificationReport resolvent_agreement_check(const SemigroupSpec& spec,
                                                    const Superoperator& l, Complex lambda,
                                                    const ExponentialBound& bound, double eps,
                                                    const QuadratureConfig& cfg, double tol) {
  const ResolventResult lap = laplace_resolvent(spec, lambda, bound, eps, cfg);
  const ResolventResult dir = direct_resolvent(l, lambda);
  VerificationReport rep("resolvent-agreement");
  rep.add("laplace_vs_direct", op_norm(lap.r.matrix() - dir.r.matrix()), tol);
  return detail::resolvent_meta(rep, lap, bound);
}

/// max over matrix units A of ||(lambda - L) R A - A|| and ||R (lambda - L) A - A||,
/// with R the Laplace resolvent.
inline VerificationReport resolvent_equation_check(const SemigroupSpec& spec,
                                                   const Superoperator& l, Complex lambda,
                                                   const ExponentialBound& bound, double eps,
                                                   const QuadratureConfig& cfg, double tol) {
  const ResolventResult lap = laplace_resolvent(spec, lambda, bound, eps, cfg);
  const HilbertDim d = spec.dim();
  const Superoperator shifted = lambda * Superoperator::identity(d) - l;
  double left = 0.0;
  double right = 0.0;
  for (int i = 0; i < d.value(); ++i) {
    for (int j = 0; j < d.value(); ++j) {
      const ComplexMatrix a = matrix_unit(d, i, j);
      left = std::max(left, op_norm(shifted(lap.r(a)) - a));
      right = std::max(right, op_norm(lap.r(shifted(a)) - a));
    }
  }
  VerificationReport rep("resolvent-equation");
  rep.add("left_inverse_residual", left, tol).add("right_inverse_residual", right, tol);
  return detail::resolvent_meta(rep, lap, bound);
}

/// max over t of ||R(lambda) T_t - T_t R(lambda)||.
inline VerificationReport commutation_with_semigroup_check(const SemigroupSpec& spec,
                                                           Complex lambda,
                                                           const std::vector<double>& t_grid,
                                                           const ExponentialBound& bound,
                                                           double eps,
                                                           const QuadratureConfig& cfg,
                                                           double tol) {
  const ResolventResult lap = laplace_resolvent(spec, lambda, bound, eps, cfg);
  double worst = 0.0;
  for (double t : t_grid) {
    const ComplexMatrix tt = evaluate(spec, t).matrix();
    worst = std::max(worst, op_norm(lap.r.matrix() * tt - tt * lap.r.matrix()));
  }
  VerificationReport rep("resolvent-commutation");
  rep.add("commutator_residual", worst, tol);
  return detail::resolvent_meta(rep, lap, bound);
}

// ---------------------------------------------------------------------------
// Generator recovery by weak difference quotients

struct DifferenceQuotientResult {
  ComplexMatrix estimate;               // at the last h
  std::vector<double> h;
  std::vector<ComplexMatrix> estimates;  // one per h
  std::vector<double> errors;            // vs reference, when given
  double observed_order = 0.0;
  VerificationReport report;
};

namespace detail {

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  int n = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(y[k] > 0.0)) continue;
    const double lx = std::log(x[k]);
    const double ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  const double den = n * sxx - sx * sx;
  return den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

inline ComplexMatrix weak_quotient(const SemigroupSpec& spec, const ComplexMatrix& a, double h,
                                   const FunctionalBasis& basis) {
  const ComplexVector q = basis.pairings(apply_at(spec, h, a) - a) / h;
  return reconstruct_from_pairings(basis, q);
}

}  // namespace detail

/// Q(h) assembled from the functional values eta((T_h A - A)/h) through the
/// basis Gram system; with `richardson`, 2 Q(h/2) - Q(h) instead. The
/// observed order is the log-log slope of the error against `reference`
/// when one is given, otherwise of successive increments ||Q_k - Q_{k+1}||.
inline DifferenceQuotientResult generator_difference_quotient(
    const SemigroupSpec& spec, const ComplexMatrix& a, const std::vector<double>& h_seq,
    const FunctionalBasis& basis, bool richardson = false,
    const std::optional<ComplexMatrix>& reference = std::nullopt, double tol = INFINITY) {
  if (h_seq.empty()) throw DomainError("generator_difference_quotient: empty step sequence");
  for (std::size_t k = 0; k < h_seq.size(); ++k) {
    if (!(h_seq[k] > 0.0)) throw DomainError("generator_difference_quotient: steps must be > 0");
    if (k > 0 && !(h_seq[k] < h_seq[k - 1])) {
      throw DomainError("generator_difference_quotient: steps must decrease");
    }
  }
  DifferenceQuotientResult out;
  out.h = h_seq;
  for (double h : h_seq) {
    ComplexMatrix q = detail::weak_quotient(spec, a, h, basis);
    if (richardson) q = 2.0 * detail::weak_quotient(spec, a, 0.5 * h, basis) - q;
    out.estimates.push_back(std::move(q));
  }
  out.estimate = out.estimates.back();

  std::vector<double> hs;
  std::vector<double> ys;
  if (reference) {
    for (std::size_t k = 0; k < h_seq.size(); ++k) {
      out.errors.push_back(op_norm(out.estimates[k] - *reference));
    }
    hs = h_seq;
    ys = out.errors;
  } else {
    for (std::size_t k = 0; k + 1 < h_seq.size(); ++k) {
      hs.push_back(h_seq[k]);
      ys.push_back(op_norm(out.estimates[k] - out.estimates[k + 1]));
    }
  }
  out.observed_order = detail::loglog_slope(hs, ys);

  out.report = VerificationReport("difference-quotient");
  if (reference) {
    out.report.add("final_error", out.errors.back(), tol);
  } else if (h_seq.size() > 1) {
    out.report.add("final_increment", ys.back(), tol);
  }
  out.report.meta("spec", spec.kind())
      .meta("richardson", richardson ? "yes" : "no")
      .meta("observed_order", out.observed_order)
      .meta("smallest_h", h_seq.back());
  return out;
}

// ---------------------------------------------------------------------------
// Closedness along sequences

struct ClosednessCase {
  Complex lambda;
  std::vector<ComplexMatrix> b_seq;
  ComplexMatrix b_limit;
  std::string description;

  /// b_seq non-empty, distances to b_limit strictly decreasing (or all zero).
  void validate() const {
    if (b_seq.empty()) throw DomainError("ClosednessCase: empty sequence");
    double prev = INFINITY;
    for (const auto& b : b_seq) {
      if (b.rows() != b_limit.rows() || b.cols() != b_limit.cols()) {
        throw ShapeError("ClosednessCase: sequence element does not match the limit's shape");
      }
      const double dist = (b - b_limit).norm();
      if (!(dist < prev) && !(dist == 0.0 && prev == 0.0)) {
        throw DomainError("ClosednessCase: distances to the limit must strictly decrease");
      }
      prev = dist;
    }
  }
};

/// B_n = b_limit + n^{-power} direction, n = 1..count.
inline ClosednessCase make_closedness_case(Complex lambda, const ComplexMatrix& b_limit,
                                           const ComplexMatrix& direction, int count,
                                           double power, std::string description) {
  ClosednessCase c{lambda, {}, b_limit, std::move(description)};
  for (int n = 1; n <= count; ++n) c.b_seq.push_back(b_limit + std::pow(n, -power) * direction);
  return c;
}

/// With A_n := R(lambda) B_n (so (lambda - L) A_n = B_n) and A := R(lambda) b_limit:
///  (a) A_n -> A weakly: r_n = max_eta |eta(A_n - A)| is non-increasing up to
///      10% slack and bounded by ||R|| ||B_n - b_limit||_F + tol;
///  (b) L(A) = B := lambda A - b_limit to within tol;
///  (c) L(A_n) -> B weakly: non-increasing up to 10% slack, and
///      L(A_n) = lambda A_n - B_n to within tol.
inline VerificationReport closedness_harness(const SemigroupSpec& spec, const Superoperator& l,
                                             const ClosednessCase& cs,
                                             const ExponentialBound& bound, double eps,
                                             const QuadratureConfig& cfg,
                                             const FunctionalBasis& basis, double tol) {
  cs.validate();
  const ResolventResult lap = laplace_resolvent(spec, cs.lambda, bound, eps, cfg);
  const Superoperator& r = lap.r;
  const double r_norm = op_norm(r.matrix());
  const ComplexMatrix a_lim = r(cs.b_limit);
  const ComplexMatrix b_target = cs.lambda * a_lim - cs.b_limit;

  std::vector<double> weak_a;
  std::vector<double> weak_la;
  double continuity_excess = 0.0;
  double identity_gap = 0.0;
  for (const auto& bn : cs.b_seq) {
    const ComplexMatrix an = r(bn);
    const ComplexMatrix lan = l(an);
    weak_a.push_back(basis.max_abs_pairing(an - a_lim));
    weak_la.push_back(basis.max_abs_pairing(lan - b_target));
    continuity_excess =
        std::max(continuity_excess, weak_a.back() - r_norm * (bn - cs.b_limit).norm());
    identity_gap = std::max(identity_gap, op_norm(lan - (cs.lambda * an - bn)));
  }
  auto monotone_excess = [](const std::vector<double>& v) {
    double e = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k) e = std::max(e, v[k] - 1.1 * v[k - 1]);
    return e;
  };

  VerificationReport rep("closedness");
  rep.add("a_monotonicity_excess", monotone_excess(weak_a), 1e-14)
      .add("a_continuity_excess", std::max(0.0, continuity_excess), tol)
      .add("generator_at_limit", op_norm(l(a_lim) - b_target), tol)
      .add("la_monotonicity_excess", monotone_excess(weak_la), 1e-14)
      .add("la_identity_gap", identity_gap, tol)
      .meta("case", cs.description)
      .meta("a_first", weak_a.front())
      .meta("a_last", weak_a.back())
      .meta("la_last", weak_la.back());
  return detail::resolvent_meta(rep, lap, bound);
}

}  // namespace semiflow
