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

// Semigroups T_t on B(H) and the checks run against them.
//
// Three families are supported:
//   * Exponential   T_t = exp(t L) for a d^2 x d^2 generator L;
//   * Conjugation   T_t A = V_t A V_t^* for a contraction semigroup V_t;
//   * ShiftExample  T_t A = omega(A) E_t + V_t A V_t^* on a truncated cell
//                   grid of L2[0, n*step), where V_t is the right shift,
//                   E_t projects onto the first t/step cells and
//                   omega(A) = <f, A f> with f a normalized exp(-x).
// Discretized families are only defined at integer multiples of their step.

#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Sparse>

#include "semiflow/matrix_core.hpp"
#include "semiflow/operator_space.hpp"
#include "semiflow/quantum_maps.hpp"
#include "semiflow/random.hpp"
#include "semiflow/report.hpp"

namespace semiflow {

/// Cell grid of [0, n*step) with the discretized state f.
struct GridSpec {
  int n = 0;
  double step = 0.0;
  ComplexVector f;

  /// f sampled as sqrt(2) exp(-x) at cell midpoints, renormalized to unit norm.
  static GridSpec exponential(int n, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("GridSpec: step must be > 0");
    if (n < 4) throw DomainError("GridSpec: need at least 4 cells");
    GridSpec g{n, step, ComplexVector(n)};
    for (int j = 0; j < n; ++j) {
      g.f(j) = std::sqrt(2.0) * std::exp(-(j + 0.5) * step) * std::sqrt(step);
    }
    g.f /= g.f.norm();
    return g;
  }

  void validate() const {
    if (n < 4) throw DomainError("GridSpec: need at least 4 cells");
    if (!(step > 0.0)) throw DomainError("GridSpec: step must be > 0");
    if (f.size() != n) throw ShapeError("GridSpec: f has wrong length");
    if (std::abs(f.norm() - 1.0) > 1e-12) throw DomainError("GridSpec: f must have unit norm");
  }

  double horizon() const noexcept { return n * step; }
  HilbertDim dim() const { return HilbertDim(n); }

  /// omega(A) = <f, A f>.
  Complex omega(const ComplexMatrix& a) const { return f.dot(a * f); }
};

struct MatrixGroup {
  ComplexMatrix k;  // V_t = exp(t K), K + K^* <= 0
};
struct CyclicShift {
  int d = 0;
  double step = 0.0;  // V_step is the unitary circular shift e_j -> e_{j+1 mod d}
};
struct TruncatedShift {
  int d = 0;
  double step = 0.0;  // V_step shifts e_j -> e_{j+1}, dropping e_{d-1}
};
using ContractionSemigroupSpec = std::variant<MatrixGroup, CyclicShift, TruncatedShift>;

struct ExponentialSpec {
  Superoperator generator;
};
struct ConjugationSpec {
  ContractionSemigroupSpec contraction;
};
struct ShiftExampleSpec {
  GridSpec grid;
};

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError("semigroup: time must be finite and >= 0, got " + std::to_string(t));
  }
}

/// t / step as an integer, or GridAlignmentError.
inline long grid_steps(double t, double step) {
  require_time(t);
  const double q = t / step;
  const double k = std::round(q);
  if (std::abs(q - k) > 1e-9 * std::max(1.0, q)) {
    throw GridAlignmentError("time " + std::to_string(t) + " is not a multiple of the grid step " +
                             std::to_string(step));
  }
  return static_cast<long>(k);
}

/// Shift by k cells on n cells, dropping overflow.
inline ComplexMatrix truncated_shift(int n, long k) {
  ComplexMatrix v = ComplexMatrix::Zero(n, n);
  for (long j = 0; j + k < n; ++j) v(j + k, j) = 1.0;
  return v;
}

inline ComplexMatrix leading_projection(int n, long k) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  for (long j = 0; j < std::min<long>(k, n); ++j) e(j, j) = 1.0;
  return e;
}

// Principal-branch phases of the circular shift's eigenvalues exp(-2 pi i m/d).
inline double cyclic_phase(int m, int d) {
  double theta = -2.0 * std::numbers::pi * m / d;
  while (theta <= -std::numbers::pi) theta += 2.0 * std::numbers::pi;
  return theta;
}

inline ComplexMatrix cyclic_group_element(int d, double steps) {
  ComplexMatrix v = ComplexMatrix::Zero(d, d);
  for (int m = 0; m < d; ++m) {
    const Complex lambda = std::exp(kI * (cyclic_phase(m, d) * steps));
    for (int j = 0; j < d; ++j) {
      for (int l = 0; l < d; ++l) {
        v(j, l) += lambda * std::exp(kI * (2.0 * std::numbers::pi * m * (j - l) / d));
      }
    }
  }
  return v / static_cast<double>(d);
}

inline ComplexMatrix cyclic_log(int d, double step) {
  ComplexMatrix k = ComplexMatrix::Zero(d, d);
  for (int m = 0; m < d; ++m) {
    const Complex mu = kI * (cyclic_phase(m, d) / step);
    for (int j = 0; j < d; ++j) {
      for (int l = 0; l < d; ++l) {
        k(j, l) += mu * std::exp(kI * (2.0 * std::numbers::pi * m * (j - l) / d));
      }
    }
  }
  return k / static_cast<double>(d);
}

}  // namespace detail

inline void validate_contraction(const ContractionSemigroupSpec& c) {
  std::visit(detail::overloaded{
                 [](const MatrixGroup& g) {
                   detail::require_square(g.k, "MatrixGroup");
                   require_finite(g.k, "MatrixGroup");
                   const auto eig = hermitian_eigenvalues(hermitize(g.k));
                   const double scale = std::max(1.0, g.k.cwiseAbs().maxCoeff());
                   if (!eig.empty() && eig.back() > 1e-10 * scale) {
                     throw DomainError(
                         "MatrixGroup: K + K^* is not negative semidefinite, so exp(tK) is not "
                         "a contraction");
                   }
                 },
                 [](const CyclicShift& s) {
                   HilbertDim{s.d};
                   if (!(s.step > 0.0)) throw DomainError("CyclicShift: step must be > 0");
                 },
                 [](const TruncatedShift& s) {
                   HilbertDim{s.d};
                   if (!(s.step > 0.0)) throw DomainError("TruncatedShift: step must be > 0");
                 }},
             c);
}

/// V_t of a contraction semigroup.
inline ComplexMatrix contraction_at(const ContractionSemigroupSpec& c, double t) {
  detail::require_time(t);
  return std::visit(
      detail::overloaded{
          [t](const MatrixGroup& g) -> ComplexMatrix { return expm(t * g.k); },
          [t](const CyclicShift& s) -> ComplexMatrix {
            if (t == 0.0) return identity(s.d);
            return detail::cyclic_group_element(s.d, t / s.step);
          },
          [t](const TruncatedShift& s) -> ComplexMatrix {
            return detail::truncated_shift(s.d, detail::grid_steps(t, s.step));
          }},
      c);
}

class SemigroupSpec {
 public:
  using Variant = std::variant<ExponentialSpec, ConjugationSpec, ShiftExampleSpec>;

  static SemigroupSpec exponential(Superoperator generator) {
    require_finite(generator.matrix(), "ExponentialSpec");
    return SemigroupSpec(ExponentialSpec{std::move(generator)});
  }
  static SemigroupSpec conjugation(ContractionSemigroupSpec c) {
    validate_contraction(c);
    return SemigroupSpec(ConjugationSpec{std::move(c)});
  }
  static SemigroupSpec shift_example(GridSpec grid) {
    grid.validate();
    return SemigroupSpec(ShiftExampleSpec{std::move(grid)});
  }

  const Variant& variant() const noexcept { return v_; }

  HilbertDim dim() const {
    return std::visit(
        detail::overloaded{
            [](const ExponentialSpec& e) { return e.generator.dim(); },
            [](const ConjugationSpec& c) {
              return std::visit(detail::overloaded{
                                    [](const MatrixGroup& g) { return HilbertDim::of(g.k); },
                                    [](const CyclicShift& s) { return HilbertDim(s.d); },
                                    [](const TruncatedShift& s) { return HilbertDim(s.d); }},
                                c.contraction);
            },
            [](const ShiftExampleSpec& s) { return s.grid.dim(); }},
        v_);
  }

  /// Grid step when the family is only defined on multiples of it.
  std::optional<double> grid_step() const {
    if (const auto* s = std::get_if<ShiftExampleSpec>(&v_)) return s->grid.step;
    if (const auto* c = std::get_if<ConjugationSpec>(&v_)) {
      if (const auto* ts = std::get_if<TruncatedShift>(&c->contraction)) return ts->step;
    }
    return std::nullopt;
  }

  std::string kind() const {
    return std::visit(detail::overloaded{[](const ExponentialSpec&) { return "exponential"; },
                                         [](const ConjugationSpec&) { return "conjugation"; },
                                         [](const ShiftExampleSpec&) { return "shift_example"; }},
                      v_);
  }

  /// Snaps t to the nearest admissible time (identity for continuous families).
  double snap(double t) const {
    if (auto h = grid_step()) return std::round(t / *h) * *h;
    return t;
  }

 private:
  explicit SemigroupSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// T_t(a) without forming the d^2 x d^2 matrix where the family allows it.
inline ComplexMatrix apply_at(const SemigroupSpec& spec, double t, const ComplexMatrix& a) {
  detail::require_time(t);
  const HilbertDim d = spec.dim();
  if (a.rows() != d.value() || a.cols() != d.value()) {
    throw ShapeError("apply_at: operator " + detail::shape_string(a) +
                     " does not match dimension " + std::to_string(d.value()));
  }
  return std::visit(
      detail::overloaded{
          [&](const ExponentialSpec& e) -> ComplexMatrix {
            return devectorize(expm(t * e.generator.matrix()) * vectorize(a), d);
          },
          [&](const ConjugationSpec& c) -> ComplexMatrix {
            const ComplexMatrix v = contraction_at(c.contraction, t);
            return v * a * v.adjoint();
          },
          [&](const ShiftExampleSpec& s) -> ComplexMatrix {
            const long k = detail::grid_steps(t, s.grid.step);
            const int n = s.grid.n;
            // V A V^* moves the (i, j) entry to (i + k, j + k).
            ComplexMatrix out = ComplexMatrix::Zero(n, n);
            if (k < n) out.bottomRightCorner(n - k, n - k) = a.topLeftCorner(n - k, n - k);
            const Complex w = s.grid.omega(a);
            for (long j = 0; j < std::min<long>(k, n); ++j) out(j, j) += w;
            return out;
          }},
      spec.variant());
}

inline LinearMap map_at(const SemigroupSpec& spec, double t) {
  return [spec, t](const ComplexMatrix& a) { return apply_at(spec, t, a); };
}

namespace detail {

using SparseSuperop = Eigen::SparseMatrix<Complex>;

/// Matrix of the ShiftExample map after k grid steps, in sparse storage:
/// the shift part is a partial permutation, the omega part has k dense rows.
inline SparseSuperop shift_example_sparse(const GridSpec& g, long k) {
  const int n = g.n;
  const Eigen::Index n2 = Eigen::Index{n} * n;
  const long kk = std::min<long>(k, n);
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>((n - kk) * (n - kk) + kk * n2));
  for (long j = 0; j + k < n; ++j) {
    for (long i = 0; i + k < n; ++i) trip.emplace_back((j + k) * n + (i + k), j * n + i, 1.0);
  }
  for (long a = 0; a < kk; ++a) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        trip.emplace_back(a * n + a, Eigen::Index{j} * n + i, std::conj(g.f(i)) * g.f(j));
      }
    }
  }
  SparseSuperop m(n2, n2);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

/// Spectral norm of a sparse matrix: Lanczos with full reorthogonalization
/// on M^* M. The maps handled here have few distinct singular values, so
/// this terminates after a handful of steps.
inline double sparse_op_norm(const SparseSuperop& m) {
  const Eigen::Index n = m.cols();
  if (n == 0 || m.nonZeros() == 0) return 0.0;
  const Eigen::Index kmax = std::min<Eigen::Index>(n, 120);
  ComplexVector v(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double x = static_cast<double>(j + 1);
    v(j) = Complex(1.0 + 0.5 * std::sin(x), 0.3 * std::cos(2.0 * x + 1.0));
  }
  v.normalize();
  std::vector<ComplexVector> q{v};
  std::vector<double> alpha;
  std::vector<double> beta;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < kmax; ++k) {
    ComplexVector w = m.adjoint() * (m * q.back());
    alpha.push_back(q.back().dot(w).real());
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qi : q) w -= qi * qi.dot(w);
    }
    const double b = w.norm();
    const auto size = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < size) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    theta = es.eigenvalues()(size - 1);
    const double err = b * std::abs(es.eigenvectors()(size - 1, size - 1));
    if (err <= 1e-15 * std::max(theta, 1e-300) || b <= 1e-14 * std::max(theta, 1e-300)) break;
    beta.push_back(b);
    q.push_back(w / b);
  }
  return std::sqrt(std::max(theta, 0.0));
}

inline SparseSuperop sparse_identity(Eigen::Index n) {
  SparseSuperop eye(n, n);
  eye.setIdentity();
  return eye;
}

}  // namespace detail

/// T_t as a dense superoperator.
inline Superoperator evaluate(const SemigroupSpec& spec, double t) {
  detail::require_time(t);
  const HilbertDim d = spec.dim();
  return std::visit(
      detail::overloaded{
          [&](const ExponentialSpec& e) { return Superoperator(d, expm(t * e.generator.matrix())); },
          [&](const ConjugationSpec& c) {
            const ComplexMatrix v = contraction_at(c.contraction, t);
            return superop_from_sandwich(v, v.adjoint());
          },
          [&](const ShiftExampleSpec& s) {
            const long k = detail::grid_steps(t, s.grid.step);
            const int n = s.grid.n;
            const ComplexMatrix v = detail::truncated_shift(n, k);
            // omega(A) = vec(W)^T vec(A) with W_ab = conj(f_a) f_b
            const ComplexMatrix w = s.grid.f.conjugate() * s.grid.f.transpose();
            const ComplexMatrix e = detail::leading_projection(n, k);
            ComplexMatrix m = kron(v.conjugate(), v);
            m += vectorize(e) * vectorize(w).transpose();
            return Superoperator(d, std::move(m));
          }},
      spec.variant());
}

/// Generator as a superoperator. Discretized families use the one-step
/// difference quotient (T_step - I)/step.
inline Superoperator generator_of(const SemigroupSpec& spec) {
  const HilbertDim d = spec.dim();
  if (const auto* e = std::get_if<ExponentialSpec>(&spec.variant())) return e->generator;
  if (const auto* c = std::get_if<ConjugationSpec>(&spec.variant())) {
    const ComplexMatrix* k = nullptr;
    ComplexMatrix log;
    if (const auto* g = std::get_if<MatrixGroup>(&c->contraction)) k = &g->k;
    if (const auto* s = std::get_if<CyclicShift>(&c->contraction)) {
      log = detail::cyclic_log(s->d, s->step);
      k = &log;
    }
    if (k != nullptr) {
      // d/dt V_t A V_t^* = K A + A K^*
      return superop_from_sandwich(*k, identity(d.value())) +
             superop_from_sandwich(identity(d.value()), k->adjoint());
    }
  }
  const double h = *spec.grid_step();
  return Complex(1.0 / h) * (evaluate(spec, h) - Superoperator::identity(d));
}

/// ||T_t|| as the spectral norm of the d^2 x d^2 matrix.
inline double norm_at(const SemigroupSpec& spec, double t) {
  if (const auto* s = std::get_if<ShiftExampleSpec>(&spec.variant())) {
    return detail::sparse_op_norm(
        detail::shift_example_sparse(s->grid, detail::grid_steps(t, s->grid.step)));
  }
  return op_norm(evaluate(spec, t).matrix());
}

// ---------------------------------------------------------------------------
// Checks

/// max over (t, s) in t_grid^2 of ||T_{t+s} - T_t T_s||, plus ||T_0 - I||.
inline VerificationReport check_semigroup_law(const SemigroupSpec& spec,
                                              const std::vector<double>& t_grid, double tol) {
  VerificationReport rep("semigroup-law");
  if (const auto* sx = std::get_if<ShiftExampleSpec>(&spec.variant())) {
    std::map<long, detail::SparseSuperop> sparse;
    auto at = [&](double t) -> const detail::SparseSuperop& {
      const long k = detail::grid_steps(t, sx->grid.step);
      auto it = sparse.find(k);
      if (it == sparse.end()) it = sparse.emplace(k, detail::shift_example_sparse(sx->grid, k)).first;
      return it->second;
    };
    double law = 0.0;
    for (double t : t_grid) {
      for (double s : t_grid) {
        const detail::SparseSuperop prod = at(t) * at(s);
        law = std::max(law, detail::sparse_op_norm(at(spec.snap(t + s)) - prod));
      }
    }
    const double t0 =
        detail::sparse_op_norm(at(0.0) - detail::sparse_identity(spec.dim().squared()));
    rep.add("law_residual", law, tol)
        .add("t0_residual", t0, tol)
        .meta("spec", spec.kind())
        .meta("grid_points", static_cast<std::int64_t>(t_grid.size()))
        .meta("step", sx->grid.step);
    return rep;
  }
  std::map<double, Superoperator> cache;
  auto at = [&](double t) -> const Superoperator& {
    auto it = cache.find(t);
    if (it == cache.end()) it = cache.emplace(t, evaluate(spec, t)).first;
    return it->second;
  };
  double law = 0.0;
  for (double t : t_grid) {
    for (double s : t_grid) {
      const double ts = spec.snap(t + s);
      law = std::max(law, op_norm(at(ts).matrix() - at(t).matrix() * at(s).matrix()));
    }
  }
  const double t0 = op_norm(at(0.0).matrix() - Superoperator::identity(spec.dim()).matrix());
  rep.add("law_residual", law, tol)
      .add("t0_residual", t0, tol)
      .meta("spec", spec.kind())
      .meta("grid_points", static_cast<std::int64_t>(t_grid.size()));
  return rep;
}

struct ExponentialBound {
  double m = 1.0;      // ||T_t|| <= m e^{omega t}
  double omega = 0.0;  // ln ||T_unit|| / unit
  double sampled_sup = 1.0;  // max of ||T_t|| over the estimation grid on [0, unit]
  double delta_bound = 1.0;  // M_delta * max(1, ||T_delta||^floor(unit/delta))
  double unit = 1.0;     // 1, or the largest grid time <= 1 for discretized families
};

namespace detail {

// Golden-section refinement of a local maximum of t -> ||T_t|| in [lo, hi].
inline double refine_norm_max(const SemigroupSpec& spec, double lo, double hi, double best) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = norm_at(spec, c);
  double fd = norm_at(spec, d);
  for (int it = 0; it < 60 && (b - a) > 1e-12; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = norm_at(spec, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = norm_at(spec, d);
    }
    best = std::max({best, fc, fd});
  }
  return best;
}

}  // namespace detail

/// Constructive exponential bound: m is the sup of ||T_t|| over [0, 1]
/// (sampled on `samples` points and refined around interior maxima) and
/// omega = ln ||T_1||. When ||T_1|| < 1 the bound only holds with m scaled
/// by 1/||T_1||, which is applied. Discretized families use their grid.
inline ExponentialBound estimate_exponential_bound(const SemigroupSpec& spec, double delta = 0.1,
                                                   int samples = 201) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("estimate_exponential_bound: delta in (0,1]");
  if (samples < 2) throw DomainError("estimate_exponential_bound: need at least 2 samples");
  std::vector<double> ts;
  double unit = 1.0;
  if (auto h = spec.grid_step()) {
    const long steps = std::max(1L, static_cast<long>(std::floor(1.0 / *h + 1e-9)));
    unit = steps * *h;
    delta = std::clamp(std::round(delta / *h), 1.0, static_cast<double>(steps)) * *h;
    for (long k = 0; k <= steps; ++k) ts.push_back(k * *h);
  } else {
    for (int k = 0; k < samples; ++k) ts.push_back(static_cast<double>(k) / (samples - 1));
  }
  std::vector<double> norms;
  norms.reserve(ts.size());
  for (double t : ts) norms.push_back(norm_at(spec, t));

  double sup = *std::max_element(norms.begin(), norms.end());
  if (!spec.grid_step()) {
    for (std::size_t k = 1; k + 1 < ts.size(); ++k) {
      if (norms[k] >= norms[k - 1] && norms[k] >= norms[k + 1] &&
          (norms[k] > norms[k - 1] || norms[k] > norms[k + 1])) {
        sup = std::max(sup, detail::refine_norm_max(spec, ts[k - 1], ts[k + 1], norms[k]));
      }
    }
  }
  double m_delta = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    if (ts[k] <= delta * (1.0 + 1e-12)) m_delta = std::max(m_delta, norms[k]);
  }
  const double norm_delta = norm_at(spec, delta);
  const double delta_bound =
      m_delta * std::max(1.0, std::pow(norm_delta, std::floor(unit / delta + 1e-9)));

  const double norm_unit = norms.back();
  ExponentialBound b;
  b.unit = unit;
  b.sampled_sup = sup;
  b.delta_bound = delta_bound;
  if (norm_unit > 1e-300) {
    b.omega = std::log(norm_unit) / unit;
    b.m = sup / std::min(1.0, norm_unit);
  } else {
    // T vanishes from `unit` on; any omega works, pick -1.
    b.omega = -1.0;
    b.m = sup * std::exp(unit);
  }
  return b;
}

/// Checks ||T_t|| <= m e^{omega t} + slack on `samples` uniform points in [0, horizon].
inline VerificationReport verify_exponential_bound(const SemigroupSpec& spec,
                                                   const ExponentialBound& bound,
                                                   double horizon = 5.0, int samples = 101,
                                                   double slack = 1e-8) {
  double worst = -INFINITY;
  for (int k = 0; k < samples; ++k) {
    const double t = spec.snap(horizon * k / std::max(1, samples - 1));
    worst = std::max(worst, norm_at(spec, t) - bound.m * std::exp(bound.omega * t));
  }
  VerificationReport rep("exp-bound");
  rep.add("bound_excess", std::max(0.0, worst), slack)
      .meta("spec", spec.kind())
      .meta("m", bound.m)
      .meta("omega", bound.omega)
      .meta("delta_bound", bound.delta_bound)
      .meta("horizon", horizon)
      .meta("samples", samples);
  return rep;
}

/// Weak continuity at zero along a decreasing sequence t_n: residual
/// r_n = max_eta |eta(T_{t_n} a - a)|. Passes when the last residual is at
/// most `tol` and each r_{n+1} <= 1.1 r_n.
inline VerificationReport check_wot_continuity_at_zero(const SemigroupSpec& spec,
                                                       const FunctionalBasis& basis,
                                                       const ComplexMatrix& a,
                                                       const std::vector<double>& t_seq,
                                                       double tol) {
  if (t_seq.empty()) throw DomainError("check_wot_continuity_at_zero: empty time sequence");
  std::vector<double> res;
  for (std::size_t k = 0; k < t_seq.size(); ++k) {
    if (!(t_seq[k] > 0.0)) throw DomainError("check_wot_continuity_at_zero: times must be > 0");
    if (k > 0 && !(t_seq[k] < t_seq[k - 1])) {
      throw DomainError("check_wot_continuity_at_zero: times must decrease");
    }
    res.push_back(basis.max_abs_pairing(apply_at(spec, t_seq[k], a) - a));
  }
  double monotone_excess = 0.0;
  for (std::size_t k = 1; k < res.size(); ++k) {
    monotone_excess = std::max(monotone_excess, res[k] - 1.1 * res[k - 1]);
  }
  VerificationReport rep("wot-zero");
  rep.add("final_residual", res.back(), tol)
      .add("monotonicity_excess", monotone_excess, 1e-15)
      .meta("spec", spec.kind())
      .meta("first_residual", res.front())
      .meta("smallest_t", t_seq.back());
  return rep;
}

/// max over random unit-norm A and s in s_grid of |omega(T_s A) - omega(A)|
/// for the ShiftExample family on `grid`.
inline VerificationReport omega_invariance_check(const GridSpec& grid,
                                                 const std::vector<double>& s_grid, double tol,
                                                 Rng& rng, int samples = 8) {
  const SemigroupSpec spec = SemigroupSpec::shift_example(grid);
  std::vector<ComplexMatrix> ops;
  ops.push_back(identity(grid.n));
  for (int k = 0; k < samples; ++k) {
    ComplexMatrix a = random_matrix(rng, grid.n, grid.n);
    ops.push_back(a / op_norm(a));
  }
  double worst = 0.0;
  double worst_identity = 0.0;
  for (double s : s_grid) {
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const double r = std::abs(grid.omega(apply_at(spec, s, ops[k])) - grid.omega(ops[k]));
      worst = std::max(worst, r);
      if (k == 0) worst_identity = std::max(worst_identity, r);
    }
  }
  VerificationReport rep("omega-invariance");
  rep.add("omega_residual", worst, tol)
      .meta("identity_residual", worst_identity)
      .meta("n", grid.n)
      .meta("step", grid.step)
      .meta("samples", samples);
  return rep;
}

}  // namespace semiflow
