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

// Linear maps on B(H) in the Heisenberg picture. A Superoperator is the
// d^2 x d^2 matrix acting on column-stacked operators; Kraus sets are
// written sum_j V_j^* A V_j throughout.

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "semiflow/matrix_core.hpp"
#include "semiflow/operator_space.hpp"
#include "semiflow/report.hpp"

namespace semiflow {

class Superoperator {
 public:
  Superoperator(HilbertDim d, ComplexMatrix m) : d_(d), m_(std::move(m)) {
    if (m_.rows() != d_.squared() || m_.cols() != d_.squared()) {
      throw ShapeError("Superoperator: matrix " + detail::shape_string(m_) +
                       " is not d^2 x d^2 for d = " + std::to_string(d_.value()));
    }
  }

  static Superoperator identity(HilbertDim d) {
    return {d, ComplexMatrix::Identity(d.squared(), d.squared())};
  }
  static Superoperator zero(HilbertDim d) {
    return {d, ComplexMatrix::Zero(d.squared(), d.squared())};
  }

  HilbertDim dim() const noexcept { return d_; }
  const ComplexMatrix& matrix() const noexcept { return m_; }

  ComplexMatrix operator()(const ComplexMatrix& a) const {
    if (a.rows() != d_.value() || a.cols() != d_.value()) {
      throw ShapeError("apply: operator " + detail::shape_string(a) +
                       " does not match superoperator dimension " + std::to_string(d_.value()));
    }
    return devectorize(m_ * vectorize(a), d_);
  }

  /// (*this) after `inner`, i.e. A -> this(inner(A)).
  Superoperator compose(const Superoperator& inner) const {
    require_same_dim(inner, "compose");
    return {d_, m_ * inner.m_};
  }

  friend Superoperator operator+(const Superoperator& a, const Superoperator& b) {
    a.require_same_dim(b, "operator+");
    return {a.d_, a.m_ + b.m_};
  }
  friend Superoperator operator-(const Superoperator& a, const Superoperator& b) {
    a.require_same_dim(b, "operator-");
    return {a.d_, a.m_ - b.m_};
  }
  friend Superoperator operator*(Complex c, const Superoperator& s) { return {s.d_, c * s.m_}; }

 private:
  void require_same_dim(const Superoperator& other, const char* op) const {
    if (!(d_ == other.d_)) {
      throw ShapeError(std::string(op) + ": superoperator dimensions " +
                       std::to_string(d_.value()) + " and " + std::to_string(other.d_.value()));
    }
  }

  HilbertDim d_;
  ComplexMatrix m_;
};

/// Matrix-free map on B(H); used where d^2 x d^2 storage is too large.
using LinearMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

inline ComplexMatrix apply(const Superoperator& s, const ComplexMatrix& a) { return s(a); }

/// A -> left * A * right, with matrix right^T (x) left.
inline Superoperator superop_from_sandwich(const ComplexMatrix& left, const ComplexMatrix& right) {
  detail::require_square(left, "superop_from_sandwich");
  if (right.rows() != left.rows() || right.cols() != left.cols()) {
    throw ShapeError("superop_from_sandwich: left " + detail::shape_string(left) + " vs right " +
                     detail::shape_string(right));
  }
  return {HilbertDim::of(left), kron(right.transpose(), left)};
}

/// Dense superoperator of a matrix-free map, column by column.
inline Superoperator superop_from_map(const LinearMap& map, HilbertDim d) {
  ComplexMatrix m(d.squared(), d.squared());
  for (int j = 0; j < d.value(); ++j) {
    for (int i = 0; i < d.value(); ++i) {
      m.col(Eigen::Index{j} * d.value() + i) = vectorize(map(matrix_unit(d, i, j)));
    }
  }
  return {d, std::move(m)};
}

struct KrausSet {
  std::vector<ComplexMatrix> ops;

  KrausSet() = default;
  explicit KrausSet(std::vector<ComplexMatrix> v) : ops(std::move(v)) {
    for (const auto& k : ops) {
      detail::require_square(k, "KrausSet");
      if (k.rows() != ops.front().rows()) throw ShapeError("KrausSet: operators differ in size");
      require_finite(k, "KrausSet");
    }
  }
  bool empty() const noexcept { return ops.empty(); }
  std::size_t size() const noexcept { return ops.size(); }

  /// sum_j V_j^* V_j.
  ComplexMatrix gram_sum(HilbertDim d) const {
    ComplexMatrix s = ComplexMatrix::Zero(d.value(), d.value());
    for (const auto& v : ops) s += v.adjoint() * v;
    return s;
  }
};

/// sum_j V_j^* A V_j as a superoperator.
inline Superoperator kraus_map(const KrausSet& kraus, HilbertDim d) {
  Superoperator s = Superoperator::zero(d);
  for (const auto& v : kraus.ops) s = s + superop_from_sandwich(v.adjoint(), v);
  return s;
}

/// L(A) = sum_j V_j^* A V_j + G^* A + A G.
struct LindbladForm {
  KrausSet kraus;
  ComplexMatrix g;

  HilbertDim dim() const { return HilbertDim::of(g); }
};

/// phi(A) = v^* pi(A) v with v the vertical stack of the Kraus operators and
/// pi(A) = I_m (x) A.
struct StinespringPair {
  ComplexMatrix v;
  int copies = 0;

  ComplexMatrix pi(const ComplexMatrix& a) const { return kron(identity(copies), a); }
  ComplexMatrix compress(const ComplexMatrix& a) const { return v.adjoint() * pi(a) * v; }
};

// ---------------------------------------------------------------------------
// Choi / Kraus

/// C = sum_ij E_ij (x) s(E_ij). Entry ((i,a),(j,b)) is s(E_ij)(a,b).
inline ComplexMatrix choi(const Superoperator& s) {
  const int d = s.dim().value();
  const ComplexMatrix& m = s.matrix();
  ComplexMatrix c(s.dim().squared(), s.dim().squared());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Eigen::Index src_col = Eigen::Index{j} * d + i;  // vec(E_ij)
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          c(Eigen::Index{i} * d + a, Eigen::Index{j} * d + b) = m(Eigen::Index{b} * d + a, src_col);
        }
      }
    }
  }
  return c;
}

namespace detail {

// Smallest eigenvalue of the Hermitized Choi matrix of `map`, restricted to
// the rows and columns where it has non-zero entries; the rest of the
// spectrum is exactly zero. This keeps sparse maps on large grids tractable.
inline double min_choi_eigenvalue(const LinearMap& map, HilbertDim d) {
  const int n = d.value();
  std::map<std::pair<Eigen::Index, Eigen::Index>, Complex> entries;
  std::vector<char> in_support(static_cast<std::size_t>(d.squared()), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const ComplexMatrix out = map(matrix_unit(d, i, j));
      for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) {
          const Complex z = out(a, b);
          if (z == Complex{}) continue;
          const Eigen::Index r = Eigen::Index{i} * n + a;
          const Eigen::Index c = Eigen::Index{j} * n + b;
          entries[{r, c}] = z;
          in_support[static_cast<std::size_t>(r)] = 1;
          in_support[static_cast<std::size_t>(c)] = 1;
        }
      }
    }
  }
  std::vector<Eigen::Index> index(in_support.size(), -1);
  Eigen::Index k = 0;
  for (std::size_t r = 0; r < in_support.size(); ++r) {
    if (in_support[r]) index[r] = k++;
  }
  if (k == 0) return 0.0;
  ComplexMatrix sub = ComplexMatrix::Zero(k, k);
  for (const auto& [rc, z] : entries) {
    sub(index[static_cast<std::size_t>(rc.first)], index[static_cast<std::size_t>(rc.second)]) = z;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitize(sub), Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  if (k < d.squared()) lo = std::min(lo, 0.0);
  return lo;
}

}  // namespace detail

struct CpReport {
  bool completely_positive = false;
  double min_eigenvalue = 0.0;
};

inline CpReport is_completely_positive(const LinearMap& map, HilbertDim d, double tol) {
  const double lo = detail::min_choi_eigenvalue(map, d);
  return {lo >= -tol, lo};
}

inline CpReport is_completely_positive(const Superoperator& s, double tol) {
  return is_completely_positive([&s](const ComplexMatrix& a) { return s(a); }, s.dim(), tol);
}

/// Kraus operators of a PSD Choi matrix. Eigenvalues below `tol` are
/// dropped; an eigenvalue below -tol is a NotCompletelyPositiveError.
inline KrausSet kraus_from_choi(const ComplexMatrix& c, double tol = 1e-10) {
  detail::require_square(c, "kraus_from_choi");
  const auto d2 = c.rows();
  const int d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(d2))));
  if (Eigen::Index{d} * d != d2) {
    throw ShapeError("kraus_from_choi: size " + std::to_string(d2) + " is not a square number");
  }
  const HermitianEigen eig = hermitian_eigen(c, std::max(tol, 1e-12));
  const double lo = eig.values.size() ? eig.values.minCoeff() : 0.0;
  if (lo < -tol) {
    throw NotCompletelyPositiveError(
        "kraus_from_choi: Choi matrix has eigenvalue " + std::to_string(lo) + " below -tol", lo);
  }
  std::vector<ComplexMatrix> ops;
  for (Eigen::Index k = eig.values.size() - 1; k >= 0; --k) {
    const double lambda = eig.values(k);
    if (lambda < tol) break;
    const ComplexVector w = std::sqrt(lambda) * eig.vectors.col(k);
    ComplexMatrix v(d, d);
    for (int j = 0; j < d; ++j) {
      for (int b = 0; b < d; ++b) v(j, b) = std::conj(w(Eigen::Index{j} * d + b));
    }
    ops.push_back(std::move(v));
  }
  return KrausSet(std::move(ops));
}

struct UnitalReport {
  bool unital = false;
  double residual = 0.0;
};

/// ||s(I) - I|| in operator norm.
inline UnitalReport is_unital(const LinearMap& map, HilbertDim d, double tol) {
  const double r = op_norm(map(identity(d.value())) - identity(d.value()));
  return {r <= tol, r};
}

inline UnitalReport is_unital(const Superoperator& s, double tol) {
  return is_unital([&s](const ComplexMatrix& a) { return s(a); }, s.dim(), tol);
}

// ---------------------------------------------------------------------------
// Generators

inline Superoperator lindblad_generator(const LindbladForm& lf) {
  const HilbertDim d = lf.dim();
  const ComplexMatrix eye = identity(d.value());
  for (const auto& v : lf.kraus.ops) {
    if (v.rows() != d.value()) throw ShapeError("lindblad_generator: Kraus/G size mismatch");
  }
  return kraus_map(lf.kraus, d) + superop_from_sandwich(lf.g.adjoint(), eye) +
         superop_from_sandwich(eye, lf.g);
}

/// Fixes G = -1/2 sum_j V_j^* V_j - i H, so L(I) = 0 and H enters as i[H, .].
inline LindbladForm markovian_completion(const KrausSet& kraus, const ComplexMatrix& h) {
  detail::require_square(h, "markovian_completion");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("markovian_completion: Hamiltonian is not Hermitian");
  }
  const HilbertDim d = HilbertDim::of(h);
  for (const auto& v : kraus.ops) {
    if (v.rows() != d.value()) throw ShapeError("markovian_completion: Kraus/H size mismatch");
  }
  return {kraus, -0.5 * kraus.gram_sum(d) - kI * hermitize(h)};
}

inline StinespringPair stinespring_from_kraus(const KrausSet& kraus) {
  if (kraus.empty()) throw DomainError("stinespring_from_kraus: empty Kraus set");
  const auto d = kraus.ops.front().rows();
  const int m = static_cast<int>(kraus.size());
  ComplexMatrix v(m * d, d);
  for (int j = 0; j < m; ++j) v.block(j * d, 0, d, d) = kraus.ops[static_cast<std::size_t>(j)];
  return {std::move(v), m};
}

/// Checks the generator against its dilated form on every matrix unit A and
/// basis pair (x, y). With Gp := G^* (so that L(A) = phi(A) + Gp A + A Gp^*):
///   lhs            = <x, L(A) y>                  from the superoperator matrix
///   sesquilinear   = <Vx, pi(A) Vy> + <x, Gp A y> + <Gp A^* x, y>
///   operator form  = (V^* pi(A) V + Gp A + A Gp^*)(x, y)
/// Residuals are the maximal pairwise gaps.
inline VerificationReport gks_form_check(const LindbladForm& lf, double tol) {
  const HilbertDim d = lf.dim();
  const int n = d.value();
  const Superoperator l = lindblad_generator(lf);
  const ComplexMatrix gp = lf.g.adjoint();
  const bool has_kraus = !lf.kraus.empty();
  const StinespringPair dil = has_kraus ? stinespring_from_kraus(lf.kraus) : StinespringPair{};

  double lhs_vs_sesq = 0.0;
  double lhs_vs_op = 0.0;
  double sesq_vs_op = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const ComplexMatrix a = matrix_unit(d, i, j);
      const ComplexMatrix la = l(a);
      const ComplexMatrix pia = has_kraus ? dil.pi(a) : ComplexMatrix();
      ComplexMatrix op_form = gp * a + a * gp.adjoint();
      if (has_kraus) op_form += dil.compress(a);
      for (int p = 0; p < n; ++p) {
        const ComplexVector x = basis_vector(d, p);
        for (int q = 0; q < n; ++q) {
          const ComplexVector y = basis_vector(d, q);
          const Complex lhs = x.dot(la * y);
          Complex sesq = x.dot(gp * a * y) + (gp * a.adjoint() * x).dot(y);
          if (has_kraus) sesq += (dil.v * x).dot(pia * (dil.v * y));
          const Complex opv = op_form(p, q);
          lhs_vs_sesq = std::max(lhs_vs_sesq, std::abs(lhs - sesq));
          lhs_vs_op = std::max(lhs_vs_op, std::abs(lhs - opv));
          sesq_vs_op = std::max(sesq_vs_op, std::abs(sesq - opv));
        }
      }
    }
  }
  VerificationReport rep("gks-form");
  rep.add("generator_vs_sesquilinear", lhs_vs_sesq, tol)
      .add("generator_vs_operator_form", lhs_vs_op, tol)
      .add("sesquilinear_vs_operator_form", sesq_vs_op, tol)
      .meta("d", n)
      .meta("kraus_count", static_cast<std::int64_t>(lf.kraus.size()));
  return rep;
}

}  // namespace semiflow
