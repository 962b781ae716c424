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

// B(H) for finite-dimensional H: column-stacking vectorization and the
// trace-duality functionals eta(T) = tr(s T) that carry the weak operator
// topology. In finite dimension the rank-one functionals span the whole
// dual, so WOT, sigma-weak and norm topologies all coincide here.

#pragma once

#include <string>
#include <vector>

#include "semiflow/matrix_core.hpp"

namespace semiflow {

/// Dimension of the Hilbert space H.
class HilbertDim {
 public:
  static constexpr int kMax = 1024;

  explicit HilbertDim(int d) : d_(d) {
    if (d < 1 || d > kMax) {
      throw DomainError("HilbertDim: dimension " + std::to_string(d) + " outside [1, " +
                        std::to_string(kMax) + "]");
    }
  }
  static HilbertDim of(const ComplexMatrix& a) {
    detail::require_square(a, "HilbertDim::of");
    return HilbertDim(static_cast<int>(a.rows()));
  }

  int value() const noexcept { return d_; }
  Eigen::Index squared() const noexcept { return Eigen::Index{d_} * d_; }

  friend bool operator==(HilbertDim, HilbertDim) = default;

 private:
  int d_;
};

/// Column stacking: entry (i, j) lands at index j*d + i. This is exactly
/// Eigen's column-major storage order.
inline ComplexVector vectorize(const ComplexMatrix& a) {
  detail::require_square(a, "vectorize");
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

inline ComplexMatrix devectorize(const ComplexVector& v, HilbertDim d) {
  if (v.size() != d.squared()) {
    throw ShapeError("devectorize: vector of length " + std::to_string(v.size()) +
                     " does not match d^2 = " + std::to_string(d.squared()));
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), d.value(), d.value());
}

inline ComplexMatrix matrix_unit(HilbertDim d, int i, int j) {
  ComplexMatrix e = ComplexMatrix::Zero(d.value(), d.value());
  e(i, j) = 1.0;
  return e;
}

inline ComplexVector basis_vector(HilbertDim d, int i) {
  ComplexVector e = ComplexVector::Zero(d.value());
  e(i) = 1.0;
  return e;
}

/// Trace-duality functional eta(T) = tr(s T).
class Functional {
 public:
  explicit Functional(ComplexMatrix s) : s_(std::move(s)) {
    detail::require_square(s_, "Functional");
    require_finite(s_, "Functional");
  }

  const ComplexMatrix& representative() const noexcept { return s_; }
  HilbertDim dim() const { return HilbertDim::of(s_); }

  /// Sum of singular values of the representative (the dual norm against
  /// the operator norm on B(H)).
  double trace_norm() const {
    Eigen::JacobiSVD<ComplexMatrix> svd(s_);
    return svd.singularValues().sum();
  }

 private:
  ComplexMatrix s_;
};

inline Complex pair(const Functional& eta, const ComplexMatrix& t) {
  const ComplexMatrix& s = eta.representative();
  if (t.rows() != s.cols() || t.cols() != s.rows()) {
    throw ShapeError("pair: functional of dimension " + std::to_string(s.rows()) +
                     " cannot pair with a " + detail::shape_string(t) + " operator");
  }
  // tr(s t) = sum_{ij} s_ij t_ji
  return s.transpose().cwiseProduct(t).sum();
}

/// eta_{x,y}(T) = <x, T y>, realised by s = |y><x|.
inline Functional rank_one_functional(const ComplexVector& x, const ComplexVector& y) {
  if (x.size() != y.size()) {
    throw ShapeError("rank_one_functional: vectors of length " + std::to_string(x.size()) +
                     " and " + std::to_string(y.size()));
  }
  return Functional(y * x.adjoint());
}

/// p_{x,y}(T) = |<x, T y>|.
inline double wot_seminorm(const ComplexVector& x, const ComplexVector& y, const ComplexMatrix& t) {
  if (t.rows() != t.cols() || x.size() != t.rows() || y.size() != t.cols()) {
    throw ShapeError("wot_seminorm: vectors of length " + std::to_string(x.size()) + ", " +
                     std::to_string(y.size()) + " against operator " + detail::shape_string(t));
  }
  return std::abs(x.dot(t * y));
}

/// A family of functionals spanning the dual of B(H).
struct FunctionalBasis {
  HilbertDim dim;
  std::vector<Functional> functionals;

  /// gram(k, u) = eta_k(E_u) where u is the column-stacking index of the
  /// matrix unit E_{ab} (u = b*d + a).
  ComplexMatrix gram() const {
    const int d = dim.value();
    ComplexMatrix g(static_cast<Eigen::Index>(functionals.size()), dim.squared());
    for (std::size_t k = 0; k < functionals.size(); ++k) {
      const ComplexMatrix& s = functionals[k].representative();
      for (int b = 0; b < d; ++b) {
        for (int a = 0; a < d; ++a) {
          // tr(s E_ab) = s_ba
          g(static_cast<Eigen::Index>(k), Eigen::Index{b} * d + a) = s(b, a);
        }
      }
    }
    return g;
  }

  ComplexVector pairings(const ComplexMatrix& t) const {
    ComplexVector v(static_cast<Eigen::Index>(functionals.size()));
    for (std::size_t k = 0; k < functionals.size(); ++k) {
      v(static_cast<Eigen::Index>(k)) = pair(functionals[k], t);
    }
    return v;
  }

  /// max_k |eta_k(t)|.
  double max_abs_pairing(const ComplexMatrix& t) const {
    double m = 0.0;
    for (const auto& eta : functionals) m = std::max(m, std::abs(pair(eta, t)));
    return m;
  }
};

/// The d^2 rank-one functionals eta_{e_i, e_j} on the standard basis.
inline FunctionalBasis functional_basis(HilbertDim d) {
  FunctionalBasis basis{d, {}};
  basis.functionals.reserve(static_cast<std::size_t>(d.squared()));
  for (int i = 0; i < d.value(); ++i) {
    for (int j = 0; j < d.value(); ++j) {
      basis.functionals.push_back(rank_one_functional(basis_vector(d, i), basis_vector(d, j)));
    }
  }
  return basis;
}

/// Recovers T from its pairings against a spanning basis by solving the
/// Gram system. Fails with SingularityError if the basis does not span.
inline ComplexMatrix reconstruct_from_pairings(const FunctionalBasis& basis,
                                               const ComplexVector& values) {
  if (values.size() != static_cast<Eigen::Index>(basis.functionals.size())) {
    throw ShapeError("reconstruct_from_pairings: " + std::to_string(values.size()) +
                     " values for " + std::to_string(basis.functionals.size()) + " functionals");
  }
  return devectorize(solve(basis.gram(), values), basis.dim);
}

}  // namespace semiflow
