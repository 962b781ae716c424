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

// Seeded random matrices. All generators take the engine by reference so a
// single seed drives a whole run.

#pragma once

#include <random>

#include "semiflow/matrix_core.hpp"

namespace semiflow {

using Rng = std::mt19937_64;

// std::normal_distribution is implementation-defined; Box-Muller on top of
// generate_canonical keeps draws identical across standard libraries.
inline double standard_normal(Rng& rng) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  double u1 = 0.0;
  while (u1 <= 0.0) u1 = std::generate_canonical<double, 53>(rng);
  const double u2 = std::generate_canonical<double, 53>(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

/// Entries i.i.d. complex Gaussian with E|z|^2 = 1.
inline ComplexMatrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix a(rows, cols);
  const double s = std::sqrt(0.5);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = standard_normal(rng);
      const double im = standard_normal(rng);
      a(i, j) = Complex(s * re, s * im);
    }
  }
  return a;
}

inline ComplexVector random_vector(Rng& rng, Eigen::Index n) { return random_matrix(rng, n, 1); }

inline ComplexMatrix random_hermitian(Rng& rng, Eigen::Index d) {
  return hermitize(random_matrix(rng, d, d));
}

/// Haar-ish unitary from the QR factor of a Gaussian matrix.
inline ComplexMatrix random_unitary(Rng& rng, Eigen::Index d) {
  const ComplexMatrix g = random_matrix(rng, d, d);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < d; ++k) {
    const Complex rk = r(k, k);
    if (std::abs(rk) > 0.0) q.col(k) *= rk / std::abs(rk);
  }
  return q;
}

}  // namespace semiflow
