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

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace semiflow {
namespace {

using testing::max_abs;

TEST(HilbertDimTest, Bounds) {
  EXPECT_THROW(HilbertDim(0), DomainError);
  EXPECT_THROW(HilbertDim(HilbertDim::kMax + 1), DomainError);
  EXPECT_GE(HilbertDim::kMax, 16);
  EXPECT_EQ(HilbertDim(3).squared(), 9);
  EXPECT_THROW(HilbertDim::of(ComplexMatrix::Zero(2, 3)), ShapeError);
}

TEST(Vectorize, ColumnStacking) {
  ComplexMatrix a(2, 2);
  a << 1, 2, 3, 4;
  ComplexVector want(4);
  want << 1, 3, 2, 4;
  EXPECT_EQ(vectorize(a), want);

  ComplexVector eye(4);
  eye << 1, 0, 0, 1;
  EXPECT_EQ(vectorize(identity(2)), eye);
  EXPECT_EQ(devectorize(eye, HilbertDim(2)), identity(2));
}

TEST(Vectorize, RoundTripIsBitIdentical) {
  Rng rng(21);
  const ComplexMatrix a = random_matrix(rng, 3, 3);
  EXPECT_EQ(devectorize(vectorize(a), HilbertDim(3)), a);
}

TEST(Vectorize, Errors) {
  EXPECT_THROW(vectorize(ComplexMatrix::Zero(2, 3)), ShapeError);
  EXPECT_THROW(devectorize(ComplexVector::Zero(5), HilbertDim(2)), ShapeError);
}

TEST(Vectorize, SandwichIntertwining) {
  Rng rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + trial % 3;
    const ComplexMatrix a = random_matrix(rng, d, d);
    const ComplexMatrix x = random_matrix(rng, d, d);
    const ComplexMatrix b = random_matrix(rng, d, d);
    const ComplexMatrix want = a * x * b;
    const ComplexMatrix got = devectorize(kron(b.transpose(), a) * vectorize(x), HilbertDim(d));
    EXPECT_LE(max_abs(got - want), 1e-12 * std::max(1.0, max_abs(want)));
  }
}

TEST(RankOneFunctional, MatrixUnits) {
  const HilbertDim d(2);
  const ComplexVector e1 = basis_vector(d, 0);
  const ComplexVector e2 = basis_vector(d, 1);
  EXPECT_EQ(pair(rank_one_functional(e1, e1), identity(2)), Complex(1.0));
  EXPECT_EQ(pair(rank_one_functional(e1, e2), matrix_unit(d, 0, 1)), Complex(1.0));
  EXPECT_EQ(pair(rank_one_functional(e2, e1), matrix_unit(d, 0, 1)), Complex(0.0));
  EXPECT_THROW(rank_one_functional(e1, ComplexVector::Zero(3)), ShapeError);
}

TEST(RankOneFunctional, MatchesInnerProduct) {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexVector x = random_vector(rng, 3);
    const ComplexVector y = random_vector(rng, 3);
    const ComplexMatrix t = random_matrix(rng, 3, 3);
    // <x, T y>, conjugate-linear in x, written out by hand.
    Complex want = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) want += std::conj(x(i)) * t(i, j) * y(j);
    EXPECT_LE(std::abs(pair(rank_one_functional(x, y), t) - want), 1e-13);
  }
}

TEST(Pair, BasicsAndLinearity) {
  const HilbertDim d(3);
  const Functional e11 = rank_one_functional(basis_vector(d, 0), basis_vector(d, 0));
  EXPECT_EQ(pair(e11, identity(3)), Complex(1.0));
  EXPECT_EQ(pair(e11, ComplexMatrix::Zero(3, 3)), Complex(0.0));
  EXPECT_THROW(pair(e11, identity(2)), ShapeError);

  Rng rng(24);
  const Functional eta(random_matrix(rng, 3, 3));
  const ComplexMatrix a = random_matrix(rng, 3, 3);
  const ComplexMatrix b = random_matrix(rng, 3, 3);
  const Complex alpha(0.3, -1.2);
  const Complex beta(-2.0, 0.7);
  EXPECT_LE(std::abs(pair(eta, alpha * a + beta * b) - (alpha * pair(eta, a) + beta * pair(eta, b))),
            1e-13);
}

TEST(FunctionalTest, TraceNorm) {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  s(0, 0) = 3.0;
  s(1, 1) = -4.0 * kI;
  EXPECT_NEAR(Functional(s).trace_norm(), 7.0, 1e-12);
  Rng rng(25);
  const ComplexVector x = random_vector(rng, 3);
  const ComplexVector y = random_vector(rng, 3);
  EXPECT_NEAR(rank_one_functional(x, y).trace_norm(), x.norm() * y.norm(), 1e-12);
}

TEST(WotSeminorm, Basics) {
  const HilbertDim d(2);
  EXPECT_EQ(wot_seminorm(basis_vector(d, 0), basis_vector(d, 0), identity(2)), 1.0);
  Rng rng(26);
  const ComplexVector x = random_vector(rng, 2);
  const ComplexVector y = random_vector(rng, 2);
  EXPECT_EQ(wot_seminorm(x, y, ComplexMatrix::Zero(2, 2)), 0.0);
  EXPECT_THROW(wot_seminorm(x, y, identity(3)), ShapeError);
}

TEST(WotSeminorm, CauchySchwarz) {
  Rng rng(27);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexVector x = random_vector(rng, 4);
    const ComplexVector y = random_vector(rng, 4);
    const ComplexMatrix t = random_matrix(rng, 4, 4);
    EXPECT_LE(wot_seminorm(x, y, t), x.norm() * y.norm() * op_norm(t) + 1e-10);
  }
}

TEST(FunctionalBasisTest, DimensionOne) {
  const FunctionalBasis b = functional_basis(HilbertDim(1));
  ASSERT_EQ(b.functionals.size(), 1u);
  ComplexMatrix t(1, 1);
  t(0, 0) = Complex(2.5, -1.0);
  EXPECT_EQ(pair(b.functionals[0], t), t(0, 0));
}

TEST(FunctionalBasisTest, DimensionTwoPairingTableIsPermutation) {
  const HilbertDim d(2);
  const FunctionalBasis b = functional_basis(d);
  ASSERT_EQ(b.functionals.size(), 4u);
  // Enumerate all 16 pairings eta_k(E_ij).
  std::vector<int> hits_per_unit(4, 0);
  for (const auto& eta : b.functionals) {
    int ones = 0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const Complex v = pair(eta, matrix_unit(d, i, j));
        if (v == Complex(1.0)) {
          ++ones;
          ++hits_per_unit[static_cast<std::size_t>(2 * i + j)];
        } else {
          EXPECT_EQ(v, Complex(0.0));
        }
      }
    EXPECT_EQ(ones, 1);
  }
  for (int h : hits_per_unit) EXPECT_EQ(h, 1);
}

TEST(FunctionalBasisTest, GramNonsingular) {
  const ComplexMatrix g = functional_basis(HilbertDim(3)).gram();
  EXPECT_GT(std::abs(g.determinant()), 1e-6);
}

TEST(FunctionalBasisTest, SeparationByReconstruction) {
  Rng rng(28);
  const FunctionalBasis b = functional_basis(HilbertDim(3));
  const ComplexMatrix a = random_matrix(rng, 3, 3);
  EXPECT_LE(max_abs(reconstruct_from_pairings(b, b.pairings(a)) - a), 1e-12);

  // A non-standard spanning family reconstructs too.
  FunctionalBasis mixed{HilbertDim(3), {}};
  for (int k = 0; k < 9; ++k) mixed.functionals.emplace_back(random_matrix(rng, 3, 3));
  EXPECT_LE(max_abs(reconstruct_from_pairings(mixed, mixed.pairings(a)) - a), 1e-10);

  // A family that does not span cannot reconstruct.
  FunctionalBasis thin = b;
  thin.functionals.back() = thin.functionals.front();
  EXPECT_THROW(reconstruct_from_pairings(thin, thin.pairings(a)), SingularityError);
  EXPECT_THROW(reconstruct_from_pairings(b, ComplexVector::Zero(4)), ShapeError);
}

TEST(FunctionalBasisTest, NormingBySampling) {
  Rng rng(29);
  const ComplexMatrix a = random_matrix(rng, 2, 2);
  const double norm = op_norm(a);
  double sup = 0.0;
  for (int k = 0; k < 2000; ++k) {
    Functional eta = rank_one_functional(random_vector(rng, 2), random_vector(rng, 2));
    const double tn = eta.trace_norm();
    sup = std::max(sup, std::abs(pair(eta, a)) / tn);
    // Mixed-rank samples as well.
    Functional mixed(random_matrix(rng, 2, 2));
    sup = std::max(sup, std::abs(pair(mixed, a)) / mixed.trace_norm());
  }
  EXPECT_LE(sup, norm + 1e-10);
  EXPECT_GE(sup, 0.95 * norm);
}

}  // namespace
}  // namespace semiflow
