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

using testing::brute_force_choi;
using testing::max_abs;
using testing::sigma_x;
using testing::sigma_y;
using testing::sigma_z;

Superoperator from_kraus_sum(const KrausSet& k, int d) {
  return superop_from_map(
      [&k](const ComplexMatrix& a) {
        ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
        for (const auto& v : k.ops) out += v.adjoint() * a * v;
        return out;
      },
      HilbertDim(d));
}

TEST(Sandwich, Basics) {
  const Superoperator id = superop_from_sandwich(identity(3), identity(3));
  EXPECT_EQ(id.matrix(), Superoperator::identity(HilbertDim(3)).matrix());

  Rng rng(31);
  const ComplexMatrix u = random_unitary(rng, 3);
  EXPECT_LE(max_abs(superop_from_sandwich(u, u.adjoint())(identity(3)) - identity(3)), 1e-14);

  const ComplexMatrix v = random_matrix(rng, 2, 2);
  const ComplexMatrix a = random_matrix(rng, 2, 2);
  EXPECT_LE(max_abs(superop_from_sandwich(v, v.adjoint())(a) - v * a * v.adjoint()), 1e-13);
  EXPECT_THROW(superop_from_sandwich(identity(2), identity(3)), ShapeError);
}

TEST(Apply, IdentityZeroLinearity) {
  Rng rng(32);
  const HilbertDim d(3);
  const ComplexMatrix a = random_matrix(rng, 3, 3);
  const ComplexMatrix b = random_matrix(rng, 3, 3);
  EXPECT_EQ(semiflow::apply(Superoperator::identity(d), a), a);
  EXPECT_EQ(max_abs(semiflow::apply(Superoperator::zero(d), a)), 0.0);

  const Superoperator s(d, random_matrix(rng, 9, 9));
  const Complex alpha(1.5, 0.5);
  const Complex beta(-0.25, 2.0);
  EXPECT_LE(max_abs(semiflow::apply(s, alpha * a + beta * b) - (alpha * semiflow::apply(s, a) + beta * semiflow::apply(s, b))),
            1e-13 * std::max(1.0, max_abs(semiflow::apply(s, a))));
  EXPECT_THROW(semiflow::apply(s, identity(2)), ShapeError);
  EXPECT_THROW(Superoperator(d, identity(8)), ShapeError);
}

TEST(SuperoperatorTest, KrausAndMatrixAgree) {
  Rng rng(33);
  const KrausSet k({random_matrix(rng, 3, 3), random_matrix(rng, 3, 3)});
  const Superoperator s = kraus_map(k, HilbertDim(3));
  const ComplexMatrix a = random_matrix(rng, 3, 3);
  ComplexMatrix want = ComplexMatrix::Zero(3, 3);
  for (const auto& v : k.ops) want += v.adjoint() * a * v;
  EXPECT_LE(max_abs(s(a) - want), 1e-10);
  EXPECT_LE(max_abs(s.compose(s)(a) - s(s(a))), 1e-10 * max_abs(s(s(a))));
}

TEST(Choi, IdentityMapSpectrum) {
  const ComplexMatrix c = choi(Superoperator::identity(HilbertDim(2)));
  const auto ev = hermitian_eigenvalues(c);
  EXPECT_NEAR(ev[0], 0.0, 1e-14);
  EXPECT_NEAR(ev[1], 0.0, 1e-14);
  EXPECT_NEAR(ev[2], 0.0, 1e-14);
  EXPECT_NEAR(ev[3], 2.0, 1e-14);
}

TEST(Choi, ZeroAndBruteForce) {
  EXPECT_EQ(max_abs(choi(Superoperator::zero(HilbertDim(3)))), 0.0);
  Rng rng(34);
  const Superoperator s(HilbertDim(3), random_matrix(rng, 9, 9));
  EXPECT_LE(max_abs(choi(s) - brute_force_choi([&s](const ComplexMatrix& a) { return s(a); }, 3)),
            0.0);
}

TEST(Choi, SandwichIsRankOne) {
  Rng rng(35);
  const ComplexMatrix v = random_matrix(rng, 3, 3);
  const auto ev = hermitian_eigenvalues(choi(superop_from_sandwich(v, v.adjoint())), 1e-10);
  EXPECT_LE(std::abs(ev[ev.size() - 2]), 1e-10);
  EXPECT_GT(ev.back(), 0.1);
}

TEST(Choi, Linearity) {
  Rng rng(36);
  const HilbertDim d(2);
  const Superoperator s1(d, random_matrix(rng, 4, 4));
  const Superoperator s2(d, random_matrix(rng, 4, 4));
  const Complex alpha(0.7, -0.1);
  const Complex beta(-1.1, 0.4);
  EXPECT_LE(max_abs(choi(alpha * s1 + beta * s2) - (alpha * choi(s1) + beta * choi(s2))), 1e-12);
}

TEST(KrausFromChoi, IdentityMap) {
  const KrausSet k = kraus_from_choi(choi(Superoperator::identity(HilbertDim(2))));
  ASSERT_EQ(k.size(), 1u);
  const Complex phase = k.ops[0](0, 0);
  EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
  EXPECT_LE(max_abs(k.ops[0] / phase - identity(2)), 1e-10);
}

TEST(KrausFromChoi, UnitaryConjugation) {
  Rng rng(37);
  const ComplexMatrix v = random_unitary(rng, 3);
  // A -> V A V^*: in the sum V_j^* A V_j convention the Kraus operator is
  // V^*, so entrywise moduli match V transposed.
  const KrausSet k = kraus_from_choi(choi(superop_from_sandwich(v, v.adjoint())));
  ASSERT_EQ(k.size(), 1u);
  const ComplexMatrix want = v.adjoint();
  EXPECT_LE(max_abs(k.ops[0].cwiseAbs() - want.cwiseAbs()), 1e-10);
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  want.cwiseAbs().maxCoeff(&r, &c);
  const Complex phase = k.ops[0](r, c) / want(r, c);
  EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
  EXPECT_LE(max_abs(k.ops[0] - phase * want), 1e-10);
}

TEST(KrausFromChoi, QubitDephasing) {
  const Superoperator deph = superop_from_map(
      [](const ComplexMatrix& a) -> ComplexMatrix { return 0.5 * (a + sigma_z() * a * sigma_z()); }, HilbertDim(2));
  const KrausSet k = kraus_from_choi(choi(deph));
  EXPECT_EQ(k.size(), 2u);
  EXPECT_LE(op_norm(from_kraus_sum(k, 2).matrix() - deph.matrix()), 1e-10);
}

TEST(KrausFromChoi, RoundTripOnRandomCpMaps) {
  Rng rng(38);
  for (int d = 2; d <= 4; ++d) {
    const KrausSet k({random_matrix(rng, d, d), random_matrix(rng, d, d), random_matrix(rng, d, d)});
    const Superoperator s = kraus_map(k, HilbertDim(d));
    const KrausSet back = kraus_from_choi(choi(s));
    EXPECT_LE(back.size(), 3u);
    EXPECT_LE(op_norm(from_kraus_sum(back, d).matrix() - s.matrix()), 1e-9);
  }
}

TEST(KrausFromChoi, RejectsNonPositive) {
  const Superoperator transpose =
      superop_from_map([](const ComplexMatrix& a) -> ComplexMatrix { return a.transpose(); },
                       HilbertDim(2));
  try {
    kraus_from_choi(choi(transpose));
    FAIL() << "expected NotCompletelyPositiveError";
  } catch (const NotCompletelyPositiveError& e) {
    EXPECT_NEAR(e.min_eigenvalue(), -1.0, 1e-12);
  }
  EXPECT_THROW(kraus_from_choi(identity(3)), ShapeError);
}

TEST(CompletePositivity, Examples) {
  const CpReport id = is_completely_positive(Superoperator::identity(HilbertDim(2)), 1e-12);
  EXPECT_TRUE(id.completely_positive);

  const Superoperator transpose =
      superop_from_map([](const ComplexMatrix& a) -> ComplexMatrix { return a.transpose(); },
                       HilbertDim(2));
  const CpReport tr = is_completely_positive(transpose, 1e-12);
  EXPECT_FALSE(tr.completely_positive);
  EXPECT_NEAR(tr.min_eigenvalue, -1.0, 1e-12);

  Rng rng(39);
  const ComplexMatrix v = random_matrix(rng, 3, 3);
  EXPECT_TRUE(is_completely_positive(superop_from_sandwich(v, v.adjoint()), 1e-10).completely_positive);
}

TEST(CompletePositivity, SparseSupportMatchesDense) {
  // A map whose Choi matrix is supported on a few rows: A -> a_00 E_11.
  const HilbertDim d(3);
  const LinearMap m = [](const ComplexMatrix& a) {
    ComplexMatrix out = ComplexMatrix::Zero(3, 3);
    out(1, 1) = a(0, 0);
    return out;
  };
  const CpReport sparse = is_completely_positive(m, d, 1e-12);
  const auto dense = hermitian_eigenvalues(brute_force_choi(m, 3));
  EXPECT_NEAR(sparse.min_eigenvalue, dense.front(), 1e-14);
  EXPECT_TRUE(sparse.completely_positive);
}

TEST(Unitality, Examples) {
  const UnitalReport id = is_unital(Superoperator::identity(HilbertDim(3)), 1e-12);
  EXPECT_TRUE(id.unital);
  EXPECT_EQ(id.residual, 0.0);

  // Truncated shift: V e_k = e_{k+1}, top cell dropped; V V^* != I.
  ComplexMatrix v = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k + 1 < 4; ++k) v(k + 1, k) = 1.0;
  const UnitalReport trunc = is_unital(superop_from_sandwich(v, v.adjoint()), 1e-9);
  EXPECT_FALSE(trunc.unital);
  EXPECT_NEAR(trunc.residual, 1.0, 1e-14);
}

TEST(Lindblad, ZeroGenerator) {
  const LindbladForm lf{KrausSet(), ComplexMatrix::Zero(2, 2)};
  EXPECT_EQ(max_abs(lindblad_generator(lf).matrix()), 0.0);
}

TEST(Lindblad, Dephasing) {
  const Superoperator l = testing::dephasing_generator();
  EXPECT_LE(max_abs(l(sigma_x()) + 2.0 * sigma_x()), 1e-15);
  EXPECT_LE(max_abs(l(sigma_y()) + 2.0 * sigma_y()), 1e-15);
  EXPECT_LE(max_abs(l(sigma_z())), 1e-15);
  EXPECT_LE(max_abs(l(identity(2))), 1e-15);
}

TEST(Lindblad, MatchesDirectFormulaOnMatrixUnits) {
  Rng rng(40);
  const LindbladForm lf{KrausSet({random_matrix(rng, 3, 3), random_matrix(rng, 3, 3)}),
                        random_matrix(rng, 3, 3)};
  const Superoperator l = lindblad_generator(lf);
  const HilbertDim d(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const ComplexMatrix a = matrix_unit(d, i, j);
      ComplexMatrix want = lf.g.adjoint() * a + a * lf.g;
      for (const auto& v : lf.kraus.ops) want += v.adjoint() * a * v;
      EXPECT_LE(max_abs(l(a) - want), 1e-12);
    }
  EXPECT_THROW(lindblad_generator({KrausSet({identity(2)}), identity(3)}), ShapeError);
}

TEST(MarkovianCompletion, Examples) {
  const LindbladForm deph = markovian_completion(KrausSet({sigma_z()}), ComplexMatrix::Zero(2, 2));
  EXPECT_LE(max_abs(deph.g + 0.5 * identity(2)), 1e-15);

  Rng rng(41);
  const ComplexMatrix h = random_hermitian(rng, 3);
  const LindbladForm ham = markovian_completion(KrausSet(), h);
  const Superoperator l = lindblad_generator(ham);
  EXPECT_LE(op_norm(l(identity(3))), 1e-12);
  const ComplexMatrix a = random_matrix(rng, 3, 3);
  EXPECT_LE(max_abs(l(a) - kI * (h * a - a * h)), 1e-12);

  const KrausSet k({random_matrix(rng, 3, 3), random_matrix(rng, 3, 3)});
  EXPECT_LE(op_norm(lindblad_generator(markovian_completion(k, ComplexMatrix::Zero(3, 3)))(
                identity(3))),
            1e-12);

  ComplexMatrix bad = h;
  bad(0, 1) += 1e-3;
  EXPECT_THROW(markovian_completion(k, bad), DomainError);
}

TEST(MarkovianCompletion, GeneratesUnitalCpSemigroups) {
  Rng rng(42);
  for (int d = 2; d <= 3; ++d) {
    const Superoperator l = lindblad_generator(testing::random_markovian_form(rng, d, 2));
    for (double t : {0.01, 0.1, 1.0}) {
      const Superoperator tt(HilbertDim(d), expm(t * l.matrix()));
      EXPECT_GE(is_completely_positive(tt, 1e-9).min_eigenvalue, -1e-9) << "t=" << t;
    }
    for (double t : {0.5, 2.0, 10.0}) {
      const Superoperator tt(HilbertDim(d), expm(t * l.matrix()));
      EXPECT_LE(is_unital(tt, 1e-9).residual, 1e-9) << "t=" << t;
    }
  }
}

TEST(Stinespring, Examples) {
  const StinespringPair one = stinespring_from_kraus(KrausSet({identity(2)}));
  EXPECT_EQ(one.v, identity(2));
  Rng rng(43);
  const ComplexMatrix a = random_matrix(rng, 2, 2);
  EXPECT_LE(max_abs(one.compress(a) - a), 0.0);

  const StinespringPair xz = stinespring_from_kraus(KrausSet({sigma_x(), sigma_z()}));
  const ComplexMatrix e11 = matrix_unit(HilbertDim(2), 0, 0);
  EXPECT_LE(max_abs(xz.compress(e11) - (sigma_x() * e11 * sigma_x() + sigma_z() * e11 * sigma_z())),
            1e-15);

  const KrausSet k({random_matrix(rng, 2, 2), random_matrix(rng, 2, 2), random_matrix(rng, 2, 2)});
  const StinespringPair dil = stinespring_from_kraus(k);
  EXPECT_EQ(dil.v.rows(), 6);
  EXPECT_EQ(dil.copies, 3);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const ComplexMatrix e = matrix_unit(HilbertDim(2), i, j);
      ComplexMatrix want = ComplexMatrix::Zero(2, 2);
      for (const auto& v : k.ops) want += v.adjoint() * e * v;
      EXPECT_LE(max_abs(dil.compress(e) - want), 1e-12);
    }
  EXPECT_THROW(stinespring_from_kraus(KrausSet()), DomainError);
}

TEST(GksForm, Examples) {
  const VerificationReport zero = gks_form_check({KrausSet(), ComplexMatrix::Zero(2, 2)}, 1e-12);
  EXPECT_TRUE(zero.pass());
  EXPECT_EQ(zero.max_residual(), 0.0);

  const VerificationReport deph = gks_form_check(testing::dephasing_form(), 1e-12);
  EXPECT_TRUE(deph.pass());
  EXPECT_EQ(deph.residuals.size(), 3u);

  Rng rng(44);
  const LindbladForm lf{KrausSet({random_matrix(rng, 3, 3), random_matrix(rng, 3, 3)}),
                        random_matrix(rng, 3, 3)};
  EXPECT_TRUE(gks_form_check(lf, 1e-11).pass());
}

TEST(GksForm, DetectsWrongAdjointConvention) {
  // A generator assembled with G and G^* swapped differs from the form check
  // unless G is Hermitian; make sure a non-Hermitian G is actually exercised.
  Rng rng(45);
  const LindbladForm lf{KrausSet({random_matrix(rng, 2, 2)}), random_matrix(rng, 2, 2)};
  const Superoperator swapped = kraus_map(lf.kraus, HilbertDim(2)) +
                                superop_from_sandwich(lf.g, identity(2)) +
                                superop_from_sandwich(identity(2), lf.g.adjoint());
  EXPECT_GT(op_norm(swapped.matrix() - lindblad_generator(lf).matrix()), 1e-3);
}

}  // namespace
}  // namespace semiflow
