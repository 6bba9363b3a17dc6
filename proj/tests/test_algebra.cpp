#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qudit/algebra.hpp"
#include "qudit/errors.hpp"

using namespace qudit;

namespace {

/// f_ABC = -2d i Tr([T_A, T_B] T_C) by brute force.
double brute_f(const Algebra& alg, int a, int b, int c) {
  const Matrix comm = linalg::commutator(alg.generator(a), alg.generator(b));
  return (Complex(0, -2.0 * alg.dim()) * (comm * alg.generator(c)).trace()).real();
}

}  // namespace

TEST(Algebra, GeneratorsAreScaledGellMannMatrices) {
  for (int d = 2; d <= 6; ++d) {
    const Algebra alg(d);
    const auto lambdas = oracle::gell_mann(d);
    ASSERT_EQ(alg.size(), d * d - 1);
    for (int a = 0; a < alg.size(); ++a)
      EXPECT_LT((alg.generator(a) - lambdas[a] / (2.0 * std::sqrt(d))).norm(), 1e-14) << "d=" << d << " a=" << a;
  }
}

TEST(Algebra, QubitExamples) {
  const Algebra alg(2);
  Matrix t1 = Matrix::Zero(2, 2);
  t1(0, 0) = 1.0 / (2 * std::sqrt(2.0));
  t1(1, 1) = -t1(0, 0);
  EXPECT_LT((alg.generator(0) - t1).norm(), 1e-15);
  for (int a = 0; a < 3; ++a) EXPECT_NEAR((alg.generator(a) * alg.generator(a)).trace().real(), 0.25, 1e-15);
  EXPECT_NEAR(std::abs(alg.f(1, 2, 0)), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(std::abs(brute_f(alg, 1, 2, 0)), 1 / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(alg.fundamental_weight(0)(0), 1 / (2 * std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(alg.fundamental_weight(0)(0) + alg.fundamental_weight(1)(0), 0.0, 1e-15);
}

TEST(Algebra, TraceNormalisationAndStructureConstants) {
  for (int d = 2; d <= 6; ++d) {
    const Algebra alg(d);
    const int n = alg.size();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const Complex tr = (alg.generator(a) * alg.generator(b)).trace();
        EXPECT_NEAR(std::abs(tr - (a == b ? 1.0 / (2 * d) : 0.0)), 0.0, 1e-12);
      }
    if (d > 4) continue;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Matrix rebuilt = Matrix::Zero(d, d);
        for (int c = 0; c < n; ++c) {
          EXPECT_NEAR(alg.f(a, b, c), brute_f(alg, a, b, c), 1e-12);
          rebuilt += Complex(0, alg.f(a, b, c)) * alg.generator(c);
        }
        EXPECT_LT((linalg::commutator(alg.generator(a), alg.generator(b)) - rebuilt).norm(), 1e-12);
      }
  }
}

TEST(Algebra, AdjointNormalisationAndJacobi) {
  for (int d = 2; d <= 4; ++d) {
    const Algebra alg(d);
    const int n = alg.size();
    std::vector<Matrix> m;
    for (int a = 0; a < n; ++a) m.push_back(alg.adjoint_generator(a));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        EXPECT_NEAR(std::abs((m[a] * m[b]).trace() - (a == b ? 1.0 : 0.0)), 0.0, 1e-10);
        Matrix rhs = Matrix::Zero(n, n);
        for (int c = 0; c < n; ++c) rhs += Complex(0, alg.f(a, b, c)) * m[c];
        EXPECT_LT((linalg::commutator(m[a], m[b]) - rhs).norm(), 1e-10);
      }
  }
}

TEST(Algebra, FundamentalWeights) {
  for (int d = 2; d <= 6; ++d) {
    const Algebra alg(d);
    RealVector sum = RealVector::Zero(d - 1);
    for (int i = 0; i < d; ++i) {
      sum += alg.fundamental_weight(i);
      for (int j = 0; j < d; ++j) {
        const double expect = i == j ? (d - 1.0) / (2.0 * d * d) : -1.0 / (2.0 * d * d);
        EXPECT_NEAR(alg.fundamental_weight(i).dot(alg.fundamental_weight(j)), expect, 1e-14);
      }
      EXPECT_LT((alg.magnetic_weight(i) - 2.0 * d * alg.fundamental_weight(i)).norm(), 1e-14);
    }
    EXPECT_LT(sum.norm(), 1e-14);
  }
  const Algebra alg3(3);
  EXPECT_NEAR(alg3.fundamental_weight(2)(0), 0.0, 1e-15);
  EXPECT_NEAR(alg3.fundamental_weight(2)(1), -1.0 / 3, 1e-15);
  EXPECT_NEAR(alg3.fundamental_weight(2).squaredNorm(), 1.0 / 9, 1e-15);
  EXPECT_THROW(alg3.fundamental_weight(3), IndexOutOfRange);
}

TEST(Algebra, RootsAreWeightDifferencesWithPositiveLastComponent) {
  for (int d = 2; d <= 6; ++d) {
    const Algebra alg(d);
    EXPECT_EQ(static_cast<int>(alg.roots().size()), d * (d - 1) / 2);
    for (const Root& r : alg.roots()) {
      EXPECT_LT((r.vector - (alg.fundamental_weight(r.i) - alg.fundamental_weight(r.k))).norm(), 1e-14);
      int last = d - 2;
      while (last >= 0 && std::abs(r.vector(last)) < 1e-14) --last;
      ASSERT_GE(last, 0);
      EXPECT_GT(r.vector(last), 0.0);
    }
  }
}

TEST(Algebra, AdjointRootEquationAndCubicIdentity) {
  for (int d = 2; d <= 6; ++d) {
    const Algebra alg(d);
    for (int r = 0; r < static_cast<int>(alg.roots().size()); ++r) {
      const Vector e = alg.ladder_components(r);
      for (int q = 0; q < d - 1; ++q)
        EXPECT_LT((alg.adjoint_generator(q) * e - alg.root(r).vector(q) * e).norm(), 1e-10);
      for (int j = 0; j < d; ++j) {
        const double p = alg.magnetic_weight(j).dot(alg.root(r).vector);
        EXPECT_NEAR(p, std::round(p), 1e-12);
        EXPECT_LE(std::abs(std::round(p)), 1.0);
      }
    }
    for (int j = 0; j < d; ++j) {
      const Matrix m = alg.adjoint_cartan(alg.magnetic_weight(j));
      EXPECT_LT((m * m * m - m).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Algebra, CenterElements) {
  const Algebra alg3(3);
  const CenterMatch m = center_element(alg3, alg3.magnetic_weight(0));
  EXPECT_EQ(m.z, 2);
  EXPECT_LT(m.residual, 1e-10);
  EXPECT_EQ(signed_center_label(m.z, 3), -1);
  for (int d = 2; d <= 5; ++d) {
    const Algebra alg(d);
    const CenterMatch zero = center_element(alg, RealVector::Zero(d - 1));
    EXPECT_EQ(zero.z, 0);
    EXPECT_EQ(zero.residual, 0.0);
  }
  const Algebra alg2(2);
  const CenterMatch adj = center_element(alg2, alg2.magnetic_weight(0) - alg2.magnetic_weight(1));
  EXPECT_EQ(adj.z, 0);
  EXPECT_LT(adj.residual, 1e-10);
  // Oracle: exponentiate directly.
  const Matrix direct = oracle::expm(kI * kTwoPi * alg3.cartan_combination(alg3.magnetic_weight(0)));
  EXPECT_LT((direct - std::exp(Complex(0, -kTwoPi / 3)) * Matrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(Algebra, Su2Triplets) {
  for (int d = 2; d <= 5; ++d) {
    const Algebra alg(d);
    for (int r = 0; r < static_cast<int>(alg.roots().size()); ++r) {
      const auto t = su2_triplet(alg, r);
      for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(std::abs(t[k].trace()), 0.0, 1e-14);
        const Matrix lhs = linalg::commutator(t[k], t[(k + 1) % 3]);
        EXPECT_LT((lhs - kI * t[(k + 2) % 3]).norm(), 1e-10);
      }
    }
  }
  const Algebra alg3(3);
  for (const Matrix& m : su2_triplet(alg3, alg3.root_index(0, 1))) {
    EXPECT_EQ(m.row(2).norm(), 0.0);
    EXPECT_EQ(m.col(2).norm(), 0.0);
  }
  const Algebra alg2(2);
  const auto q = su2_triplet(alg2, 0);
  const Matrix sz = (Matrix(2, 2) << 0.5, 0, 0, -0.5).finished();
  EXPECT_LT((q[0] - sz).norm(), 1e-14);
}

TEST(Algebra, DimensionBoundsAndDeterminism) {
  EXPECT_THROW(Algebra(1), InvalidDimension);
  EXPECT_THROW(Algebra(33), InvalidDimension);
  const Algebra a(4);
  const Algebra b(4);
  for (int i = 0; i < a.size(); ++i) EXPECT_EQ((a.generator(i) - b.generator(i)).norm(), 0.0);
  EXPECT_EQ(a.structure_nonzeros(), b.structure_nonzeros());
}

TEST(Algebra, CoefficientsRoundTripAndMetric) {
  std::mt19937_64 rng(5);
  const Algebra alg(4);
  const Matrix x = linalg::random_hermitian_traceless(4, rng);
  const Matrix y = linalg::random_hermitian_traceless(4, rng);
  EXPECT_LT((alg.from_coefficients(alg.coefficients(x)) - x).norm(), 1e-13);
  // Oracle: Tr(Ad X Ad Y) from explicit adjoint matrices.
  Matrix adx = Matrix::Zero(alg.size(), alg.size());
  Matrix ady = adx;
  const RealVector cx = alg.coefficients(x);
  const RealVector cy = alg.coefficients(y);
  for (int a = 0; a < alg.size(); ++a) {
    adx += cx(a) * alg.adjoint_generator(a);
    ady += cy(a) * alg.adjoint_generator(a);
  }
  EXPECT_NEAR(alg.inner(x, y), (adx * ady).trace().real(), 1e-12);
}
