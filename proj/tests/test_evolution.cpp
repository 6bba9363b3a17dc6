#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qudit/errors.hpp"
#include "qudit/evolution.hpp"
#include "qudit/phase.hpp"

using namespace qudit;

namespace {

Matrix center(int z, int d) { return std::exp(Complex(0, kTwoPi * z / d)) * Matrix::Identity(d, d); }

/// Central difference of S(t), the oracle for analytic derivatives.
Matrix numeric_derivative(const UnitaryCurve& c, double t, double h = 1e-5) {
  return (c.at(t + h).value - c.at(t - h).value) / (2 * h);
}

CurvePtr random_curve(const Algebra& alg, std::mt19937_64& rng) {
  RandomPathOptions o;
  o.amplitude = 0.8;
  return random_smooth_path(alg, rng, 1.0, o);
}

}  // namespace

TEST(Evolution, CartanLoopEndpoints) {
  const Algebra alg3(3);
  const EvolutionPath p = cartan_loop(alg3, alg3.magnetic_weight(0), 1.0);
  EXPECT_LT((p.curve(0)->at(1.0).value - center(-1, 3)).norm(), 1e-12);
  EXPECT_EQ(p.closure_class(0), 2);
  const EvolutionPath zero = cartan_loop(alg3, RealVector::Zero(2), 1.0);
  for (double t : {0.0, 0.3, 1.0}) EXPECT_LT((zero.curve(0)->at(t).value - Matrix::Identity(3, 3)).norm(), 1e-15);
  const Algebra alg2(2);
  const EvolutionPath q = cartan_loop(alg2, alg2.magnetic_weight(0), 2.0);
  EXPECT_LT((q.curve(0)->at(2.0).value + Matrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_THROW(cartan_loop(alg3, 0.5 * alg3.magnetic_weight(0), 1.0), NonCyclicPath);
}

TEST(Evolution, EveryFundamentalLoopClosesOnTheCenter) {
  for (int d = 2; d <= 5; ++d) {
    const Algebra alg(d);
    for (int i = 0; i < d; ++i)
      for (bool anti : {false, true}) {
        const EvolutionPath p = fundamental_loop(alg, i, anti, 1.0);
        const int z = anti ? 1 : d - 1;
        EXPECT_EQ(*p.closure_class(0), z % d);
        EXPECT_LT((p.curve(0)->at(1.0).value - center(z, d)).norm(), 1e-10);
      }
  }
}

TEST(Evolution, DeclaredClosureIsValidated) {
  const Algebra alg(3);
  const CurvePtr c = cartan_path(alg, alg.magnetic_weight(0), 1.0, cosine_ramp(1.0));
  EXPECT_NO_THROW(EvolutionPath::single(c, Side::first, 2));
  EXPECT_THROW(EvolutionPath::single(c, Side::first, 1), NonCyclicPath);
  EXPECT_THROW(EvolutionPath(3, nullptr, nullptr), DomainError);
}

TEST(Evolution, CosetLoops) {
  const Algebra alg2(2);
  const EvolutionPath flat = coset_loop(alg2, 0, 0.0, 1.0);
  EXPECT_EQ(*flat.solid_angle, 0.0);
  for (double t : {0.0, 0.2, 0.5, 0.9}) EXPECT_LT((flat.curve(0)->at(t).value - Matrix::Identity(2, 2)).norm(), 1e-14);
  EXPECT_NEAR(*coset_loop(alg2, 0, kPi / 2, 1.0).solid_angle, kTwoPi, 1e-14);

  // Qubit chart against the explicit parametrisation.
  for (double theta : {0.3, 1.2, 2.9})
    for (double phi : {0.0, 1.0, 4.0}) {
      Matrix u(2, 2);
      u << std::cos(theta / 2), std::sin(theta / 2) * std::exp(Complex(0, phi)),
          -std::sin(theta / 2) * std::exp(Complex(0, -phi)), std::cos(theta / 2);
      EXPECT_LT((coset_chart(alg2, 0, theta, phi) - u).norm(), 1e-14);
    }

  const Algebra alg3(3);
  const EvolutionPath loop = coset_loop(alg3, alg3.root_index(0, 2), 1.0, 1.0);
  EXPECT_LT((loop.curve(0)->at(1.0).value - Matrix::Identity(3, 3)).norm(), 1e-12);
  EXPECT_EQ(loop.closure_class(0), 0);
  const auto info = *loop.coset_info;
  const double mid = 0.5 * (info.circle_start + info.circle_end);
  EXPECT_LT((loop.curve(0)->at(mid).value - coset_chart(alg3, alg3.root_index(0, 2), 1.0, kPi)).norm(), 1e-12);
  EXPECT_THROW(coset_loop(alg3, 0, 4.0, 1.0), DomainError);
}

TEST(Evolution, AnalyticDerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(21);
  const Algebra alg(3);
  const CurvePtr c = random_curve(alg, rng);
  for (double t : {0.1, 0.45, 0.8}) EXPECT_LT((c->at(t).derivative - numeric_derivative(*c, t)).norm(), 1e-7);
  const EvolutionPath loop = coset_loop(alg, 1, 2.0, 1.0);
  for (double t : {0.1, 0.5, 0.9})
    EXPECT_LT((loop.curve(0)->at(t).derivative - numeric_derivative(*loop.curve(0), t)).norm(), 1e-6);
}

TEST(Evolution, Connection) {
  const Algebra alg(3);
  const EvolutionPath still = EvolutionPath::single(identity_curve(3, 1.0), Side::first);
  EXPECT_EQ(connection(still, 0.5).norm(), 0.0);
  EXPECT_THROW(connection(still, 1.5), DomainError);

  // exp(i t w beta.T): -i dS/dt S^{-1} = w beta.T.
  const double omega = 0.8;
  const RealVector beta = alg.magnetic_weight(1);
  const CurvePtr c = cartan_path(alg, beta, 1.0, scaled(linear_profile(1.0), omega / kTwoPi));
  const EvolutionPath p = EvolutionPath::single(c, Side::first);
  const Matrix expect = omega * alg.cartan_combination(beta);
  for (double t : {0.0, 0.3, 1.0}) EXPECT_LT((connection(p, t) - expect).norm(), 1e-12);
  const Matrix fd = Complex(0, -1) * numeric_derivative(*c, 0.5) * c->at(0.5).value.adjoint();
  EXPECT_LT((fd - expect).norm(), 1e-8);
}

TEST(Evolution, MovingFrameProperties) {
  std::mt19937_64 rng(22);
  for (int d = 2; d <= 4; ++d) {
    const Algebra alg(d);
    for (int trial = 0; trial < 20; ++trial) {
      const EvolutionPath p = EvolutionPath::single(random_curve(alg, rng), Side::first);
      const double t = 0.05 + 0.9 * trial / 19.0;
      const MovingFrame f = moving_frame(p, alg, t);
      const int n = alg.size();
      for (int a = 0; a < n; a += (d > 3 ? 3 : 1))
        for (int b = 0; b < n; ++b) {
          ASSERT_NEAR(alg.inner(f.n[a], f.n[b]), a == b ? 1.0 : 0.0, 1e-9);
          Matrix rhs = Matrix::Zero(d, d);
          for (const StructureEntry& e : alg.f_row(a))
            if (e.b == b) rhs += Complex(0, e.value) * f.n[e.c];
          ASSERT_LT((linalg::commutator(f.n[a], f.n[b]) - rhs).norm(), 1e-8);
        }
      // A = -C_A n_A and covariant constancy D n_A = dn_A/dt - i [A, n_A] = 0.
      const Matrix a_conn = connection(p, t);
      Matrix rebuilt = Matrix::Zero(d, d);
      for (int a = 0; a < n; ++a) rebuilt -= f.c(a) * f.n[a];
      ASSERT_LT((a_conn - rebuilt).norm(), 1e-6);
      const double h = 1e-5;
      const MovingFrame fp = moving_frame(p, alg, t + h);
      const MovingFrame fm = moving_frame(p, alg, t - h);
      for (int a = 0; a < n; a += 2) {
        const Matrix dn = (fp.n[a] - fm.n[a]) / (2 * h);
        ASSERT_LT((dn - kI * linalg::commutator(a_conn, f.n[a])).norm(), 1e-7);
      }
    }
  }
}

TEST(Evolution, CartanLoopFrameCoefficients) {
  const Algebra alg(3);
  const double omega = 1.7;
  const RealVector beta = alg.magnetic_weight(0);
  const EvolutionPath p = EvolutionPath::single(cartan_path(alg, beta, 1.0, scaled(linear_profile(1.0), omega / kTwoPi)), Side::first);
  const RealVector c = frame_coefficients(p, alg, 0.4);
  const MovingFrame f = moving_frame(p, alg, 0.4);
  Matrix rebuilt = Matrix::Zero(3, 3);
  for (int a = 0; a < alg.size(); ++a) rebuilt -= c(a) * f.n[a];
  EXPECT_LT((rebuilt - omega * alg.cartan_combination(beta)).norm(), 1e-9);
  const EvolutionPath still = EvolutionPath::single(identity_curve(3, 1.0), Side::first);
  EXPECT_EQ(frame_coefficients(still, alg, 0.2).norm(), 0.0);
}

TEST(Evolution, SplitOfPureCartanLoop) {
  const Algebra alg(3);
  const RealVector beta = alg.magnetic_weight(1);
  const EvolutionPath p = cartan_loop(alg, beta, 1.0);
  const CosetCartanSplit s = split_coset_cartan(*p.curve(0), alg, 257);
  const Profile ramp = cosine_ramp(1.0);
  for (std::size_t k = 0; k < s.times.size(); k += 16) {
    EXPECT_LT((s.u[k] - Matrix::Identity(3, 3)).norm(), 1e-12);
    EXPECT_LT((s.h.col(k) - ramp.value(s.times[k]) * kTwoPi * beta).norm(), 1e-9);
  }
  EXPECT_LT((s.target_weight - beta).norm(), 1e-9);
  EXPECT_EQ(s.h.col(0).norm(), 0.0);
}

TEST(Evolution, SplitRoundTrip) {
  // S(t) = U(t) V(t) with U in the coset chart (positive diagonal) and V diagonal.
  const Algebra alg(3);
  const int root = alg.root_index(0, 2);
  const auto t = su2_triplet(alg, root);
  const RealVector weight = alg.magnetic_weight(0) - 2 * alg.magnetic_weight(2);
  const Profile polar{[](double s) { return 1.1 * std::sin(kPi * s); }, [](double s) { return 1.1 * kPi * std::cos(kPi * s); }};
  const Profile azimuth = scaled(linear_profile(1.0), 3.0);
  const Profile back{[](double s) { return -3.0 * s; }, [](double) { return -3.0; }};
  const auto curve = std::make_shared<ProductCurve>(
      3, 1.0,
      std::vector<ExpFactor>{ExpFactor(t[0], azimuth), ExpFactor(t[2], polar), ExpFactor(t[0], back),
                             ExpFactor(kTwoPi * alg.cartan_combination(weight), cosine_ramp(1.0))});
  const CosetCartanSplit s = split_coset_cartan(*curve, alg, 513);
  const Profile ramp = cosine_ramp(1.0);
  for (std::size_t k = 0; k < s.times.size(); k += 8) {
    const double tk = s.times[k];
    const Matrix u = coset_chart(alg, root, polar.value(tk), 3.0 * tk);
    ASSERT_LT((s.u[k] - u).norm(), 1e-7);
    ASSERT_LT((s.h.col(k) - ramp.value(tk) * kTwoPi * weight).norm(), 1e-7);
    const Matrix v = linalg::expi_hermitian(alg.cartan_combination(s.h.col(k)));
    ASSERT_LT((s.u[k] * v - s.s[k]).norm(), 1e-8);
  }
  EXPECT_LT(s.closure_residual(), 1e-8);
  EXPECT_LT((s.target_weight - weight).norm(), 1e-7);
}

TEST(Evolution, SplitRepresentativesShareOneDiagonalPhase) {
  std::mt19937_64 rng(23);
  const Algebra alg(4);
  const EvolutionPath p = EvolutionPath::single(random_curve(alg, rng), Side::first);
  const CosetCartanSplit s = split_coset_cartan(*p.curve(0), alg, 129);
  for (const Matrix& u : s.u) {
    const Complex common = u(0, 0) / std::abs(u(0, 0));
    for (int j = 0; j < 4; ++j) {
      const Complex rotated = u(j, j) * std::conj(common);
      EXPECT_NEAR(rotated.imag(), 0.0, 1e-12);
      EXPECT_GT(rotated.real(), 0.0);
    }
  }
  // A diagonal S has U = I.
  RealVector h(3);
  h << 0.4, -1.0, 2.0;
  const Matrix diag = linalg::expi_hermitian(alg.cartan_combination(h));
  std::vector<Matrix> samples(5, diag);
  const CosetCartanSplit d = split_coset_cartan(samples, {0, 0.25, 0.5, 0.75, 1.0}, alg);
  EXPECT_LT((d.u[2] - Matrix::Identity(4, 4)).norm(), 1e-12);
}

TEST(Evolution, SplitErrors) {
  const Algebra alg(2);
  std::mt19937_64 rng(24);
  std::vector<Matrix> jumps;
  std::vector<double> times;
  for (int k = 0; k < 6; ++k) {
    jumps.push_back(linalg::random_su(2, rng));
    times.push_back(k);
  }
  EXPECT_THROW(split_coset_cartan(jumps, times, alg), UndersampledPath);
  Matrix flip(2, 2);
  flip << 0, 1, -1, 0;
  std::vector<Matrix> through(5, flip);
  EXPECT_THROW(split_coset_cartan(through, {0, 1, 2, 3, 4}, alg), NumericalError);
}

TEST(Evolution, SampledCurves) {
  const Algebra alg(2);
  const EvolutionPath loop = fundamental_loop(alg, 0, false, 1.0);
  std::vector<Matrix> samples;
  const int n = 401;
  for (int k = 0; k < n; ++k) samples.push_back(loop.curve(0)->at(k / (n - 1.0)).value);
  const SampledCurve sampled(1.0, samples);
  for (double t : {0.1, 0.37, 0.8}) {
    EXPECT_LT((sampled.at(t).value - loop.curve(0)->at(t).value).norm(), 1e-5);
    EXPECT_LT((sampled.at(t).derivative - loop.curve(0)->at(t).derivative).norm(), 1e-4);
  }
  std::vector<Matrix> bad(samples.begin(), samples.begin() + 6);
  bad[3] *= 1.01;
  EXPECT_THROW(SampledCurve(1.0, bad), NonUnitary);
  EXPECT_THROW(SampledCurve(1.0, std::vector<Matrix>(3, Matrix::Identity(2, 2))), ShapeError);
}

TEST(Evolution, ConcatenationAddsClassesAndStaysContinuous) {
  const Algebra alg(4);
  const EvolutionPath a = fundamental_loop(alg, 0, false, 1.0);
  const EvolutionPath b = fundamental_loop(alg, 2, false, 0.5);
  const EvolutionPath c = a.then(b).then(fundamental_loop(alg, 1, true, 1.0));
  EXPECT_EQ(*c.closure_class(0), (3 + 3 + 1) % 4);
  EXPECT_NEAR(c.duration(), 2.5, 1e-15);
  EXPECT_LT((c.curve(0)->at(1.0 - 1e-9).value - c.curve(0)->at(1.0 + 1e-9).value).norm(), 1e-7);
  EXPECT_EQ(detect_fractional_phase(c).z, 3);
}

TEST(Evolution, ReparametrizationKeepsEndpoints) {
  const Algebra alg(3);
  const EvolutionPath p = coset_loop(alg, 0, 1.0, 2.0);
  const EvolutionPath w = p.reparametrized(quadratic_warp(2.0));
  EXPECT_LT((w.curve(0)->at(1.0).value - p.curve(0)->at(0.5).value).norm(), 1e-12);
  EXPECT_FALSE(w.coset_info.has_value());
}
