#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qudit/errors.hpp"
#include "qudit/phase.hpp"

using namespace qudit;

namespace {

/// Bargmann-invariant phase of alpha(t) sampled on n + 1 points.
double bargmann(const TwoQuditState& state, const EvolutionPath& path, Frame frame, int n = 4000) {
  const SchmidtDecomposition& sd = state.schmidt();
  const Matrix sigma = sd.sigma.cast<Complex>().asDiagonal();
  const Matrix a0 = path.at(0, 0.0).value.adjoint();
  const Matrix b0 = path.at(1, 0.0).value.adjoint();
  std::vector<Matrix> states;
  for (int k = 0; k <= n; ++k) {
    const double t = path.duration() * k / n;
    const Matrix k1 = a0 * path.at(0, t).value;
    const Matrix k2 = b0 * path.at(1, t).value;
    if (frame == Frame::computational)
      states.push_back(k1 * state.coeffs() * k2.transpose());
    else
      states.push_back(std::exp(kI * sd.phi) * sd.s1 * k1 * sigma * k2.transpose() * sd.s2.transpose());
  }
  return oracle::bargmann_phase(states);
}

EvolutionPath random_open(const Algebra& alg, std::mt19937_64& rng, bool both) {
  RandomPathOptions o;
  o.amplitude = 0.7;
  const CurvePtr a = random_smooth_path(alg, rng, 1.0, o);
  return EvolutionPath(alg.dim(), a, both ? random_smooth_path(alg, rng, 1.0, o) : nullptr);
}

EvolutionPath random_cyclic(const Algebra& alg, std::mt19937_64& rng, int weight) {
  RandomPathOptions o;
  o.amplitude = 0.5;
  o.winding = alg.magnetic_weight(weight);
  return EvolutionPath::single(random_smooth_loop(alg, rng, 1.0, o), Side::first, alg.dim() - 1);
}

}  // namespace

TEST(Phase, ConstantPathHasNoPhase) {
  const Algebra alg(3);
  std::mt19937_64 rng(31);
  const TwoQuditState s = make_state(linalg::random_complex(3, rng));
  const PhaseReport r = geometric_phase(s, EvolutionPath::single(identity_curve(3, 1.0), Side::first, 0), alg);
  EXPECT_EQ(r.phi_g, 0.0);
  EXPECT_EQ(r.closure.z, 0);
}

TEST(Phase, MaximallyEntangledFundamentalLoops) {
  const Algebra alg2(2);
  const PhaseReport q = geometric_phase(make_state(Matrix::Identity(2, 2)), fundamental_loop(alg2, 0, false, 1.0), alg2);
  EXPECT_NEAR(std::abs(q.phi_g), kPi, 1e-6);
  EXPECT_EQ(q.closure.z, 1);
  const Algebra alg3(3);
  const PhaseReport t = geometric_phase(make_state(Matrix::Identity(3, 3)), fundamental_loop(alg3, 0, false, 1.0), alg3);
  EXPECT_NEAR(t.phi_g, -kTwoPi / 3, 1e-6);
  EXPECT_EQ(t.closure.signed_z, -1);
  EXPECT_NEAR(t.sides[0].cartan_part, 0.0, 1e-9);
}

TEST(Phase, AgreesWithBargmannOracle) {
  std::mt19937_64 rng(32);
  for (int d : {2, 3}) {
    const Algebra alg(d);
    for (int trial = 0; trial < 4; ++trial) {
      const TwoQuditState s = make_state(linalg::random_complex(d, rng));
      const EvolutionPath p = random_open(alg, rng, trial % 2 == 1);
      for (Frame frame : {Frame::schmidt, Frame::computational}) {
        PhaseOptions o;
        o.frame = frame;
        const PhaseReport r = geometric_phase(s, p, alg, o);
        EXPECT_LT(oracle::circle_distance(r.phi_g, bargmann(s, p, frame)), 1e-5) << "d=" << d << " trial " << trial;
        EXPECT_NEAR(r.phi_g_raw, r.overlap_arg + r.dynamical_term, 1e-12);
        EXPECT_NEAR(r.phi_g, linalg::wrap_angle(r.phi_g_raw), 1e-12);
      }
    }
  }
}

TEST(Phase, FramesCoincideForCanonicalStates) {
  std::mt19937_64 rng(33);
  const Algebra alg(3);
  RealVector sigma(3);
  sigma << 0.8, 0.5, 0.33;
  const TwoQuditState s = make_state(Matrix(sigma.cast<Complex>().asDiagonal()));
  const EvolutionPath p = random_open(alg, rng, true);
  PhaseOptions comp;
  comp.frame = Frame::computational;
  EXPECT_NEAR(geometric_phase(s, p, alg).phi_g, geometric_phase(s, p, alg, comp).phi_g, 1e-10);
}

TEST(Phase, FractionalPhaseDetection) {
  const Algebra alg4(4);
  const FractionalPhase f = detect_fractional_phase(fundamental_loop(alg4, 0, false, 1.0));
  EXPECT_EQ(f.z, 3);
  EXPECT_LT(f.residual, 1e-8);
  EXPECT_TRUE(f.cyclic);
  EXPECT_EQ(detect_fractional_phase(*identity_curve(4, 1.0)).z, 0);
  const Profile half = scaled(cosine_ramp(1.0), 0.5);
  const CurvePtr c = cartan_path(alg4, alg4.magnetic_weight(0), 1.0, half);
  const FractionalPhase h = detect_fractional_phase(*c);
  EXPECT_FALSE(h.cyclic);
  EXPECT_GT(h.residual, 1e-4);
}

TEST(Phase, CartanContribution) {
  std::mt19937_64 rng(34);
  for (int d = 2; d <= 4; ++d) {
    const Algebra alg(d);
    const RealVector beta = alg.magnetic_weight(0) - alg.magnetic_weight(d - 1);
    const CosetCartanSplit s = split_coset_cartan(*cartan_loop(alg, beta, 1.0).curve(0), alg, 257);
    const RealVector mes = RealVector::Constant(d, 1 / std::sqrt(static_cast<double>(d)));
    EXPECT_NEAR(cartan_phase_contribution(s, mes, alg), 0.0, 1e-10);
    const TwoQuditState st = make_state(linalg::random_complex(d, rng));
    EXPECT_NEAR(cartan_phase_contribution(s, st.sigma(), alg), cartan_phase_closed_form(st.sigma(), beta, alg), 1e-9);
  }
  const Algebra alg3(3);
  const CosetCartanSplit s = split_coset_cartan(*fundamental_loop(alg3, 0, false, 1.0).curve(0), alg3, 257);
  RealVector product = RealVector::Zero(3);
  product(0) = 1.0;
  // Together with the center term 2 pi z / d, z = -1, the net is -2 pi.
  EXPECT_NEAR(cartan_phase_contribution(s, product, alg3), -2 * kTwoPi / 3, 1e-9);
  EXPECT_NEAR(cartan_phase_contribution(s, product, alg3) - kTwoPi / 3, -kTwoPi, 1e-9);
  // Open Cartan ramp leaves U at I but a coset loop cut in half does not.
  const EvolutionPath open = coset_loop(alg3, 0, 1.0, 1.0);
  std::vector<Matrix> first_half;
  std::vector<double> times;
  for (int k = 0; k <= 400; ++k) {
    times.push_back(0.5 * k / 400);
    first_half.push_back(open.curve(0)->at(times.back()).value);
  }
  EXPECT_THROW(cartan_phase_contribution(split_coset_cartan(first_half, times, alg3), product, alg3), NonCyclicPath);
}

TEST(Phase, WeightPathClosedForm) {
  std::mt19937_64 rng(35);
  for (int d = 2; d <= 4; ++d) {
    const Algebra alg(d);
    for (int trial = 0; trial < 5; ++trial) {
      const TwoQuditState s = make_state(linalg::random_complex(d, rng));
      const int i = trial % d;
      const double s2 = s.sigma()(i) * s.sigma()(i);
      const PhaseReport plus = geometric_phase(s, fundamental_loop(alg, i, false, 1.0), alg);
      const PhaseReport minus = geometric_phase(s, fundamental_loop(alg, i, true, 1.0), alg, {});
      EXPECT_LT(oracle::circle_distance(plus.phi_g, -kTwoPi * s2), 1e-6);
      EXPECT_LT(oracle::circle_distance(minus.phi_g, kTwoPi * s2), 1e-6);
      EXPECT_NEAR(plus.sides[0].coset_part, 0.0, 1e-9);
    }
  }
}

TEST(Phase, SeparableStatesSeeNoCartanPhase) {
  std::mt19937_64 rng(36);
  for (int d = 2; d <= 5; ++d) {
    const Algebra alg(d);
    const Matrix a = linalg::random_complex(d, rng).col(0);
    const Matrix b = linalg::random_complex(d, rng).col(0);
    const TwoQuditState s = make_state(a * b.transpose());
    for (int i = 0; i < d; ++i)
      EXPECT_LT(oracle::circle_distance(geometric_phase(s, fundamental_loop(alg, i, i % 2 == 0, 1.0), alg).phi_g, 0.0), 1e-6);
  }
}

TEST(Phase, QubitSolidAngle) {
  const Algebra alg(2);
  Matrix product = Matrix::Zero(2, 2);
  product(0, 0) = 1.0;
  const TwoQuditState s = make_state(product);
  for (double theta : {kPi / 6, kPi / 3, kPi / 2, 2 * kPi / 3}) {
    const EvolutionPath p = coset_loop(alg, 0, theta, 1.0);
    const PhaseReport r = geometric_phase(s, p, alg);
    EXPECT_LT(oracle::circle_distance(r.phi_g, kPi * (1 - std::cos(theta))), 1e-5);
    EXPECT_LT(oracle::circle_distance(r.phi_g, bargmann(s, p, Frame::schmidt, 8000)), 1e-4);
  }
}

TEST(Phase, WeightedPhiIdentityAndSplitConsistency) {
  std::mt19937_64 rng(37);
  for (int d = 2; d <= 4; ++d) {
    const Algebra alg(d);
    for (int trial = 0; trial < 3; ++trial) {
      const TwoQuditState s = make_state(linalg::random_complex(d, rng));
      const PhaseReport r = geometric_phase(s, random_cyclic(alg, rng, trial % d), alg);
      const SidePhase& side = r.sides[0];
      EXPECT_NEAR(side.phi_s, side.weighted, 1e-6);
      ASSERT_TRUE(side.has_split);
      EXPECT_LT((side.phi_q - side.phi_q_v - side.phi_q_u).cwiseAbs().maxCoeff(), 1e-6);
      EXPECT_LT((side.target_weight - alg.magnetic_weight(trial % d)).norm(), 1e-6);
      const RealVector b = b_vector(s, alg);
      EXPECT_NEAR(side.cartan_part, b.dot(side.phi_q_v), 1e-12);
      EXPECT_NEAR(side.cartan_part + side.coset_part, side.weighted, 1e-6);
      EXPECT_LT(oracle::circle_distance(r.phi_g, *side.phi_g), 1e-6);
    }
  }
}

TEST(Phase, AdditivityAcrossSides) {
  std::mt19937_64 rng(38);
  const Algebra alg(3);
  for (int trial = 0; trial < 3; ++trial) {
    const TwoQuditState s = make_state(linalg::random_complex(3, rng));
    const EvolutionPath a = random_cyclic(alg, rng, trial);
    const EvolutionPath b = random_cyclic(alg, rng, (trial + 1) % 3);
    const EvolutionPath both(3, a.curve(0), b.curve(0), {2, 2});
    const double sum = geometric_phase(s, a, alg).phi_g +
                       geometric_phase(s, EvolutionPath(3, nullptr, b.curve(0), {std::nullopt, 2}), alg).phi_g;
    EXPECT_LT(oracle::circle_distance(geometric_phase(s, both, alg).phi_g, sum), 1e-6);
  }
}

TEST(Phase, GaugeAndReparametrizationInvariance) {
  std::mt19937_64 rng(39);
  const Algebra alg(3);
  const TwoQuditState s = make_state(linalg::random_complex(3, rng));
  const EvolutionPath p = random_open(alg, rng, true);
  const Profile none{[](double) { return 0.0; }, [](double) { return 0.0; }};
  EXPECT_EQ(gauge_transform_check(s, p, alg, none), 0.0);
  const Profile bump{[](double t) { return 3 * std::pow(std::sin(kPi * t), 2); },
                     [](double t) { return 3 * kPi * std::sin(kTwoPi * t); }};
  EXPECT_LT(gauge_transform_check(s, p, alg, bump), 1e-6);
  EXPECT_LT(reparametrization_check(s, p, alg, quadratic_warp(1.0)), 1e-6);
}

TEST(Phase, Errors) {
  const Algebra alg(2);
  Matrix product = Matrix::Zero(2, 2);
  product(0, 0) = 1.0;
  const TwoQuditState s = make_state(product);
  Matrix sx(2, 2);
  sx << 0, 0.5, 0.5, 0;
  // exp(i pi sigma_x / 2) sends |0> to i|1>.
  const auto flip = std::make_shared<ProductCurve>(2, 1.0, std::vector<ExpFactor>{ExpFactor(sx, scaled(linear_profile(1.0), kPi))});
  EXPECT_THROW(geometric_phase(s, EvolutionPath::single(flip, Side::first), alg), UndefinedOverlapPhase);

  std::mt19937_64 rng(40);
  const Algebra alg3(3);
  const EvolutionPath p = random_open(alg3, rng, false);
  const TwoQuditState t = make_state(linalg::random_complex(3, rng));
  PhaseOptions strict;
  strict.quadrature.tolerance = 1e-300;
  strict.quadrature.max_doublings = 1;
  strict.quadrature.initial_intervals = 64;
  try {
    geometric_phase(t, p, alg3, strict);
    FAIL() << "expected a convergence error";
  } catch (const ConvergenceError& e) {
    EXPECT_LT(oracle::circle_distance(e.best_estimate(), geometric_phase(t, p, alg3).phi_g), 1e-5);
    EXPECT_GT(e.last_delta(), 0.0);
  }
}
