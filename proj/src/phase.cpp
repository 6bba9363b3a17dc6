#include "qudit/phase.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "qudit/errors.hpp"

namespace qudit {
namespace {

constexpr double kOverlapFloor = 1e-8;
constexpr double kCyclicResidual = 1e-4;

// Left-multiplies a curve by a constant: t -> m S(t).
class LeftShiftedCurve final : public UnitaryCurve {
 public:
  LeftShiftedCurve(CurvePtr base, Matrix m) : base_(std::move(base)), m_(std::move(m)) {}
  int dim() const override { return base_->dim(); }
  double duration() const override { return base_->duration(); }
  CurvePoint at(double t) const override {
    CurvePoint p = base_->at(t);
    return {m_ * p.value, m_ * p.derivative};
  }
  std::vector<double> breakpoints() const override { return base_->breakpoints(); }

 private:
  CurvePtr base_;
  Matrix m_;
};

// Evaluates alpha(t), its derivative, and the per-side generators G_k in the Schmidt basis.
class StateEvolution {
 public:
  StateEvolution(const TwoQuditState& state, const EvolutionPath& path, Frame frame)
      : state_(state), path_(path), frame_(frame), sd_(state.schmidt()), d_(state.dim()) {
    for (int k = 0; k < 2; ++k)
      start_inv_[k] = path.at(k, 0.0).value.adjoint();
    sigma_diag_ = sd_.sigma.cast<Complex>().asDiagonal();
    left_ = std::exp(kI * sd_.phi) * sd_.s1;
    right_ = sd_.s2.transpose();
  }

  struct Sample {
    Matrix alpha;
    Matrix alpha_dot;
    std::array<Matrix, 2> g;  // generator in the Schmidt basis, per side
  };

  Sample at(double t) const {
    std::array<Matrix, 2> k;
    std::array<Matrix, 2> k_dot;
    for (int s = 0; s < 2; ++s) {
      const CurvePoint p = path_.at(s, t);
      if (frame_ == Frame::schmidt) {
        k[s] = start_inv_[s] * p.value;
        k_dot[s] = start_inv_[s] * p.derivative;
      } else {
        k[s] = p.value * start_inv_[s];
        k_dot[s] = p.derivative * start_inv_[s];
      }
    }
    Sample out;
    if (frame_ == Frame::schmidt) {
      out.alpha = left_ * k[0] * sigma_diag_ * k[1].transpose() * right_;
      out.alpha_dot = left_ * (k_dot[0] * sigma_diag_ * k[1].transpose() + k[0] * sigma_diag_ * k_dot[1].transpose()) * right_;
      for (int s = 0; s < 2; ++s) out.g[s] = k[s].adjoint() * k_dot[s];
    } else {
      const Matrix& a0 = state_.coeffs();
      out.alpha = k[0] * a0 * k[1].transpose();
      out.alpha_dot = k_dot[0] * a0 * k[1].transpose() + k[0] * a0 * k_dot[1].transpose();
      const std::array<const Matrix*, 2> basis = {&sd_.s1, &sd_.s2};
      for (int s = 0; s < 2; ++s) out.g[s] = basis[s]->adjoint() * (k[s].adjoint() * k_dot[s]) * *basis[s];
    }
    return out;
  }

 private:
  const TwoQuditState& state_;
  const EvolutionPath& path_;
  Frame frame_;
  const SchmidtDecomposition& sd_;
  int d_;
  std::array<Matrix, 2> start_inv_;
  Matrix sigma_diag_;
  Matrix left_;
  Matrix right_;
};

RealVector weights_b(const RealVector& sigma, const Algebra& algebra) { return b_vector_from_weights(sigma, algebra); }

}  // namespace

double angle_distance(double a, double b) { return std::abs(linalg::wrap_angle(a - b)); }

FractionalPhase detect_fractional_phase(const UnitaryCurve& curve) {
  const int d = curve.dim();
  const Matrix rel = curve.at(curve.duration()).value * curve.at(0.0).value.adjoint();
  FractionalPhase out;
  out.residual = std::numeric_limits<double>::infinity();
  for (int z = 0; z < d; ++z) {
    const double r = (rel - std::exp(kI * (kTwoPi * z / d)) * Matrix::Identity(d, d)).norm();
    if (r < out.residual) {
      out.residual = r;
      out.z = z;
    }
  }
  out.signed_z = signed_center_label(out.z, d);
  out.cyclic = out.residual <= kCyclicResidual;
  return out;
}

FractionalPhase detect_fractional_phase(const EvolutionPath& path) {
  FractionalPhase out;
  out.cyclic = true;
  for (int k = 0; k < 2; ++k) {
    if (!path.curve(k)) continue;
    const FractionalPhase side = detect_fractional_phase(*path.curve(k));
    out.z = (out.z + side.z) % path.dim();
    out.residual = std::max(out.residual, side.residual);
    out.cyclic = out.cyclic && side.cyclic;
  }
  out.signed_z = signed_center_label(out.z, path.dim());
  return out;
}

RealVector coset_integrals(const CosetCartanSplit& split, const Algebra& algebra) {
  const int d = algebra.dim();
  RealVector total = RealVector::Zero(d - 1);
  for (std::size_t piece = 0; piece < split.pieces.size(); ++piece) {
    const auto [begin, end] = split.pieces[piece];
    const std::vector<Matrix> u(split.u.begin() + begin, split.u.begin() + end + 1);
    const double h = split.piece_spacing(static_cast<int>(piece));
    const std::vector<Matrix> u_dot = numerics::derivative4(u, h);
    for (int q = 0; q < d - 1; ++q) {
      std::vector<double> integrand(u.size());
      for (std::size_t i = 0; i < u.size(); ++i)
        integrand[i] = -(algebra.generator(q) * u[i].adjoint() * u_dot[i]).trace().imag();
      total(q) += numerics::simpson_uniform(integrand, h);
    }
  }
  return total;
}

RealVector cartan_integrals(const CosetCartanSplit& split, const Algebra& algebra) {
  return -split.h.col(split.h.cols() - 1) / (2.0 * algebra.dim());
}

double cartan_phase_contribution(const CosetCartanSplit& split, const RealVector& sigma, const Algebra& algebra) {
  if (split.closure_residual() > 1e-6)
    throw NonCyclicPath("coset factor does not return to I (residual " + std::to_string(split.closure_residual()) + ")");
  return weights_b(sigma, algebra).dot(cartan_integrals(split, algebra));
}

double cartan_phase_closed_form(const RealVector& sigma, const RealVector& beta, const Algebra& algebra) {
  double s = 0.0;
  for (int j = 0; j < algebra.dim(); ++j) s += sigma(j) * sigma(j) * algebra.fundamental_weight(j).dot(beta);
  return -kTwoPi * s;
}

PhaseReport geometric_phase(const TwoQuditState& state, const EvolutionPath& path, const Algebra& algebra,
                            const PhaseOptions& options) {
  const int d = state.dim();
  if (path.dim() != d || algebra.dim() != d) throw DimensionMismatch("state, path and algebra dimensions differ");
  const StateEvolution evolution(state, path, options.frame);
  const RealVector& sigma = state.sigma();
  const RealVector b = weights_b(sigma, algebra);

  std::vector<int> sides;
  for (int k = 0; k < 2; ++k)
    if (path.curve(k)) sides.push_back(k);
  const std::size_t width = 1 + sides.size() * static_cast<std::size_t>(d);

  // [0] Im Tr(alpha^dagger alpha'), then per side: Im Tr(Sigma^2 G), Im Tr(T_q G) for each q.
  const numerics::Integrand integrand = [&](double t) {
    const StateEvolution::Sample s = evolution.at(t);
    std::vector<double> out(width);
    out[0] = (s.alpha.adjoint() * s.alpha_dot).trace().imag();
    if (options.gauge) out[0] += options.gauge->derivative(t) * s.alpha.squaredNorm();
    std::size_t idx = 1;
    for (int k : sides) {
      const Matrix& g = s.g[k];
      Complex weighted = 0.0;
      for (int j = 0; j < d; ++j) weighted += sigma(j) * sigma(j) * g(j, j);
      out[idx++] = weighted.imag();
      for (int q = 0; q < d - 1; ++q) {
        Complex acc = 0.0;
        for (int j = 0; j < d; ++j) acc += algebra.cartan_diagonal(q, j) * g(j, j);
        out[idx++] = acc.imag();
      }
    }
    return out;
  };

  PhaseReport report;
  report.sigma = sigma;
  std::vector<double> integrals;
  if (const auto grid = path.fixed_grid()) {
    const int n = *grid;
    const double h = path.duration() / (n - 1);
    std::vector<std::vector<double>> table(width, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
      const std::vector<double> v = integrand(i == n - 1 ? path.duration() : i * h);
      for (std::size_t c = 0; c < width; ++c) table[c][i] = v[c];
    }
    for (std::size_t c = 0; c < width; ++c) integrals.push_back(numerics::simpson_uniform(table[c], h));
    report.convergence = {n - 1, 0, 0.0, true, true};
  } else {
    const std::vector<double> breaks = path.breakpoints();
    const numerics::QuadratureResult q = numerics::integrate_piecewise(integrand, breaks, options.quadrature);
    integrals = q.values;
    report.convergence = {q.intervals, q.doublings, q.last_delta, q.converged, false};
  }

  const StateEvolution::Sample start = evolution.at(0.0);
  const StateEvolution::Sample end = evolution.at(path.duration());
  Complex overlap = (start.alpha.adjoint() * end.alpha).trace();
  if (options.gauge) overlap *= std::exp(kI * (options.gauge->value(path.duration()) - options.gauge->value(0.0)));
  report.overlap_modulus = std::abs(overlap);
  report.overlap_arg = std::arg(overlap);
  report.dynamical_term = -integrals[0];
  report.phi_g_raw = report.overlap_arg + report.dynamical_term;
  report.phi_g = linalg::wrap_angle(report.phi_g_raw);

  if (!report.convergence.converged)
    throw ConvergenceError("geometric phase quadrature did not converge after " +
                               std::to_string(report.convergence.doublings) + " doublings",
                           report.phi_g, report.convergence.last_delta);
  if (report.overlap_modulus < kOverlapFloor)
    throw UndefinedOverlapPhase("initial and final states are orthogonal; the overlap phase is undefined");

  report.closure = detect_fractional_phase(path);
  std::size_t idx = 1;
  for (int k : sides) {
    SidePhase side;
    side.side = k;
    side.phi_s = -integrals[idx++];
    side.phi_q = RealVector(d - 1);
    for (int q = 0; q < d - 1; ++q) side.phi_q(q) = -integrals[idx++];
    side.weighted = b.dot(side.phi_q);
    side.closure = detect_fractional_phase(*path.curve(k));
    if (side.closure.cyclic) side.phi_g = linalg::wrap_angle(kTwoPi * side.closure.z / d + side.phi_s);
    if (options.split && options.frame == Frame::schmidt && side.closure.cyclic) {
      const CurvePtr& curve = path.curve(k);
      const LeftShiftedCurve relative(curve, curve->at(0.0).value.adjoint());
      const CosetCartanSplit split = split_coset_cartan(relative, algebra, options.split_samples);
      side.has_split = true;
      side.phi_q_v = cartan_integrals(split, algebra);
      side.phi_q_u = coset_integrals(split, algebra);
      side.target_weight = split.target_weight;
      side.cartan_part = b.dot(side.phi_q_v);
      side.coset_part = b.dot(side.phi_q_u);
    }
    report.sides.push_back(std::move(side));
  }
  return report;
}

double gauge_transform_check(const TwoQuditState& state, const EvolutionPath& path, const Algebra& algebra,
                             const Profile& gauge, const PhaseOptions& options) {
  PhaseOptions plain = options;
  plain.split = false;
  plain.gauge.reset();
  PhaseOptions shifted = plain;
  shifted.gauge = gauge;
  return angle_distance(geometric_phase(state, path, algebra, plain).phi_g,
                        geometric_phase(state, path, algebra, shifted).phi_g);
}

double reparametrization_check(const TwoQuditState& state, const EvolutionPath& path, const Algebra& algebra,
                               const TimeWarp& warp, const PhaseOptions& options) {
  PhaseOptions plain = options;
  plain.split = false;
  return angle_distance(geometric_phase(state, path, algebra, plain).phi_g,
                        geometric_phase(state, path.reparametrized(warp), algebra, plain).phi_g);
}

}  // namespace qudit
