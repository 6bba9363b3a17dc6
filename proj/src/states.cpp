#include "qudit/states.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "qudit/errors.hpp"

namespace qudit {
namespace {

// Rotates each column so that its largest-magnitude entry is real positive.
// Returns the phases removed.
Vector canonicalize_columns(Matrix& m) {
  Vector removed(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index best = 0;
    m.col(j).cwiseAbs().maxCoeff(&best);
    const Complex pivot = m(best, j);
    const double mag = std::abs(pivot);
    const Complex phase = mag > 0.0 ? pivot / mag : Complex(1.0, 0.0);
    m.col(j) *= std::conj(phase);
    removed(j) = phase;
  }
  return removed;
}

SchmidtDecomposition decompose(const Matrix& alpha) {
  const int d = static_cast<int>(alpha.rows());
  Eigen::JacobiSVD<Matrix> svd(alpha, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix u = svd.matrixU();
  Matrix v = svd.matrixV();
  const RealVector sigma = svd.singularValues();

  // alpha = sum_j sigma_j u_j v_j^dagger is unchanged when u_j and v_j share a phase.
  const Vector removed = canonicalize_columns(u);
  const double cutoff = kRankTolerance * sigma(0);
  for (int j = 0; j < d; ++j) {
    if (sigma(j) > cutoff) {
      v.col(j) *= std::conj(removed(j));
    } else {
      Eigen::Index best = 0;
      v.col(j).cwiseAbs().maxCoeff(&best);
      const Complex pivot = v(best, j);
      if (std::abs(pivot) > 0.0) v.col(j) *= std::conj(pivot / std::abs(pivot));
    }
  }

  // Move det U and det V into the global phase with the principal d-th root.
  const double u_arg = std::arg(u.determinant());
  const double w_arg = std::arg(v.determinant());
  SchmidtDecomposition out;
  out.phi = (u_arg - w_arg) / d;
  out.s1 = std::exp(-kI * (u_arg / d)) * u;
  out.s2 = std::exp(kI * (w_arg / d)) * v.conjugate();
  out.sigma = sigma;
  out.q = out.s1 * sigma.cast<Complex>().asDiagonal() * out.s1.adjoint();
  out.sm = out.s1 * out.s2.transpose();
  return out;
}

}  // namespace

TwoQuditState::TwoQuditState(Matrix coeffs, double normalization)
    : coeffs_(std::move(coeffs)), normalization_(normalization), schmidt_(decompose(coeffs_)) {}

TwoQuditState TwoQuditState::normalized(const Matrix& coeffs) {
  if (coeffs.rows() != coeffs.cols())
    throw ShapeError("state coefficients must be square, got " + std::to_string(coeffs.rows()) + "x" +
                     std::to_string(coeffs.cols()));
  if (coeffs.rows() < 2) throw ShapeError("state dimension must be at least 2");
  const double norm = coeffs.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DegenerateState("state coefficients have zero (or non-finite) norm");
  return TwoQuditState(coeffs / norm, 1.0 / norm);
}

TwoQuditState TwoQuditState::from_unit(const Matrix& coeffs) {
  if (coeffs.rows() != coeffs.cols() || coeffs.rows() < 2) throw ShapeError("state coefficients must be square, d >= 2");
  if (std::abs(coeffs.squaredNorm() - 1.0) > 1e-10) throw DomainError("state is not normalised");
  return TwoQuditState(coeffs, 1.0);
}

TwoQuditState make_state(const Matrix& coeffs) { return TwoQuditState::normalized(coeffs); }

double invariant(const TwoQuditState& state, int p) {
  if (p < 1) throw DomainError("invariant order p must be >= 1");
  const Matrix rho = state.coeffs().adjoint() * state.coeffs();
  Matrix power = rho;
  for (int k = 1; k < p; ++k) power = power * rho;
  return power.trace().real();
}

double invariant_from_spectrum(const RealVector& sigma, int p) {
  if (p < 1) throw DomainError("invariant order p must be >= 1");
  double s = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) s += std::pow(sigma(i) * sigma(i), p);
  return s;
}

double extrapolate_invariant(std::span<const double> invariants) {
  const std::size_t d = invariants.size();
  if (d == 0) throw DomainError("need at least I_1");
  // Elementary symmetric polynomials e_k of the d eigenvalues sigma_i^2.
  std::vector<double> e(d + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t k = 1; k <= d; ++k) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= k; ++i) acc += ((i % 2 == 1) ? 1.0 : -1.0) * e[k - i] * invariants[i - 1];
    e[k] = acc / static_cast<double>(k);
  }
  double next = 0.0;
  for (std::size_t i = 1; i <= d; ++i) next += ((i % 2 == 1) ? 1.0 : -1.0) * e[i] * invariants[d - i];
  return next;
}

double concurrence(const TwoQuditState& state) {
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - invariant(state, 2))));
}

double max_concurrence(int d) { return std::sqrt(2.0 * (d - 1.0) / d); }

RealVector b_vector(const TwoQuditState& state, const Algebra& algebra) {
  const int d = state.dim();
  if (algebra.dim() != d) throw DimensionMismatch("algebra and state dimensions differ");
  const RealVector& sigma = state.sigma();
  Matrix sigma2 = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) sigma2(i, i) = sigma(i) * sigma(i);
  RealVector b(d - 1);
  for (int q = 0; q < d - 1; ++q) b(q) = 2.0 * d * (algebra.generator(q) * sigma2).trace().real();
  return b;
}

RealVector b_vector_from_weights(const RealVector& sigma, const Algebra& algebra) {
  const int d = algebra.dim();
  if (sigma.size() != d) throw DimensionMismatch("spectrum length differs from algebra dimension");
  RealVector b = RealVector::Zero(d - 1);
  for (int i = 0; i < d; ++i) b += sigma(i) * sigma(i) * algebra.magnetic_weight(i);
  return b;
}

SchmidtDecomposition schmidt(const TwoQuditState& state) { return state.schmidt(); }

int schmidt_rank(const TwoQuditState& state) {
  const RealVector& s = state.sigma();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > kRankTolerance * s(0)) ++r;
  return r;
}

bool is_maximally_entangled(const TwoQuditState& state, double tolerance) {
  const double target = 1.0 / std::sqrt(static_cast<double>(state.dim()));
  return (state.sigma().array() - target).abs().maxCoeff() <= tolerance;
}

TwoQuditState retract(const TwoQuditState& state, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("retraction parameter s must lie in [0, 1]");
  const int d = state.dim();
  if (schmidt_rank(state) < d) throw RankError("retraction needs a rank-d state (log Q undefined)");
  const SchmidtDecomposition& sd = state.schmidt();

  const double det_q = sd.sigma.prod();
  const double det_root = std::pow(det_q, 1.0 / d);
  const Matrix m = linalg::log_hpd(sd.q / det_root);   // Hermitian, traceless
  const Matrix flow = linalg::exp_hermitian(m, 1.0 - s);
  const Matrix qs = std::pow(det_q, (1.0 - s) / d) * std::pow(static_cast<double>(d), -s / 2.0) * flow;
  const double norm = std::sqrt((qs * qs).trace().real());
  const Matrix f = std::exp(kI * sd.phi) * (qs * sd.sm) / norm;
  return TwoQuditState::normalized(f);
}

Complex overlap(const TwoQuditState& a, const TwoQuditState& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("states have different dimensions");
  return (a.coeffs().adjoint() * b.coeffs()).trace();
}

TwoQuditState apply_local(const TwoQuditState& state, const Matrix& s1, const Matrix& s2, double phase) {
  return TwoQuditState::normalized(std::exp(kI * phase) * s1 * state.coeffs() * s2.transpose());
}

}  // namespace qudit
