#pragma once

#include <span>

#include "qudit/algebra.hpp"
#include "qudit/linalg.hpp"

namespace qudit {

/// alpha = e^{i phi} S1 diag(sigma) S2^T = e^{i phi} Q Sm with S1, S2, Sm in SU(d).
struct SchmidtDecomposition {
  double phi = 0.0;
  Matrix s1;
  Matrix s2;
  RealVector sigma;  ///< descending, sum of squares 1
  Matrix q;          ///< S1 diag(sigma) S1^dagger
  Matrix sm;         ///< S1 S2^T
};

/// Pure two-qudit state sum_ij alpha_ij |ij>, stored as its d x d coefficient
/// matrix. Always normalised; the Schmidt decomposition is computed once at
/// construction and shared by every query.
class TwoQuditState {
 public:
  /// Divides by the Frobenius norm. Throws ShapeError for non-square or d < 2
  /// input and DegenerateState for the zero matrix.
  static TwoQuditState normalized(const Matrix& coeffs);
  /// Accepts only coefficients whose norm is already 1 within 1e-10.
  static TwoQuditState from_unit(const Matrix& coeffs);

  int dim() const { return static_cast<int>(coeffs_.rows()); }
  const Matrix& coeffs() const { return coeffs_; }
  /// Factor the input was multiplied by (1 / ||input||_F).
  double normalization() const { return normalization_; }
  const SchmidtDecomposition& schmidt() const { return schmidt_; }
  const RealVector& sigma() const { return schmidt_.sigma; }

 private:
  TwoQuditState(Matrix coeffs, double normalization);

  Matrix coeffs_;
  double normalization_;
  SchmidtDecomposition schmidt_;
};

inline constexpr double kRankTolerance = 1e-10;

TwoQuditState make_state(const Matrix& coeffs);

/// I_p = Tr[(alpha^dagger alpha)^p] from trace powers.
double invariant(const TwoQuditState& state, int p);
/// I_p = sum_i (sigma_i^2)^p.
double invariant_from_spectrum(const RealVector& sigma, int p);
/// Newton-identity prediction of I_{d+1} from I_1..I_d (the Cayley-Hamilton closure).
double extrapolate_invariant(std::span<const double> invariants);

double concurrence(const TwoQuditState& state);
double max_concurrence(int d);

/// b_q = 2d Tr(T_q Sigma^2).
RealVector b_vector(const TwoQuditState& state, const Algebra& algebra);
/// b_q = sum_i sigma_i^2 beta_i|_q.
RealVector b_vector_from_weights(const RealVector& sigma, const Algebra& algebra);

SchmidtDecomposition schmidt(const TwoQuditState& state);

/// Number of singular values above kRankTolerance * sigma_max.
int schmidt_rank(const TwoQuditState& state);
bool is_maximally_entangled(const TwoQuditState& state, double tolerance = 1e-8);

/// Deformation retraction F(y, s) onto the maximally entangled set, carrying
/// the global phase of the input so that s = 0 returns the input exactly.
/// Throws RankError for rank-deficient input and DomainError for s outside [0, 1].
TwoQuditState retract(const TwoQuditState& state, double s);

/// <a|b> = Tr(a^dagger b).
Complex overlap(const TwoQuditState& a, const TwoQuditState& b);

/// e^{i phase} S1 alpha S2^T.
TwoQuditState apply_local(const TwoQuditState& state, const Matrix& s1, const Matrix& s2, double phase = 0.0);

}  // namespace qudit
