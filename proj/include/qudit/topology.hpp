#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qudit/algebra.hpp"
#include "qudit/states.hpp"

namespace qudit {

/// Element e^{2 pi i z/d} I of the center Z(d).
struct CenterClass {
  int d = 0;
  int z = 0;  ///< 0..d-1
  Complex phase;
};

CenterClass center_class(int z, int d);

struct ProjectiveMatch {
  bool equivalent = false;
  std::optional<double> phase;  ///< f with b = e^{if} a, in (-pi, pi]
  double residual = 0.0;        ///< ||b - e^{if} a||_F
};

/// b ~ a when b = e^{if} a within `tolerance`; f is read off the largest |a_ij|.
ProjectiveMatch projective_equivalent(const TwoQuditState& a, const TwoQuditState& b, double tolerance = 1e-8);

/// R_AB = 2d Tr(T_A S T_B S^{-1}). Throws NonUnitary unless S is in SU(d) to 1e-8.
RealMatrix adjoint_image(const Algebra& algebra, const Matrix& s);

/// ||R^T R - I||_F
double orthogonality_residual(const RealMatrix& r);

struct RetractionReport {
  std::vector<double> s_grid;
  double identity_residual = 0.0;     ///< ||F(y, 0) - y||
  double mes_residual = 0.0;          ///< max_i |sigma_i(F(y, 1)) - d^{-1/2}|
  double fixed_point_residual = 0.0;  ///< max_s ||F(a, s) - a|| for a = F(y, 1)
  double equivalence_residual = 0.0;  ///< max_s distance of F(e^{2 pi i/d} y, s) from the ray of F(y, s)
  double equivalence_phase_error = 0.0;  ///< max_s |f - 2 pi/d| for that pair
  double max_residual() const;
};

/// Throws RankError for rank-deficient input.
RetractionReport verify_retraction(const TwoQuditState& state, std::span<const double> s_grid);
/// Eleven evenly spaced points on [0, 1].
std::vector<double> default_retraction_grid();

}  // namespace qudit
