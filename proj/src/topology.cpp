#include "qudit/topology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qudit/errors.hpp"

namespace qudit {

CenterClass center_class(int z, int d) {
  if (d < 2) throw InvalidDimension("center classes need d >= 2");
  const int wrapped = ((z % d) + d) % d;
  return {d, wrapped, std::exp(kI * (kTwoPi * wrapped / d))};
}

ProjectiveMatch projective_equivalent(const TwoQuditState& a, const TwoQuditState& b, double tolerance) {
  if (a.dim() != b.dim()) throw DimensionMismatch("states have different dimensions");
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  a.coeffs().cwiseAbs().maxCoeff(&row, &col);
  ProjectiveMatch out;
  const Complex ratio = b.coeffs()(row, col) / a.coeffs()(row, col);
  if (std::abs(ratio) == 0.0) {
    out.residual = (b.coeffs() - a.coeffs()).norm();
    return out;
  }
  const double f = std::arg(ratio);
  out.residual = (b.coeffs() - std::exp(kI * f) * a.coeffs()).norm();
  out.equivalent = out.residual <= tolerance;
  if (out.equivalent) out.phase = f;
  return out;
}

RealMatrix adjoint_image(const Algebra& algebra, const Matrix& s) {
  const int d = algebra.dim();
  if (s.rows() != d || s.cols() != d) throw DimensionMismatch("matrix does not match algebra dimension");
  const double unit = linalg::unitarity_residual(s);
  const double det = std::abs(s.determinant() - Complex(1.0, 0.0));
  if (unit > 1e-8 || det > 1e-8)
    throw NonUnitary("adjoint image needs S in SU(d) (unitarity " + std::to_string(unit) + ", det " +
                     std::to_string(det) + ")");
  const int n = algebra.size();
  RealMatrix r(n, n);
  const Matrix s_inv = s.adjoint();
  for (int b = 0; b < n; ++b) r.col(b) = algebra.coefficients(s * algebra.generator(b) * s_inv);
  return r;
}

double orthogonality_residual(const RealMatrix& r) {
  return (r.transpose() * r - RealMatrix::Identity(r.rows(), r.cols())).norm();
}

double RetractionReport::max_residual() const {
  return std::max({identity_residual, mes_residual, fixed_point_residual, equivalence_residual, equivalence_phase_error});
}

std::vector<double> default_retraction_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
  return grid;
}

RetractionReport verify_retraction(const TwoQuditState& state, std::span<const double> s_grid) {
  const int d = state.dim();
  if (schmidt_rank(state) < d) throw RankError("retraction checks need a rank-d state");
  RetractionReport report;
  report.s_grid.assign(s_grid.begin(), s_grid.end());

  report.identity_residual = (retract(state, 0.0).coeffs() - state.coeffs()).norm();

  const TwoQuditState top = retract(state, 1.0);
  const double target = 1.0 / std::sqrt(static_cast<double>(d));
  report.mes_residual = (top.sigma().array() - target).abs().maxCoeff();

  const TwoQuditState shifted = TwoQuditState::normalized(std::exp(kI * (kTwoPi / d)) * state.coeffs());
  for (double s : s_grid) {
    report.fixed_point_residual =
        std::max(report.fixed_point_residual, (retract(top, s).coeffs() - top.coeffs()).norm());
    const TwoQuditState a = retract(state, s);
    const TwoQuditState b = retract(shifted, s);
    const Complex ov = overlap(a, b);
    const double f = std::arg(ov);
    report.equivalence_residual =
        std::max(report.equivalence_residual, (b.coeffs() - std::exp(kI * f) * a.coeffs()).norm());
    report.equivalence_phase_error =
        std::max(report.equivalence_phase_error, std::abs(linalg::wrap_angle(f - kTwoPi / d)));
  }
  return report;
}

}  // namespace qudit
