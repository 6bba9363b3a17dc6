#include "qudit/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qudit::linalg {

Matrix expi_hermitian(const Matrix& h, double scale) {
  return HermitianExponential(h).at(scale);
}

Matrix exp_hermitian(const Matrix& h, double scale) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector values(h.rows());
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = std::exp(scale * es.eigenvalues()(i));
  return es.eigenvectors() * values.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix log_hpd(const Matrix& q) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(q);
  RealVector values = es.eigenvalues();
  Vector logs(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) logs(i) = std::log(values(i));
  return es.eigenvectors() * logs.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix log_unitary(const Matrix& u) {
  // Unitary matrices are normal, so the complex Schur form is diagonal.
  Eigen::ComplexSchur<Matrix> schur(u);
  const Matrix& t = schur.matrixT();
  Vector logs(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) logs(i) = kI * std::arg(t(i, i));
  return schur.matrixU() * logs.asDiagonal() * schur.matrixU().adjoint();
}

HermitianExponential::HermitianExponential(const Matrix& h) : h_(h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  vectors_ = es.eigenvectors();
  values_ = es.eigenvalues();
}

Matrix HermitianExponential::at(double t) const {
  Vector phases(values_.size());
  for (Eigen::Index i = 0; i < values_.size(); ++i) phases(i) = std::exp(kI * (t * values_(i)));
  return vectors_ * phases.asDiagonal() * vectors_.adjoint();
}

double frobenius(const Matrix& m) { return m.norm(); }

double unitarity_residual(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

Matrix hermitian_traceless_part(const Matrix& x) {
  Matrix h = 0.5 * (x + x.adjoint());
  const Complex tr = h.trace() / static_cast<double>(h.rows());
  h.diagonal().array() -= tr;
  return h;
}

double wrap_angle(double a) {
  double w = std::remainder(a, kTwoPi);  // [-pi, pi]
  if (w <= -kPi) w += kTwoPi;
  return w;
}

Matrix random_complex(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

Matrix random_su(int d, std::mt19937_64& rng) {
  Matrix g = random_complex(d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Mezzadri's phase correction makes the distribution Haar.
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  const Complex det = q.determinant();
  q *= std::exp(-kI * (std::arg(det) / d));
  return q;
}

Matrix random_hermitian_traceless(int d, std::mt19937_64& rng, double scale) {
  Matrix g = random_complex(d, rng);
  Matrix h = hermitian_traceless_part(g);
  const double n = h.norm();
  if (n > 0.0) h *= scale / n;
  return h;
}

}  // namespace qudit::linalg
