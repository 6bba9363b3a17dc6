#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace qudit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr Complex kI{0.0, 1.0};

namespace linalg {

/// exp(i * scale * h) for Hermitian h, via its eigendecomposition.
Matrix expi_hermitian(const Matrix& h, double scale = 1.0);

/// exp(scale * h) for Hermitian h (positive definite result).
Matrix exp_hermitian(const Matrix& h, double scale = 1.0);

/// Principal logarithm of a Hermitian positive-definite matrix.
Matrix log_hpd(const Matrix& q);

/// Principal logarithm of a unitary matrix; the result is i*H with H Hermitian.
Matrix log_unitary(const Matrix& u);

/// Cached spectral form of a Hermitian matrix, so exp(i t h) is cheap for many t.
class HermitianExponential {
 public:
  HermitianExponential() = default;
  explicit HermitianExponential(const Matrix& h);

  Matrix at(double t) const;             ///< exp(i t h)
  const Matrix& generator() const { return h_; }

 private:
  Matrix h_;
  Matrix vectors_;
  RealVector values_;
};

double frobenius(const Matrix& m);

/// ||u^dagger u - I||_F
double unitarity_residual(const Matrix& u);

/// Hermitian traceless part (X + X^dagger)/2 - tr/d.
Matrix hermitian_traceless_part(const Matrix& x);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Haar-random element of SU(d).
Matrix random_su(int d, std::mt19937_64& rng);

/// Random Hermitian traceless matrix with Gaussian entries, Frobenius norm ~ scale.
Matrix random_hermitian_traceless(int d, std::mt19937_64& rng, double scale = 1.0);

/// Random complex matrix with i.i.d. standard Gaussian real and imaginary parts.
Matrix random_complex(int d, std::mt19937_64& rng);

/// Commutator [a, b].
inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

}  // namespace linalg
}  // namespace qudit
