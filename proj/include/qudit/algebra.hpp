#pragma once

#include <array>
#include <span>
#include <vector>

#include "qudit/linalg.hpp"

namespace qudit {

/// One nonzero structure constant f_{abc} stored under its first index a.
struct StructureEntry {
  int b;
  int c;
  double value;
};

/// Positive root w_i - w_k (i < k) together with the generators it labels.
struct Root {
  int i;             ///< row of the E_alpha support (0-based)
  int k;             ///< column of the E_alpha support (0-based)
  RealVector vector; ///< components alpha|_q, q = 0..d-2
  int real_index;    ///< index of T_alpha in the generator list
  int imag_index;    ///< index of T_alphabar in the generator list
};

/// Normalised su(d) basis with Tr(T_A T_B) = delta_AB / (2d) and its Cartan data.
///
/// Generators are ordered Cartan first (T_q, q = 0..d-2, diagonal), then one
/// pair per upper-triangular position (i, k), i < k, in row-major order:
/// T_alpha = (E + E^dagger)/sqrt(2), T_alphabar = (E - E^dagger)/(sqrt(2) i)
/// with E = e_i e_k^dagger / sqrt(2d). All indices in this API are 0-based.
///
/// Structure constants are kept sparse (they have O(d^3) nonzeros), and the
/// adjoint matrices M_A are built on demand, so d up to 32 stays cheap.
/// Instances are immutable after construction.
class Algebra {
 public:
  static constexpr int kMaxDimension = 32;

  /// Throws InvalidDimension unless 2 <= d <= kMaxDimension.
  explicit Algebra(int d);

  int dim() const { return d_; }
  int size() const { return d_ * d_ - 1; }
  int rank() const { return d_ - 1; }

  const Matrix& generator(int a) const;
  const std::vector<Matrix>& generators() const { return generators_; }

  double f(int a, int b, int c) const;
  /// All nonzero f_{a b c} for fixed a, sorted by (b, c).
  std::span<const StructureEntry> f_row(int a) const;
  std::size_t structure_nonzeros() const;

  /// Hermitian (d^2-1)x(d^2-1) matrix with (M_A)_{BC} = -i f_{ABC}.
  Matrix adjoint_generator(int a) const;
  /// sum_q v_q M_q for a Cartan-direction vector v.
  Matrix adjoint_cartan(const RealVector& v) const;

  const std::vector<Root>& roots() const { return roots_; }
  const Root& root(int index) const;
  int root_index(int i, int k) const;

  /// w_i = (T_0|_ii, ..., T_{d-2}|_ii).
  RealVector fundamental_weight(int i) const;
  /// beta_i = 2d w_i.
  RealVector magnetic_weight(int i) const;

  /// Column of E_alpha in the T_A basis: 1/sqrt(2) at T_alpha, i/sqrt(2) at T_alphabar.
  Vector ladder_components(int root) const;

  /// X^A = 2d Tr(T_A X), complex in general; real for Hermitian X.
  Vector complex_coefficients(const Matrix& x) const;
  /// Real part of complex_coefficients, the expansion of a Hermitian traceless X.
  RealVector coefficients(const Matrix& x) const;
  Matrix from_coefficients(const RealVector& c) const;

  /// Killing-type metric <X, Y> = Tr(Ad X Ad Y) = X^A Y^A.
  double inner(const Matrix& x, const Matrix& y) const;

  /// v . T for a (d-1)-vector v (diagonal).
  Matrix cartan_combination(const RealVector& v) const;

  /// Diagonal entry T_q|_jj.
  double cartan_diagonal(int q, int j) const { return cartan_diag_(q, j); }

 private:
  int pair_offset(int i, int k) const;

  int d_;
  std::vector<Matrix> generators_;
  RealMatrix cartan_diag_;  // (d-1) x d
  std::vector<std::vector<StructureEntry>> f_rows_;
  std::vector<Root> roots_;
};

/// Best center label z (0..d-1) with exp(i 2 pi beta.T) ~ e^{2 pi i z/d} I,
/// and the Frobenius residual of that match.
struct CenterMatch {
  int z;
  double residual;
};

CenterMatch center_element(const Algebra& algebra, const RealVector& beta);

/// ((1/alpha^2) alpha.T, T_alpha/|alpha|, T_alphabar/|alpha|); the triple (a, b, c)
/// satisfies [a, b] = i c, [b, c] = i a, [c, a] = i b.
std::array<Matrix, 3> su2_triplet(const Algebra& algebra, int root_index);

/// Signed representative of z mod d in (-d/2, d/2].
int signed_center_label(int z, int d);

}  // namespace qudit
