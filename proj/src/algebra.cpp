#include "qudit/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qudit/errors.hpp"

namespace qudit {
namespace {

constexpr double kStructureCutoff = 1e-13;

struct SparseEntry {
  int row;
  int col;
  Complex value;
};

using SparseMatrix = std::vector<SparseEntry>;

SparseMatrix to_sparse(const Matrix& m) {
  SparseMatrix out;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j) != Complex(0.0, 0.0)) out.push_back({i, j, m(i, j)});
  return out;
}

}  // namespace

Algebra::Algebra(int d) : d_(d) {
  if (d < 2 || d > kMaxDimension)
    throw InvalidDimension("su(d) needs 2 <= d <= " + std::to_string(kMaxDimension) + ", got " +
                           std::to_string(d));

  const int n = size();
  generators_.reserve(n);

  cartan_diag_ = RealMatrix::Zero(d - 1, d);
  for (int q = 0; q < d - 1; ++q) {
    // Cartan diagonal (1,...,1,-m,0,...,0)/sqrt(2 m (m+1) d) with m = q+1 leading ones.
    const double m = q + 1;
    const double scale = 1.0 / std::sqrt(2.0 * m * (m + 1.0) * d);
    for (int j = 0; j <= q; ++j) cartan_diag_(q, j) = scale;
    cartan_diag_(q, q + 1) = -m * scale;
    Matrix t = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) t(j, j) = cartan_diag_(q, j);
    generators_.push_back(std::move(t));
  }

  const double c = 1.0 / std::sqrt(2.0 * d);
  const double s = c / std::sqrt(2.0);
  for (int i = 0; i < d; ++i) {
    for (int k = i + 1; k < d; ++k) {
      Matrix re = Matrix::Zero(d, d);
      re(i, k) = s;
      re(k, i) = s;
      Matrix im = Matrix::Zero(d, d);
      im(i, k) = Complex(0.0, -s);
      im(k, i) = Complex(0.0, s);
      Root r;
      r.i = i;
      r.k = k;
      r.vector = (cartan_diag_.col(i) - cartan_diag_.col(k)).eval();
      r.real_index = static_cast<int>(generators_.size());
      r.imag_index = r.real_index + 1;
      roots_.push_back(std::move(r));
      generators_.push_back(std::move(re));
      generators_.push_back(std::move(im));
    }
  }

  // f_ABC = Im(coefficient of [T_A, T_B] along T_C), since [T_A, T_B] = i f_ABC T_C.
  // The sparse products keep this O(d^5) rather than O(d^9).
  std::vector<SparseMatrix> sparse;
  sparse.reserve(n);
  for (const Matrix& g : generators_) sparse.push_back(to_sparse(g));

  f_rows_.assign(n, {});
  std::vector<Complex> coeff(n);
  std::vector<int> touched;
  std::vector<char> is_touched(n, 0);
  const double sqrt_d = std::sqrt(static_cast<double>(d));

  auto add = [&](int idx, Complex v) {
    if (!is_touched[idx]) {
      is_touched[idx] = 1;
      touched.push_back(idx);
      coeff[idx] = 0.0;
    }
    coeff[idx] += v;
  };
  // Projects the matrix unit v e_i e_k^T onto the basis, accumulating coefficients.
  auto project_entry = [&](int i, int k, Complex v) {
    if (i == k) {
      for (int q = std::max(0, i - 1); q < d - 1; ++q) add(q, 2.0 * d * cartan_diag_(q, i) * v);
    } else {
      const int lo = std::min(i, k);
      const int hi = std::max(i, k);
      const int off = pair_offset(lo, hi);
      add(off, sqrt_d * v);
      // i sqrt(d) (X_lo,hi - X_hi,lo)
      add(off + 1, (i == lo ? 1.0 : -1.0) * Complex(0.0, sqrt_d) * v);
    }
  };

  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (a < d - 1 && b < d - 1) continue;  // Cartan generators commute
      touched.clear();
      for (const auto& x : sparse[a])
        for (const auto& y : sparse[b]) {
          if (x.col == y.row) project_entry(x.row, y.col, x.value * y.value);
          if (y.col == x.row) project_entry(y.row, x.col, -y.value * x.value);
        }
      for (int cidx : touched) {
        is_touched[cidx] = 0;
        const double v = coeff[cidx].imag();
        if (std::abs(v) < kStructureCutoff) continue;
        f_rows_[a].push_back({b, cidx, v});
        f_rows_[b].push_back({a, cidx, -v});
      }
    }
  }
  for (auto& row : f_rows_)
    std::sort(row.begin(), row.end(), [](const StructureEntry& x, const StructureEntry& y) {
      return x.b != y.b ? x.b < y.b : x.c < y.c;
    });
}

int Algebra::pair_offset(int i, int k) const {
  const int pair = i * (2 * d_ - i - 1) / 2 + (k - i - 1);
  return (d_ - 1) + 2 * pair;
}

const Matrix& Algebra::generator(int a) const {
  if (a < 0 || a >= size()) throw IndexOutOfRange("generator index " + std::to_string(a) + " out of range");
  return generators_[a];
}

std::span<const StructureEntry> Algebra::f_row(int a) const {
  if (a < 0 || a >= size()) throw IndexOutOfRange("generator index " + std::to_string(a) + " out of range");
  return f_rows_[a];
}

double Algebra::f(int a, int b, int c) const {
  const auto row = f_row(a);
  auto it = std::lower_bound(row.begin(), row.end(), std::pair{b, c}, [](const StructureEntry& e, std::pair<int, int> key) {
    return e.b != key.first ? e.b < key.first : e.c < key.second;
  });
  if (it != row.end() && it->b == b && it->c == c) return it->value;
  return 0.0;
}

std::size_t Algebra::structure_nonzeros() const {
  std::size_t total = 0;
  for (const auto& row : f_rows_) total += row.size();
  return total;
}

Matrix Algebra::adjoint_generator(int a) const {
  Matrix m = Matrix::Zero(size(), size());
  for (const auto& e : f_row(a)) m(e.b, e.c) = Complex(0.0, -e.value);
  return m;
}

Matrix Algebra::adjoint_cartan(const RealVector& v) const {
  if (v.size() != rank()) throw DimensionMismatch("Cartan vector must have d-1 components");
  Matrix m = Matrix::Zero(size(), size());
  for (int q = 0; q < rank(); ++q)
    for (const auto& e : f_rows_[q]) m(e.b, e.c) += Complex(0.0, -v(q) * e.value);
  return m;
}

const Root& Algebra::root(int index) const {
  if (index < 0 || index >= static_cast<int>(roots_.size()))
    throw IndexOutOfRange("root index " + std::to_string(index) + " out of range");
  return roots_[index];
}

int Algebra::root_index(int i, int k) const {
  if (i < 0 || k < 0 || i >= d_ || k >= d_ || i >= k)
    throw IndexOutOfRange("root (i, k) needs 0 <= i < k < d");
  return (pair_offset(i, k) - (d_ - 1)) / 2;
}

RealVector Algebra::fundamental_weight(int i) const {
  if (i < 0 || i >= d_) throw IndexOutOfRange("weight index " + std::to_string(i) + " out of range");
  return cartan_diag_.col(i);
}

RealVector Algebra::magnetic_weight(int i) const { return 2.0 * d_ * fundamental_weight(i); }

Vector Algebra::ladder_components(int root_idx) const {
  const Root& r = root(root_idx);
  Vector e = Vector::Zero(size());
  e(r.real_index) = 1.0 / std::sqrt(2.0);
  e(r.imag_index) = Complex(0.0, 1.0 / std::sqrt(2.0));
  return e;
}

Vector Algebra::complex_coefficients(const Matrix& x) const {
  if (x.rows() != d_ || x.cols() != d_) throw DimensionMismatch("matrix does not match algebra dimension");
  Vector c(size());
  for (int q = 0; q < rank(); ++q) {
    Complex s = 0.0;
    for (int j = 0; j <= q + 1; ++j) s += cartan_diag_(q, j) * x(j, j);
    c(q) = 2.0 * d_ * s;
  }
  const double sqrt_d = std::sqrt(static_cast<double>(d_));
  for (const Root& r : roots_) {
    c(r.real_index) = sqrt_d * (x(r.i, r.k) + x(r.k, r.i));
    c(r.imag_index) = Complex(0.0, sqrt_d) * (x(r.i, r.k) - x(r.k, r.i));
  }
  return c;
}

RealVector Algebra::coefficients(const Matrix& x) const { return complex_coefficients(x).real(); }

Matrix Algebra::from_coefficients(const RealVector& c) const {
  if (c.size() != size()) throw DimensionMismatch("coefficient vector must have d^2-1 components");
  Matrix m = Matrix::Zero(d_, d_);
  for (int a = 0; a < size(); ++a) m += c(a) * generators_[a];
  return m;
}

double Algebra::inner(const Matrix& x, const Matrix& y) const { return coefficients(x).dot(coefficients(y)); }

Matrix Algebra::cartan_combination(const RealVector& v) const {
  if (v.size() != rank()) throw DimensionMismatch("Cartan vector must have d-1 components");
  Matrix m = Matrix::Zero(d_, d_);
  for (int j = 0; j < d_; ++j) m(j, j) = v.dot(cartan_diag_.col(j));
  return m;
}

CenterMatch center_element(const Algebra& algebra, const RealVector& beta) {
  const int d = algebra.dim();
  const Matrix e = linalg::expi_hermitian(algebra.cartan_combination(beta), kTwoPi);
  CenterMatch best{0, std::numeric_limits<double>::infinity()};
  for (int z = 0; z < d; ++z) {
    const Complex phase = std::exp(kI * (kTwoPi * z / d));
    const double r = (e - phase * Matrix::Identity(d, d)).norm();
    if (r < best.residual) best = {z, r};
  }
  return best;
}

std::array<Matrix, 3> su2_triplet(const Algebra& algebra, int root_index) {
  const Root& r = algebra.root(root_index);
  const double norm2 = r.vector.squaredNorm();
  const double norm = std::sqrt(norm2);
  return {algebra.cartan_combination(r.vector) / norm2, algebra.generator(r.real_index) / norm,
          algebra.generator(r.imag_index) / norm};
}

int signed_center_label(int z, int d) {
  int m = ((z % d) + d) % d;
  if (2 * m > d) m -= d;
  return m;
}

}  // namespace qudit
