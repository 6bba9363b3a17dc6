#include "qudit/monopole.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Geometry>

#include "qudit/errors.hpp"
#include "qudit/numerics.hpp"
#include "qudit/phase.hpp"

namespace qudit {
namespace {

constexpr double kNeighbourLimit = 0.2;
constexpr double kBoundaryTolerance = 1e-8;

// Second-order differences on the (theta, phi) grid: one-sided at the polar
// edges, periodic in phi.
template <typename T, typename Get>
T d_theta_at(const CosetSurface& s, Get&& get, int i, int j) {
  return numerics::derivative2_at<T>([&](std::size_t k) { return get(static_cast<int>(k), j); }, i, s.n_theta(),
                                     s.d_theta());
}

template <typename T, typename Get>
T d_phi_at(const CosetSurface& s, Get&& get, int i, int j) {
  const int n = s.n_phi();
  return (get(i, (j + 1) % n) - get(i, (j + n - 1) % n)) * (0.5 / s.d_phi());
}

std::size_t node_count(const CosetSurface& s) { return static_cast<std::size_t>(s.n_theta()) * s.n_phi(); }

void check_grid(double theta_max, int n_theta, int n_phi) {
  if (!(theta_max > 0.0 && theta_max <= kPi)) throw DomainError("theta_max must lie in (0, pi]");
  if (n_theta < 16 || n_phi < 16) throw DomainError("surface grids need at least 16 x 16 nodes");
}

// Sum over nodes with a fixed order, so the result does not depend on threading.
double grid_integral(const CosetSurface& s, const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total * s.d_theta() * s.d_phi();
}

std::vector<Matrix> projector_field(const CosetSurface& s, const Algebra& algebra, const RealVector& beta) {
  const Matrix p0 = algebra.cartan_combination(beta);
  std::vector<Matrix> p(node_count(s));
  numerics::parallel_for(s.n_theta(), [&](std::size_t i) {
    for (int j = 0; j < s.n_phi(); ++j) {
      const Matrix& u = s.u(static_cast<int>(i), j);
      p[s.index(static_cast<int>(i), j)] = u * p0 * u.adjoint();
    }
  });
  return p;
}

std::vector<double> density_field(const CosetSurface& s, const Algebra& algebra, const RealVector& beta) {
  const std::vector<Matrix> p = projector_field(s, algebra, beta);
  const double two_d = 2.0 * s.dim();
  auto get = [&](int i, int j) -> const Matrix& { return p[s.index(i, j)]; };
  std::vector<double> density(node_count(s));
  numerics::parallel_for(s.n_theta(), [&](std::size_t row) {
    const int i = static_cast<int>(row);
    for (int j = 0; j < s.n_phi(); ++j) {
      const Matrix a = d_theta_at<Matrix>(s, get, i, j);
      const Matrix b = d_phi_at<Matrix>(s, get, i, j);
      // <X, Y> = 2d Tr(XY) for Hermitian traceless X, Y.
      density[s.index(i, j)] = two_d * (get(i, j) * (-kI) * linalg::commutator(a, b)).trace().real();
    }
  });
  return density;
}

}  // namespace

CosetSurface::CosetSurface(int d, const SurfaceChart& chart, double theta_max, int n_theta, int n_phi)
    : d_(d), theta_max_(theta_max), n_theta_(n_theta), n_phi_(n_phi), chart_(chart) {
  check_grid(theta_max, n_theta, n_phi);
  u_.resize(node_count(*this));
  numerics::parallel_for(n_theta_, [&](std::size_t i) {
    for (int j = 0; j < n_phi_; ++j) {
      Matrix m = chart_(theta(static_cast<int>(i)), phi(j));
      if (m.rows() != d_ || m.cols() != d_) throw DimensionMismatch("surface chart returned the wrong dimension");
      u_[index(static_cast<int>(i), j)] = std::move(m);
    }
  });
  for (int i = 0; i < n_theta_; ++i)
    for (int j = 0; j < n_phi_; ++j) {
      const double step_phi = (u(i, j) - u(i, (j + 1) % n_phi_)).norm();
      const double step_theta = i + 1 < n_theta_ ? (u(i, j) - u(i + 1, j)).norm() : 0.0;
      if (std::max(step_phi, step_theta) > kNeighbourLimit)
        throw InconsistentSurface("surface chart is not single valued at this resolution (neighbour distance " +
                                  std::to_string(std::max(step_phi, step_theta)) + ")");
    }
}

CosetSurface build_surface(const Algebra& algebra, int root_index, double theta_max, int n_theta, int n_phi) {
  algebra.root(root_index);  // range check
  check_grid(theta_max, n_theta, n_phi);
  const auto triplet = su2_triplet(algebra, root_index);
  const Matrix jz = triplet[0];
  const linalg::HermitianExponential polar(triplet[2]);
  SurfaceChart chart = [jz, polar](double theta, double phi) {
    const Matrix turn = linalg::expi_hermitian(jz, phi);
    return Matrix(turn * polar.at(theta) * turn.adjoint());
  };
  CosetSurface s(algebra.dim(), chart, theta_max, n_theta, n_phi);
  s.root_index = root_index;
  return s;
}

CosetSurface build_surface(const Algebra& algebra, int root_index, double theta_max, int grid) {
  return build_surface(algebra, root_index, theta_max, grid, grid);
}

CosetSurface constant_surface(int d, double theta_max, int grid) {
  return CosetSurface(d, [d](double, double) { return Matrix(Matrix::Identity(d, d)); }, theta_max, grid, grid);
}

SurfaceConnection surface_connection(const CosetSurface& s, const Algebra& algebra) {
  if (algebra.dim() != s.dim()) throw DimensionMismatch("surface and algebra dimensions differ");
  const std::size_t nodes = node_count(s);
  SurfaceConnection out;
  out.c_theta = RealMatrix(algebra.size(), static_cast<Eigen::Index>(nodes));
  out.c_phi = RealMatrix(algebra.size(), static_cast<Eigen::Index>(nodes));
  out.du_theta.resize(nodes);
  out.du_phi.resize(nodes);
  auto get = [&](int i, int j) -> const Matrix& { return s.u(i, j); };
  numerics::parallel_for(s.n_theta(), [&](std::size_t row) {
    const int i = static_cast<int>(row);
    for (int j = 0; j < s.n_phi(); ++j) {
      const std::size_t k = s.index(i, j);
      out.du_theta[k] = d_theta_at<Matrix>(s, get, i, j);
      out.du_phi[k] = d_phi_at<Matrix>(s, get, i, j);
      const Matrix u_inv = s.u(i, j).adjoint();
      out.c_theta.col(static_cast<Eigen::Index>(k)) = algebra.coefficients(kI * u_inv * out.du_theta[k]);
      out.c_phi.col(static_cast<Eigen::Index>(k)) = algebra.coefficients(kI * u_inv * out.du_phi[k]);
    }
  });
  return out;
}

double flatness_residual(const CosetSurface& s, const Algebra& algebra) {
  const SurfaceConnection c = surface_connection(s, algebra);
  const int n = algebra.size();
  std::vector<double> worst(s.n_theta(), 0.0);
  auto c_phi = [&](int i, int j) -> RealVector { return c.c_phi.col(static_cast<Eigen::Index>(s.index(i, j))); };
  auto c_theta = [&](int i, int j) -> RealVector { return c.c_theta.col(static_cast<Eigen::Index>(s.index(i, j))); };
  numerics::parallel_for(s.n_theta(), [&](std::size_t row) {
    const int i = static_cast<int>(row);
    for (int j = 0; j < s.n_phi(); ++j) {
      RealVector f = d_theta_at<RealVector>(s, c_phi, i, j) - d_phi_at<RealVector>(s, c_theta, i, j);
      const RealVector ct = c_theta(i, j);
      const RealVector cp = c_phi(i, j);
      for (int a = 0; a < n; ++a)
        for (const StructureEntry& e : algebra.f_row(a)) f(a) += e.value * ct(e.b) * cp(e.c);
      worst[row] = std::max(worst[row], f.cwiseAbs().maxCoeff());
    }
  });
  return *std::max_element(worst.begin(), worst.end());
}

double connection_residual(const CosetSurface& s, const Algebra& algebra) {
  const SurfaceConnection c = surface_connection(s, algebra);
  double worst = 0.0;
  for (int i = 0; i < s.n_theta(); ++i)
    for (int j = 0; j < s.n_phi(); ++j) {
      const std::size_t k = s.index(i, j);
      const Matrix& u = s.u(i, j);
      const std::array<std::pair<const Matrix*, RealVector>, 2> dirs = {
          std::pair{&c.du_theta[k], RealVector(c.c_theta.col(static_cast<Eigen::Index>(k)))},
          std::pair{&c.du_phi[k], RealVector(c.c_phi.col(static_cast<Eigen::Index>(k)))}};
      for (const auto& [du, coeffs] : dirs) {
        // i U d(U^{-1}) = -i dU U^{-1}
        const Matrix lhs = -kI * (*du) * u.adjoint();
        const Matrix rhs = -u * algebra.from_coefficients(coeffs) * u.adjoint();
        worst = std::max(worst, (lhs - rhs).norm());
      }
    }
  return worst;
}

RealMatrix flux_density(const SurfaceConnection& c, const Algebra& algebra) {
  const int rank = algebra.rank();
  RealMatrix h = RealMatrix::Zero(rank, c.c_theta.cols());
  for (Eigen::Index k = 0; k < c.c_theta.cols(); ++k)
    for (int q = 0; q < rank; ++q)
      for (const StructureEntry& e : algebra.f_row(q)) h(q, k) += e.value * c.c_theta(e.b, k) * c.c_phi(e.c, k);
  return h;
}

RealVector coset_flux(const CosetSurface& s, const Algebra& algebra) {
  const RealMatrix h = flux_density(surface_connection(s, algebra), algebra);
  RealVector out(algebra.rank());
  for (int q = 0; q < algebra.rank(); ++q) {
    std::vector<double> values(h.cols());
    for (Eigen::Index k = 0; k < h.cols(); ++k) values[k] = h(q, k);
    out(q) = -grid_integral(s, values) / (2.0 * s.dim());
  }
  return out;
}

double coset_flux(const CosetSurface& s, const Algebra& algebra, int q) {
  if (q < 0 || q >= algebra.rank()) throw IndexOutOfRange("Cartan index out of range");
  return coset_flux(s, algebra)(q);
}

double topological_density_flux(const CosetSurface& s, const Algebra& algebra, const RealVector& beta) {
  if (beta.size() != algebra.rank()) throw DimensionMismatch("weight must have d-1 components");
  return grid_integral(s, density_field(s, algebra, beta));
}

double topological_identity_residual(const CosetSurface& s, const Algebra& algebra, const RealVector& beta) {
  const std::vector<double> density = density_field(s, algebra, beta);
  const RealMatrix h = flux_density(surface_connection(s, algebra), algebra);
  double worst = 0.0;
  for (int i = 1; i + 1 < s.n_theta(); ++i)
    for (int j = 0; j < s.n_phi(); ++j) {
      const std::size_t k = s.index(i, j);
      worst = std::max(worst, std::abs(density[k] - beta.dot(h.col(static_cast<Eigen::Index>(k)))));
    }
  return worst;
}

double frame_projection_residual(const CosetSurface& s, const Algebra& algebra) {
  const SurfaceConnection c = surface_connection(s, algebra);
  const int n = algebra.size();
  std::vector<double> worst(s.n_theta(), 0.0);
  numerics::parallel_for(s.n_theta(), [&](std::size_t row) {
    const int i = static_cast<int>(row);
    for (int j = 0; j < s.n_phi(); ++j) {
      const std::size_t k = s.index(i, j);
      const Matrix& u = s.u(i, j);
      const Matrix u_inv = u.adjoint();
      for (int dir = 0; dir < 2; ++dir) {
        const Matrix& du = dir == 0 ? c.du_theta[k] : c.du_phi[k];
        const RealVector coeffs = dir == 0 ? c.c_theta.col(static_cast<Eigen::Index>(k)) : c.c_phi.col(static_cast<Eigen::Index>(k));
        // <u_B, d u_C> with d u_C = dU T_C U^{-1} - U T_C U^{-1} dU U^{-1}
        RealMatrix lhs(n, n);
        for (int cc = 0; cc < n; ++cc) {
          const Matrix& tc = algebra.generator(cc);
          const Matrix du_c = du * tc * u_inv - u * tc * u_inv * du * u_inv;
          lhs.col(cc) = algebra.coefficients(u_inv * du_c * u);
        }
        RealMatrix rhs = RealMatrix::Zero(n, n);
        for (int a = 0; a < n; ++a)
          for (const StructureEntry& e : algebra.f_row(a)) rhs(e.b, e.c) -= e.value * coeffs(a);
        worst[row] = std::max(worst[row], (lhs - rhs).cwiseAbs().maxCoeff());
      }
    }
  });
  return *std::max_element(worst.begin(), worst.end());
}

double boundary_mismatch(const CosetSurface& s, const Algebra& algebra, const EvolutionPath& path, int side) {
  if (!path.coset_info) throw InconsistentSurface("path has no recorded coset circle to compare with the surface boundary");
  if (side < 0 || side > 1 || !path.curve(side)) throw IndexOutOfRange("path side does not evolve");
  const auto& info = *path.coset_info;
  const Matrix start_inv = path.at(side, 0.0).value.adjoint();
  double worst = 0.0;
  for (int j = 0; j < s.n_phi(); ++j) {
    const double t = info.circle_start + (info.circle_end - info.circle_start) * s.phi(j) / kTwoPi;
    const Matrix on_path = start_inv * path.at(side, t).value;
    const Matrix on_surface = s.boundary(s.phi(j));
    // Compare through the Cartan frames n_q = U T_q U^{-1}, blind to the V factor.
    for (int q = 0; q < algebra.rank(); ++q) {
      const Matrix& tq = algebra.generator(q);
      worst = std::max(worst, (on_path * tq * on_path.adjoint() - on_surface * tq * on_surface.adjoint()).norm());
    }
  }
  return worst;
}

double coset_phase_via_monopole(const TwoQuditState& state, const CosetSurface& s, const Algebra& algebra,
                                const EvolutionPath* path, int side) {
  const int d = algebra.dim();
  if (state.dim() != d || s.dim() != d) throw DimensionMismatch("state, surface and algebra dimensions differ");
  if (path) {
    const double mismatch = boundary_mismatch(s, algebra, *path, side);
    if (mismatch > kBoundaryTolerance)
      throw InconsistentSurface("coset loop does not run along the surface boundary (mismatch " +
                                std::to_string(mismatch) + ")");
  }
  const RealVector& sigma = state.sigma();
  double total = 0.0;
  for (int j = 0; j < d; ++j) {
    if (sigma(j) == 0.0) continue;
    total += sigma(j) * sigma(j) * topological_density_flux(s, algebra, algebra.magnetic_weight(j));
  }
  return -total / (2.0 * d);
}

double qubit_solid_angle(const CosetSurface& s) {
  if (s.dim() != 2) throw DimensionMismatch("the qubit solid angle needs d = 2");
  Matrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  sz << 1, 0, 0, -1;
  std::vector<Eigen::Vector3d> n(node_count(s));
  for (int i = 0; i < s.n_theta(); ++i)
    for (int j = 0; j < s.n_phi(); ++j) {
      const Matrix m = s.u(i, j) * sz * s.u(i, j).adjoint();
      n[s.index(i, j)] = {0.5 * (m * sx).trace().real(), 0.5 * (m * sy).trace().real(), 0.5 * (m * sz).trace().real()};
    }
  auto get = [&](int i, int j) -> const Eigen::Vector3d& { return n[s.index(i, j)]; };
  std::vector<double> triple(node_count(s));
  for (int i = 0; i < s.n_theta(); ++i)
    for (int j = 0; j < s.n_phi(); ++j) {
      const Eigen::Vector3d a = d_theta_at<Eigen::Vector3d>(s, get, i, j);
      const Eigen::Vector3d b = d_phi_at<Eigen::Vector3d>(s, get, i, j);
      triple[s.index(i, j)] = get(i, j).dot(a.cross(b));
    }
  // U -> n reverses orientation relative to the (theta, phi) chart.
  return -0.5 * grid_integral(s, triple);
}

RefinedValue richardson(double coarse, double fine) { return {coarse, fine, (4.0 * fine - coarse) / 3.0}; }

MonopoleCheck monopole_check(const TwoQuditState& state, const Algebra& algebra, int root_index, double theta, int grid) {
  if (grid < 32 || grid % 2 != 0) throw DomainError("monopole check needs an even grid of at least 32");
  if (!(theta > 0.0 && theta < kPi)) throw DomainError("polar angle must lie in (0, pi)");
  const int d = algebra.dim();
  if (state.dim() != d) throw DimensionMismatch("state and algebra dimensions differ");
  MonopoleCheck out;
  out.d = d;
  out.root_index = root_index;
  out.theta = theta;
  out.grid = grid;
  out.sigma = state.sigma();

  const EvolutionPath path = coset_loop(algebra, root_index, theta, 1.0);
  out.solid_angle = *path.solid_angle;
  const PhaseReport line = geometric_phase(state, path, algebra);
  out.line_phi_q = line.sides.front().phi_q_u;
  out.line_coset = line.sides.front().coset_part;
  const Root& r = algebra.root(root_index);
  out.analytic = (out.sigma(r.i) * out.sigma(r.i) - out.sigma(r.k) * out.sigma(r.k)) * out.solid_angle / 2.0;

  const CosetSurface coarse = build_surface(algebra, root_index, theta, grid / 2);
  const CosetSurface fine = build_surface(algebra, root_index, theta, grid);
  const RealVector flux_coarse = coset_flux(coarse, algebra);
  const RealVector flux_fine = coset_flux(fine, algebra);
  for (int q = 0; q < algebra.rank(); ++q) out.surface_phi_q.push_back(richardson(flux_coarse(q), flux_fine(q)));
  out.surface_coset = richardson(coset_phase_via_monopole(state, coarse, algebra, &path),
                                 coset_phase_via_monopole(state, fine, algebra, &path));
  out.flatness = {flatness_residual(coarse, algebra), flatness_residual(fine, algebra), 0.0};
  out.flatness.extrapolated = out.flatness.fine;
  if (d == 2) out.qubit_half_solid_angle = richardson(qubit_solid_angle(coarse), qubit_solid_angle(fine));
  return out;
}

}  // namespace qudit
