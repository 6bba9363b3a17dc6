#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qudit/algebra.hpp"
#include "qudit/evolution.hpp"
#include "qudit/states.hpp"

namespace qudit {

using SurfaceChart = std::function<Matrix(double theta, double phi)>;

/// U(theta, phi) sampled on a cell-centred polar grid theta_i = (i + 1/2) dtheta
/// over [0, theta_max] and a periodic azimuthal grid phi_j = j 2 pi / n_phi.
/// The pole itself is never sampled.
class CosetSurface {
 public:
  /// Throws DomainError for theta_max outside (0, pi] or grids below 16 and
  /// InconsistentSurface when neighbouring nodes differ by more than 0.2.
  CosetSurface(int d, const SurfaceChart& chart, double theta_max, int n_theta, int n_phi);

  int dim() const { return d_; }
  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  double theta_max() const { return theta_max_; }
  double d_theta() const { return theta_max_ / n_theta_; }
  double d_phi() const { return kTwoPi / n_phi_; }
  double theta(int i) const { return (i + 0.5) * d_theta(); }
  double phi(int j) const { return j * d_phi(); }
  const Matrix& u(int i, int j) const { return u_[index(i, j)]; }
  /// The chart on its boundary circle theta = theta_max.
  Matrix boundary(double phi) const { return chart_(theta_max_, phi); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_phi_ + j; }

  /// Root of the embedded su(2) when built by build_surface.
  std::optional<int> root_index;

 private:
  int d_;
  double theta_max_;
  int n_theta_;
  int n_phi_;
  SurfaceChart chart_;
  std::vector<Matrix> u_;
};

/// Spherical cap of the su(2) embedded along a root; for d = 2 the chart is the
/// standard qubit parametrisation and the boundary is the theta_max circle.
CosetSurface build_surface(const Algebra& algebra, int root_index, double theta_max, int n_theta, int n_phi);
CosetSurface build_surface(const Algebra& algebra, int root_index, double theta_max, int grid);
/// U = I everywhere.
CosetSurface constant_surface(int d, double theta_max, int grid);

/// C^A_mu with i U^{-1} d_mu U = C^A_mu T_A, from second-order differences of U.
struct SurfaceConnection {
  RealMatrix c_theta;  ///< (d^2-1) x nodes
  RealMatrix c_phi;
  std::vector<Matrix> du_theta;
  std::vector<Matrix> du_phi;
};

SurfaceConnection surface_connection(const CosetSurface& surface, const Algebra& algebra);

/// max over nodes and A of |d_theta C_phi - d_phi C_theta + f_ABC C^B_theta C^C_phi|.
double flatness_residual(const CosetSurface& surface, const Algebra& algebra);
/// Max over nodes of |i U d_mu U^{-1} + C^A_mu u_A|_F.
double connection_residual(const CosetSurface& surface, const Algebra& algebra);

/// H^q = f_qBC C^B_theta C^C_phi at every node ((d-1) x nodes).
RealMatrix flux_density(const SurfaceConnection& connection, const Algebra& algebra);

/// Phi_q(U) through the cap: -(1/2d) int H^q dtheta dphi, for every q.
RealVector coset_flux(const CosetSurface& surface, const Algebra& algebra);
double coset_flux(const CosetSurface& surface, const Algebra& algebra, int q);

/// int <P, -i [d_theta P, d_phi P]> dtheta dphi with P = U (beta.T) U^{-1},
/// differentiating P on the grid.
double topological_density_flux(const CosetSurface& surface, const Algebra& algebra, const RealVector& beta);

/// max over interior nodes of |<P, -i [d_theta P, d_phi P]> - beta_q H^q|.
double topological_identity_residual(const CosetSurface& surface, const Algebra& algebra, const RealVector& beta);

/// max over nodes, mu, A, B, C of |<u_B, d_mu u_C> + f_ABC C^A_mu|.
double frame_projection_residual(const CosetSurface& surface, const Algebra& algebra);

/// Coset part of the phase from the surface: -(1/2d) sum_j sigma_j^2 int <P_j, -i [dP_j, dP_j]>.
/// With a path, its coset loop must run along the surface boundary (compared
/// through n_q = U T_q U^{-1} to 1e-8), else InconsistentSurface.
double coset_phase_via_monopole(const TwoQuditState& state, const CosetSurface& surface, const Algebra& algebra,
                                const EvolutionPath* path = nullptr, int side = 0);

/// Max boundary mismatch between a coset loop and the surface boundary.
double boundary_mismatch(const CosetSurface& surface, const Algebra& algebra, const EvolutionPath& path, int side = 0);

/// Half the solid angle swept by n with U sigma_3 U^{-1} = n.sigma (d = 2 only).
double qubit_solid_angle(const CosetSurface& surface);

/// Second-order Richardson step from grids N/2 (coarse) and N (fine).
struct RefinedValue {
  double coarse = 0.0;
  double fine = 0.0;
  double extrapolated = 0.0;
};

RefinedValue richardson(double coarse, double fine);

/// Line-integral versus surface-integral comparison for a coset loop of polar
/// angle theta in the su(2) embedded along a root, evaluated on grids N/2 and N.
struct MonopoleCheck {
  int d = 0;
  int root_index = 0;
  double theta = 0.0;
  int grid = 0;
  RealVector sigma;
  double solid_angle = 0.0;
  RealVector line_phi_q;                  ///< Phi_q(U) from the loop
  double line_coset = 0.0;                ///< sum_q b_q Phi_q(U) from the loop
  std::vector<RefinedValue> surface_phi_q;
  RefinedValue surface_coset;             ///< coset_phase_via_monopole
  double analytic = 0.0;                  ///< (sigma_i^2 - sigma_k^2) Omega / 2
  RefinedValue flatness;
  std::optional<RefinedValue> qubit_half_solid_angle;
};

/// grid must be even and at least 32.
MonopoleCheck monopole_check(const TwoQuditState& state, const Algebra& algebra, int root_index, double theta, int grid);

}  // namespace qudit
