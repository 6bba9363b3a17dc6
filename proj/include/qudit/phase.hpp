#pragma once

#include <optional>
#include <vector>

#include "qudit/algebra.hpp"
#include "qudit/evolution.hpp"
#include "qudit/numerics.hpp"
#include "qudit/states.hpp"

namespace qudit {

/// How the path matrices act on the initial state.
///  schmidt:       alpha(t) = e^{i phi} S1(0) K1(t) Sigma K2(t)^T S2(0)^T with K = S(0)^{-1} S(t)
///  computational: alpha(t) = S1'(t) alpha(0) S2'(t)^T with S' = S(t) S(0)^{-1}
enum class Frame { schmidt, computational };

struct PhaseOptions {
  Frame frame = Frame::schmidt;
  /// Extra state phase e^{i f(t)}; leaves the geometric phase unchanged.
  std::optional<Profile> gauge;
  numerics::QuadratureOptions quadrature;
  int split_samples = kDefaultSplitSamples;
  /// Split cyclic sides into coset and Cartan factors (Schmidt frame only).
  bool split = true;
};

struct FractionalPhase {
  int z = 0;              ///< 0..d-1
  int signed_z = 0;       ///< representative in (-d/2, d/2]
  double residual = 0.0;  ///< ||S(tau) S(0)^{-1} - e^{2 pi i z/d} I||_F
  bool cyclic = false;    ///< residual <= 1e-4
};

struct SidePhase {
  int side = 0;
  double phi_s = 0.0;          ///< i int Tr(Sigma^2 S^{-1} dS/dt)
  RealVector phi_q;            ///< Phi_q(S) = i int Tr(T_q S^{-1} dS/dt)
  double weighted = 0.0;       ///< sum_q b_q Phi_q(S)
  FractionalPhase closure;
  std::optional<double> phi_g; ///< 2 pi z/d + phi_s, wrapped, for cyclic sides
  bool has_split = false;
  RealVector phi_q_v;          ///< -h_q(tau)/(2d)
  RealVector phi_q_u;          ///< i int Tr(T_q U^{-1} dU/dt)
  RealVector target_weight;    ///< h(tau)/(2 pi)
  double cartan_part = 0.0;    ///< sum_q b_q Phi_q(V)
  double coset_part = 0.0;     ///< sum_q b_q Phi_q(U)
};

struct ConvergenceInfo {
  int intervals = 0;
  int doublings = 0;
  double last_delta = 0.0;
  bool converged = false;
  bool fixed_grid = false;
};

struct PhaseReport {
  double phi_g = 0.0;          ///< wrapped to (-pi, pi]
  double phi_g_raw = 0.0;
  double overlap_arg = 0.0;
  double overlap_modulus = 0.0;
  double dynamical_term = 0.0; ///< i int <psi|dpsi/dt> dt
  std::vector<SidePhase> sides;
  FractionalPhase closure;     ///< class of the overall state phase factor
  ConvergenceInfo convergence;
  RealVector sigma;
};

/// Throws UndefinedOverlapPhase when |<psi(0)|psi(tau)>| < 1e-8 and
/// ConvergenceError (carrying the best phi_g) when refinement stalls.
PhaseReport geometric_phase(const TwoQuditState& state, const EvolutionPath& path, const Algebra& algebra,
                            const PhaseOptions& options = {});

FractionalPhase detect_fractional_phase(const UnitaryCurve& curve);
/// Combined class of both sides (labels add mod d).
FractionalPhase detect_fractional_phase(const EvolutionPath& path);

/// Phi_q(U) from the sampled coset factor (fourth-order differences, Simpson per piece).
RealVector coset_integrals(const CosetCartanSplit& split, const Algebra& algebra);
/// Phi_q(V) = -h_q(tau)/(2d).
RealVector cartan_integrals(const CosetCartanSplit& split, const Algebra& algebra);

/// sum_j sigma_j^2 beta_j|_q Phi_q(V). Throws NonCyclicPath when U(tau) misses I by more than 1e-6.
double cartan_phase_contribution(const CosetCartanSplit& split, const RealVector& sigma, const Algebra& algebra);
/// -2 pi sum_j sigma_j^2 w_j . beta.
double cartan_phase_closed_form(const RealVector& sigma, const RealVector& beta, const Algebra& algebra);

/// |phi_g - phi_g(gauge transformed)| mod 2 pi.
double gauge_transform_check(const TwoQuditState& state, const EvolutionPath& path, const Algebra& algebra,
                             const Profile& gauge, const PhaseOptions& options = {});
/// |phi_g - phi_g(reparametrized)| mod 2 pi.
double reparametrization_check(const TwoQuditState& state, const EvolutionPath& path, const Algebra& algebra,
                               const TimeWarp& warp, const PhaseOptions& options = {});

/// |a - b| on the circle.
double angle_distance(double a, double b);

}  // namespace qudit
