#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "qudit/algebra.hpp"
#include "qudit/linalg.hpp"

namespace qudit {

/// Real function of time with its derivative.
struct Profile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// u = t / duration.
Profile linear_profile(double duration);
/// (1 - cos(pi t / duration)) / 2, a monotone ramp from 0 to 1 with zero end slopes.
Profile cosine_ramp(double duration);
/// sum_m a_m sin(pi (m+1) t / duration); vanishes at both ends.
Profile fourier_loop(std::vector<double> coefficients, double duration);
/// t * value, useful for constant-rate paths.
Profile scaled(Profile p, double factor);

struct CurvePoint {
  Matrix value;
  Matrix derivative;
};

/// A differentiable curve t -> S(t) in SU(d) on [0, duration].
class UnitaryCurve {
 public:
  virtual ~UnitaryCurve() = default;
  virtual int dim() const = 0;
  virtual double duration() const = 0;
  virtual CurvePoint at(double t) const = 0;
  /// Times where the curve is only piecewise smooth, including 0 and duration.
  virtual std::vector<double> breakpoints() const { return {0.0, duration()}; }
  /// Sample count when the curve is a fixed sample table.
  virtual std::optional<int> fixed_grid() const { return std::nullopt; }
};

using CurvePtr = std::shared_ptr<const UnitaryCurve>;

/// exp(i g(t) h), or a constant matrix when no generator is given.
class ExpFactor {
 public:
  ExpFactor(const Matrix& generator, Profile angle);
  explicit ExpFactor(Matrix constant);

  Matrix value(double t) const;
  Matrix derivative(double t, const Matrix& value) const;

 private:
  std::optional<linalg::HermitianExponential> exp_;
  Profile angle_;
  Matrix constant_;
};

/// Ordered product F_1(t) F_2(t) ... F_n(t) with analytic derivative.
class ProductCurve final : public UnitaryCurve {
 public:
  ProductCurve(int d, double duration, std::vector<ExpFactor> factors);
  int dim() const override { return d_; }
  double duration() const override { return duration_; }
  CurvePoint at(double t) const override;

 private:
  int d_;
  double duration_;
  std::vector<ExpFactor> factors_;
};

/// Uniform sample table on [0, duration]. Values between nodes follow the
/// geodesic S_i exp(s log(S_i^{-1} S_{i+1})); derivatives are fourth-order
/// finite differences, linearly interpolated.
class SampledCurve final : public UnitaryCurve {
 public:
  /// Throws NonUnitary for samples off SU(d) by more than 1e-9, ShapeError for fewer than 5 samples.
  SampledCurve(double duration, std::vector<Matrix> samples);
  int dim() const override { return static_cast<int>(samples_.front().rows()); }
  double duration() const override { return duration_; }
  CurvePoint at(double t) const override;
  std::optional<int> fixed_grid() const override { return static_cast<int>(samples_.size()); }
  const std::vector<Matrix>& samples() const { return samples_; }

 private:
  double duration_;
  std::vector<Matrix> samples_;
  std::vector<Matrix> logs_;
  std::vector<Matrix> derivatives_;
};

/// Pieces run one after another; each piece is rebased so that the whole curve
/// is continuous: S(t) = P_k(t - t_k) P_k(0)^{-1} S(t_k).
class ConcatenatedCurve final : public UnitaryCurve {
 public:
  explicit ConcatenatedCurve(std::vector<CurvePtr> pieces);
  int dim() const override { return pieces_.front()->dim(); }
  double duration() const override { return starts_.back(); }
  CurvePoint at(double t) const override;
  std::vector<double> breakpoints() const override;

 private:
  std::vector<CurvePtr> pieces_;
  std::vector<double> starts_;     // size pieces + 1
  std::vector<Matrix> rebase_;     // P_k(0)^{-1} S(t_k)
};

/// Monotone time change t -> w(t) with w(0) = 0 and w(duration) = base duration.
struct TimeWarp {
  double duration;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<double(double)> inverse;
};

/// s -> tau (s / tau)^2 on a path of duration tau.
TimeWarp quadratic_warp(double duration);

class WarpedCurve final : public UnitaryCurve {
 public:
  WarpedCurve(CurvePtr base, TimeWarp warp);
  int dim() const override { return base_->dim(); }
  double duration() const override { return warp_.duration; }
  CurvePoint at(double t) const override;
  std::vector<double> breakpoints() const override;

 private:
  CurvePtr base_;
  TimeWarp warp_;
};

/// Identity for the whole duration.
CurvePtr identity_curve(int d, double duration);

enum class Side { first, second, both };

/// Local evolution t -> (S1(t), S2(t)); a missing side stays at the identity.
class EvolutionPath {
 public:
  /// Validates dimensions, durations, unitarity at the endpoints and any declared closure classes.
  EvolutionPath(int d, CurvePtr first, CurvePtr second, std::array<std::optional<int>, 2> closure = {});

  static EvolutionPath single(CurvePtr curve, Side side, std::optional<int> closure = std::nullopt);

  int dim() const { return d_; }
  double duration() const { return duration_; }
  Side side() const;
  /// k = 0 first qudit, k = 1 second; null when that side does not evolve.
  const CurvePtr& curve(int k) const { return curves_[k]; }
  /// Point on side k, the identity for a missing side.
  CurvePoint at(int k, double t) const;
  std::optional<int> closure_class(int k) const { return closure_[k]; }
  /// Combined class of the state's phase factor (sum of sides mod d) when every evolving side declares one.
  std::optional<int> closure_class() const;
  std::vector<double> breakpoints() const;
  std::optional<int> fixed_grid() const;

  /// Solid angle of coset loops, recorded by coset_loop.
  std::optional<double> solid_angle;

  /// Where a coset loop runs around its circle; the azimuth grows linearly from
  /// 0 at circle_start to 2 pi at circle_end.
  struct CosetLoopInfo {
    int root_index;
    double theta;
    double circle_start;
    double circle_end;
  };
  std::optional<CosetLoopInfo> coset_info;

  EvolutionPath reparametrized(const TimeWarp& warp) const;
  /// This path followed by `next`; classes add mod d.
  EvolutionPath then(const EvolutionPath& next) const;

 private:
  int d_;
  double duration_;
  std::array<CurvePtr, 2> curves_;
  std::array<std::optional<int>, 2> closure_;
};

/// V(t) = exp(i r(t) 2 pi beta.T), no cyclicity requirement.
CurvePtr cartan_path(const Algebra& algebra, const RealVector& beta, double duration, const Profile& ramp);

/// Cyclic Cartan loop along a lattice weight. Throws NonCyclicPath when
/// exp(i 2 pi beta.T) misses the center by more than 1e-6.
EvolutionPath cartan_loop(const Algebra& algebra, const RealVector& beta, double duration, Side side = Side::first);
EvolutionPath cartan_loop(const Algebra& algebra, const RealVector& beta, double duration, const Profile& ramp,
                          Side side);

/// beta = +beta_i, or -beta_i for the antifundamental.
EvolutionPath fundamental_loop(const Algebra& algebra, int weight_index, bool antifundamental, double duration,
                               Side side = Side::first);

/// Closed coset loop in the su(2) embedded along a root: out along the meridian
/// to polar angle theta, once around the circle of constant theta, back to the
/// pole. Starts and ends at I; records solid_angle = 2 pi (1 - cos theta).
EvolutionPath coset_loop(const Algebra& algebra, int root_index, double theta, double duration,
                         Side side = Side::first);

/// The coset chart point exp(i phi J_z) exp(i theta J_y) exp(-i phi J_z) of the embedded su(2).
Matrix coset_chart(const Algebra& algebra, int root_index, double theta, double phi);

struct RandomPathOptions {
  int factors = 3;
  int harmonics = 3;
  double amplitude = 1.0;
  /// Appends a Cartan loop along this weight so the path closes on a center element.
  std::optional<RealVector> winding;
};

/// Smooth loop with S(0) = I and S(tau) in the center.
CurvePtr random_smooth_loop(const Algebra& algebra, std::mt19937_64& rng, double duration,
                            const RandomPathOptions& options = {});
/// Smooth open path with S(0) = I.
CurvePtr random_smooth_path(const Algebra& algebra, std::mt19937_64& rng, double duration,
                            const RandomPathOptions& options = {});

/// A(t) = i S d(S^{-1})/dt = -i dS/dt S^{-1} for side k. Throws DomainError
/// outside [0, tau] and NumericalError when A is not Hermitian traceless to 1e-7.
Matrix connection(const EvolutionPath& path, double t, int side = 0);

struct MovingFrame {
  std::vector<Matrix> n;      ///< n_A = S T_A S^{-1}
  std::vector<Matrix> n_dot;  ///< time derivatives, product rule
  RealVector c;               ///< C_A = -f_ABC <n_B, dn_C/dt>
};

MovingFrame moving_frame(const EvolutionPath& path, const Algebra& algebra, double t, int side = 0);
RealVector frame_coefficients(const EvolutionPath& path, const Algebra& algebra, double t, int side = 0);

/// S = U V with V = exp(i h_q T_q) diagonal; the diagonal entries of U share one common phase.
struct CosetCartanSplit {
  std::vector<double> times;
  std::vector<Matrix> u;
  std::vector<Matrix> s;
  RealMatrix h;              ///< (d-1) x samples, continuous in t
  RealVector target_weight;  ///< h(tau) / (2 pi)
  /// Sample ranges [begin, end] of the smooth pieces (shared endpoints).
  std::vector<std::pair<int, int>> pieces;
  double piece_spacing(int piece) const { return times[pieces[piece].first + 1] - times[pieces[piece].first]; }
  /// ||U(tau) - I||_F
  double closure_residual() const;
};

inline constexpr int kDefaultSplitSamples = 2049;

/// Samples `samples_per_piece` points on every smooth piece of the curve.
/// Throws UndersampledPath when consecutive samples differ by more than 0.1
/// and NumericalError when a diagonal pivot |S_jj| drops below 1e-8.
CosetCartanSplit split_coset_cartan(const UnitaryCurve& curve, const Algebra& algebra,
                                    int samples_per_piece = kDefaultSplitSamples);
CosetCartanSplit split_coset_cartan(const std::vector<Matrix>& samples, const std::vector<double>& times,
                                    const Algebra& algebra);

}  // namespace qudit
