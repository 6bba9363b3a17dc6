#include "qudit/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qudit/errors.hpp"
#include "qudit/numerics.hpp"

namespace qudit {
namespace {

constexpr double kUnitTolerance = 1e-9;
constexpr double kClosureTolerance = 1e-7;
constexpr double kMaxStep = 0.1;
constexpr double kPivotFloor = 1e-8;

void check_special_unitary(const Matrix& s, const char* what) {
  const double unit = linalg::unitarity_residual(s);
  const double det = std::abs(s.determinant() - Complex(1.0, 0.0));
  if (unit > kUnitTolerance || det > kUnitTolerance)
    throw NonUnitary(std::string(what) + " is not in SU(d) (unitarity " + std::to_string(unit) + ", det " +
                     std::to_string(det) + ")");
}

Matrix center(int z, int d) { return std::exp(kI * (kTwoPi * z / d)) * Matrix::Identity(d, d); }

std::vector<double> merge_breakpoints(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  std::vector<double> out;
  for (double t : a)
    if (out.empty() || t - out.back() > 1e-12 * std::max(1.0, std::abs(t))) out.push_back(t);
  return out;
}

int wrap_class(int z, int d) { return ((z % d) + d) % d; }

}  // namespace

Profile linear_profile(double duration) {
  return {[duration](double t) { return t / duration; }, [duration](double) { return 1.0 / duration; }};
}

Profile cosine_ramp(double duration) {
  return {[duration](double t) { return 0.5 * (1.0 - std::cos(kPi * t / duration)); },
          [duration](double t) { return 0.5 * kPi / duration * std::sin(kPi * t / duration); }};
}

Profile fourier_loop(std::vector<double> coefficients, double duration) {
  auto value = [coefficients, duration](double t) {
    double s = 0.0;
    for (std::size_t m = 0; m < coefficients.size(); ++m) s += coefficients[m] * std::sin(kPi * (m + 1.0) * t / duration);
    return s;
  };
  auto derivative = [coefficients, duration](double t) {
    double s = 0.0;
    for (std::size_t m = 0; m < coefficients.size(); ++m) {
      const double k = kPi * (m + 1.0) / duration;
      s += coefficients[m] * k * std::cos(k * t);
    }
    return s;
  };
  return {value, derivative};
}

Profile scaled(Profile p, double factor) {
  return {[v = p.value, factor](double t) { return factor * v(t); },
          [dv = p.derivative, factor](double t) { return factor * dv(t); }};
}

// ---------------------------------------------------------------------------

ExpFactor::ExpFactor(const Matrix& generator, Profile angle)
    : exp_(linalg::HermitianExponential(generator)), angle_(std::move(angle)) {}

ExpFactor::ExpFactor(Matrix constant) : constant_(std::move(constant)) {}

Matrix ExpFactor::value(double t) const { return exp_ ? exp_->at(angle_.value(t)) : constant_; }

Matrix ExpFactor::derivative(double t, const Matrix& value) const {
  if (!exp_) return Matrix::Zero(constant_.rows(), constant_.cols());
  return (kI * angle_.derivative(t)) * (exp_->generator() * value);
}

ProductCurve::ProductCurve(int d, double duration, std::vector<ExpFactor> factors)
    : d_(d), duration_(duration), factors_(std::move(factors)) {
  if (!(duration > 0.0)) throw DomainError("path duration must be positive");
}

CurvePoint ProductCurve::at(double t) const {
  const std::size_t n = factors_.size();
  if (n == 0) return {Matrix::Identity(d_, d_), Matrix::Zero(d_, d_)};
  std::vector<Matrix> values(n);
  std::vector<Matrix> derivs(n);
  for (std::size_t k = 0; k < n; ++k) {
    values[k] = factors_[k].value(t);
    derivs[k] = factors_[k].derivative(t, values[k]);
  }
  // prefix[k] = F_0 ... F_{k-1}, suffix[k] = F_{k+1} ... F_{n-1}
  std::vector<Matrix> suffix(n);
  suffix[n - 1] = Matrix::Identity(d_, d_);
  for (std::size_t k = n - 1; k > 0; --k) suffix[k - 1] = values[k] * suffix[k];
  Matrix prefix = Matrix::Identity(d_, d_);
  Matrix deriv = Matrix::Zero(d_, d_);
  for (std::size_t k = 0; k < n; ++k) {
    deriv += prefix * derivs[k] * suffix[k];
    prefix = prefix * values[k];
  }
  return {prefix, deriv};
}

// ---------------------------------------------------------------------------

SampledCurve::SampledCurve(double duration, std::vector<Matrix> samples)
    : duration_(duration), samples_(std::move(samples)) {
  if (!(duration > 0.0)) throw DomainError("path duration must be positive");
  if (samples_.size() < 5) throw ShapeError("a sampled path needs at least 5 samples");
  const auto d = samples_.front().rows();
  for (const Matrix& s : samples_) {
    if (s.rows() != d || s.cols() != d) throw ShapeError("path samples must all be d x d");
    check_special_unitary(s, "path sample");
  }
  const double h = duration_ / static_cast<double>(samples_.size() - 1);
  derivatives_ = numerics::derivative4(samples_, h);
  logs_.reserve(samples_.size() - 1);
  for (std::size_t i = 0; i + 1 < samples_.size(); ++i)
    logs_.push_back(linalg::log_unitary(samples_[i].adjoint() * samples_[i + 1]));
}

CurvePoint SampledCurve::at(double t) const {
  const std::size_t cells = samples_.size() - 1;
  const double h = duration_ / static_cast<double>(cells);
  const double x = std::clamp(t / h, 0.0, static_cast<double>(cells));
  std::size_t i = std::min(static_cast<std::size_t>(x), cells - 1);
  const double s = x - static_cast<double>(i);
  if (s == 0.0) return {samples_[i], derivatives_[i]};
  if (s == 1.0) return {samples_[i + 1], derivatives_[i + 1]};
  const Matrix step = linalg::expi_hermitian(-kI * logs_[i], 1.0 * s);
  return {samples_[i] * step, (1.0 - s) * derivatives_[i] + s * derivatives_[i + 1]};
}

// ---------------------------------------------------------------------------

ConcatenatedCurve::ConcatenatedCurve(std::vector<CurvePtr> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw DomainError("a composite path needs at least one segment");
  const int d = pieces_.front()->dim();
  starts_.push_back(0.0);
  Matrix current = pieces_.front()->at(0.0).value;
  for (const CurvePtr& p : pieces_) {
    if (p->dim() != d) throw DimensionMismatch("composite segments have different dimensions");
    const Matrix rebase = p->at(0.0).value.adjoint() * current;
    rebase_.push_back(rebase);
    current = p->at(p->duration()).value * rebase;
    starts_.push_back(starts_.back() + p->duration());
  }
}

CurvePoint ConcatenatedCurve::at(double t) const {
  std::size_t k = 0;
  while (k + 1 < pieces_.size() && t >= starts_[k + 1]) ++k;
  CurvePoint p = pieces_[k]->at(t - starts_[k]);
  return {p.value * rebase_[k], p.derivative * rebase_[k]};
}

std::vector<double> ConcatenatedCurve::breakpoints() const {
  std::vector<double> out;
  for (std::size_t k = 0; k < pieces_.size(); ++k)
    for (double b : pieces_[k]->breakpoints()) out.push_back(starts_[k] + b);
  return merge_breakpoints(out, {});
}

// ---------------------------------------------------------------------------

TimeWarp quadratic_warp(double duration) {
  return {duration, [duration](double s) { return s * s / duration; }, [duration](double s) { return 2.0 * s / duration; },
          [duration](double t) { return std::sqrt(std::max(0.0, t * duration)); }};
}

WarpedCurve::WarpedCurve(CurvePtr base, TimeWarp warp) : base_(std::move(base)), warp_(std::move(warp)) {
  if (std::abs(warp_.value(warp_.duration) - base_->duration()) > 1e-9 * base_->duration() ||
      std::abs(warp_.value(0.0)) > 1e-12)
    throw DomainError("time warp must map [0, duration] onto the base path interval");
}

CurvePoint WarpedCurve::at(double t) const {
  CurvePoint p = base_->at(std::clamp(warp_.value(t), 0.0, base_->duration()));
  p.derivative *= warp_.derivative(t);
  return p;
}

std::vector<double> WarpedCurve::breakpoints() const {
  std::vector<double> out;
  for (double b : base_->breakpoints()) out.push_back(warp_.inverse(b));
  out.front() = 0.0;
  out.back() = warp_.duration;
  return out;
}

CurvePtr identity_curve(int d, double duration) {
  return std::make_shared<ProductCurve>(d, duration, std::vector<ExpFactor>{});
}

// ---------------------------------------------------------------------------

EvolutionPath::EvolutionPath(int d, CurvePtr first, CurvePtr second, std::array<std::optional<int>, 2> closure)
    : d_(d), duration_(0.0), curves_{std::move(first), std::move(second)}, closure_(closure) {
  if (!curves_[0] && !curves_[1]) throw DomainError("a path needs at least one evolving side");
  for (int k = 0; k < 2; ++k) {
    const CurvePtr& c = curves_[k];
    if (!c) {
      if (closure_[k]) throw DomainError("closure class declared for a side that does not evolve");
      continue;
    }
    if (c->dim() != d) throw DimensionMismatch("path dimension differs from d");
    if (duration_ == 0.0) duration_ = c->duration();
    if (std::abs(c->duration() - duration_) > 1e-12 * duration_)
      throw DomainError("both sides of a path must share one duration");
    const Matrix s0 = c->at(0.0).value;
    const Matrix s1 = c->at(c->duration()).value;
    check_special_unitary(s0, "path start");
    check_special_unitary(s1, "path end");
    if (closure_[k]) {
      closure_[k] = wrap_class(*closure_[k], d);
      const double r = (s1 - center(*closure_[k], d) * s0).norm();
      if (r > kClosureTolerance)
        throw NonCyclicPath("path does not close on the declared center class (residual " + std::to_string(r) + ")");
    }
  }
}

EvolutionPath EvolutionPath::single(CurvePtr curve, Side side, std::optional<int> closure) {
  const int d = curve->dim();
  switch (side) {
    case Side::first:
      return EvolutionPath(d, curve, nullptr, {closure, std::nullopt});
    case Side::second:
      return EvolutionPath(d, nullptr, curve, {std::nullopt, closure});
    case Side::both:
      break;
  }
  return EvolutionPath(d, curve, curve, {closure, closure});
}

Side EvolutionPath::side() const {
  if (curves_[0] && curves_[1]) return Side::both;
  return curves_[0] ? Side::first : Side::second;
}

CurvePoint EvolutionPath::at(int k, double t) const {
  if (!curves_[k]) return {Matrix::Identity(d_, d_), Matrix::Zero(d_, d_)};
  return curves_[k]->at(t);
}

std::optional<int> EvolutionPath::closure_class() const {
  int z = 0;
  for (int k = 0; k < 2; ++k) {
    if (!curves_[k]) continue;
    if (!closure_[k]) return std::nullopt;
    z += *closure_[k];
  }
  return wrap_class(z, d_);
}

std::vector<double> EvolutionPath::breakpoints() const {
  std::vector<double> out;
  for (const CurvePtr& c : curves_)
    if (c) out = merge_breakpoints(out, c->breakpoints());
  return out;
}

std::optional<int> EvolutionPath::fixed_grid() const {
  std::optional<int> grid;
  for (const CurvePtr& c : curves_) {
    if (!c) continue;
    const auto g = c->fixed_grid();
    if (!g) continue;
    if (grid && *grid != *g) throw DimensionMismatch("sampled sides must share one sample count");
    grid = g;
  }
  return grid;
}

EvolutionPath EvolutionPath::reparametrized(const TimeWarp& warp) const {
  std::array<CurvePtr, 2> warped;
  for (int k = 0; k < 2; ++k)
    if (curves_[k]) warped[k] = std::make_shared<WarpedCurve>(curves_[k], warp);
  EvolutionPath out(d_, warped[0], warped[1], closure_);
  out.solid_angle = solid_angle;
  return out;
}

EvolutionPath EvolutionPath::then(const EvolutionPath& next) const {
  if (next.d_ != d_) throw DimensionMismatch("cannot concatenate paths of different dimension");
  std::array<CurvePtr, 2> joined;
  std::array<std::optional<int>, 2> classes;
  for (int k = 0; k < 2; ++k) {
    if (!curves_[k] && !next.curves_[k]) continue;
    CurvePtr a = curves_[k] ? curves_[k] : identity_curve(d_, duration_);
    CurvePtr b = next.curves_[k] ? next.curves_[k] : identity_curve(d_, next.duration_);
    joined[k] = std::make_shared<ConcatenatedCurve>(std::vector<CurvePtr>{a, b});
    const std::optional<int> za = curves_[k] ? closure_[k] : std::optional<int>(0);
    const std::optional<int> zb = next.curves_[k] ? next.closure_[k] : std::optional<int>(0);
    if (za && zb) classes[k] = wrap_class(*za + *zb, d_);
  }
  return EvolutionPath(d_, joined[0], joined[1], classes);
}

// ---------------------------------------------------------------------------

CurvePtr cartan_path(const Algebra& algebra, const RealVector& beta, double duration, const Profile& ramp) {
  const Matrix generator = kTwoPi * algebra.cartan_combination(beta);
  return std::make_shared<ProductCurve>(algebra.dim(), duration, std::vector<ExpFactor>{ExpFactor(generator, ramp)});
}

EvolutionPath cartan_loop(const Algebra& algebra, const RealVector& beta, double duration, Side side) {
  return cartan_loop(algebra, beta, duration, cosine_ramp(duration), side);
}

EvolutionPath cartan_loop(const Algebra& algebra, const RealVector& beta, double duration, const Profile& ramp,
                          Side side) {
  const CenterMatch match = center_element(algebra, beta);
  if (match.residual > 1e-6)
    throw NonCyclicPath("weight is not on the center lattice (residual " + std::to_string(match.residual) + ")");
  return EvolutionPath::single(cartan_path(algebra, beta, duration, ramp), side, match.z);
}

EvolutionPath fundamental_loop(const Algebra& algebra, int weight_index, bool antifundamental, double duration,
                               Side side) {
  RealVector beta = algebra.magnetic_weight(weight_index);
  if (antifundamental) beta = -beta;
  return cartan_loop(algebra, beta, duration, side);
}

Matrix coset_chart(const Algebra& algebra, int root_index, double theta, double phi) {
  const auto triplet = su2_triplet(algebra, root_index);
  const Matrix polar = linalg::expi_hermitian(triplet[2], theta);
  const Matrix turn = linalg::expi_hermitian(triplet[0], phi);
  return turn * polar * turn.adjoint();
}

EvolutionPath coset_loop(const Algebra& algebra, int root_index, double theta, double duration, Side side) {
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("polar angle must lie in [0, pi]");
  if (!(duration > 0.0)) throw DomainError("path duration must be positive");
  const int d = algebra.dim();
  const auto triplet = su2_triplet(algebra, root_index);
  const Matrix& jz = triplet[0];
  const Matrix& jy = triplet[2];
  const double leg = 0.25 * duration;
  const double lap = 0.5 * duration;

  Profile out = scaled(cosine_ramp(leg), theta);
  Profile back = {[theta, leg](double t) { return theta * (1.0 - cosine_ramp(leg).value(t)); },
                  [theta, leg](double t) { return -theta * cosine_ramp(leg).derivative(t); }};
  const Matrix top = linalg::expi_hermitian(jy, theta);
  Profile azimuth = scaled(linear_profile(lap), kTwoPi);

  std::vector<CurvePtr> pieces;
  pieces.push_back(std::make_shared<ProductCurve>(d, leg, std::vector<ExpFactor>{ExpFactor(jy, out)}));
  pieces.push_back(std::make_shared<ProductCurve>(
      d, lap, std::vector<ExpFactor>{ExpFactor(jz, azimuth), ExpFactor(top), ExpFactor(-jz, azimuth)}));
  pieces.push_back(std::make_shared<ProductCurve>(d, leg, std::vector<ExpFactor>{ExpFactor(jy, back)}));
  EvolutionPath path = EvolutionPath::single(std::make_shared<ConcatenatedCurve>(std::move(pieces)), side, 0);
  path.solid_angle = kTwoPi * (1.0 - std::cos(theta));
  path.coset_info = EvolutionPath::CosetLoopInfo{root_index, theta, leg, leg + lap};
  return path;
}

namespace {

std::vector<ExpFactor> random_factors(const Algebra& algebra, std::mt19937_64& rng, double duration,
                                      const RandomPathOptions& options, bool open) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ExpFactor> factors;
  for (int k = 0; k < options.factors; ++k) {
    const Matrix h = linalg::random_hermitian_traceless(algebra.dim(), rng, 1.0);
    std::vector<double> coeffs(options.harmonics);
    for (int m = 0; m < options.harmonics; ++m) coeffs[m] = options.amplitude * gauss(rng) / (m + 1.0);
    Profile p = fourier_loop(coeffs, duration);
    if (open) {
      const double drift = options.amplitude * gauss(rng);
      p = {[v = p.value, drift, duration](double t) { return v(t) + drift * t / duration; },
           [dv = p.derivative, drift, duration](double t) { return dv(t) + drift / duration; }};
    }
    factors.emplace_back(h, p);
  }
  if (options.winding)
    factors.emplace_back(kTwoPi * algebra.cartan_combination(*options.winding), cosine_ramp(duration));
  return factors;
}

}  // namespace

CurvePtr random_smooth_loop(const Algebra& algebra, std::mt19937_64& rng, double duration,
                            const RandomPathOptions& options) {
  if (options.winding) {
    const CenterMatch match = center_element(algebra, *options.winding);
    if (match.residual > 1e-6) throw NonCyclicPath("winding weight is not on the center lattice");
  }
  return std::make_shared<ProductCurve>(algebra.dim(), duration, random_factors(algebra, rng, duration, options, false));
}

CurvePtr random_smooth_path(const Algebra& algebra, std::mt19937_64& rng, double duration,
                            const RandomPathOptions& options) {
  return std::make_shared<ProductCurve>(algebra.dim(), duration, random_factors(algebra, rng, duration, options, true));
}

// ---------------------------------------------------------------------------

namespace {

CurvePoint side_point(const EvolutionPath& path, double t, int side) {
  if (side < 0 || side > 1) throw IndexOutOfRange("side must be 0 (first) or 1 (second)");
  if (!(t >= 0.0 && t <= path.duration()))
    throw DomainError("time " + std::to_string(t) + " outside [0, " + std::to_string(path.duration()) + "]");
  return path.at(side, t);
}

}  // namespace

Matrix connection(const EvolutionPath& path, double t, int side) {
  const CurvePoint p = side_point(path, t, side);
  const Matrix a = -kI * p.derivative * p.value.adjoint();
  const double scale = std::max(1.0, a.norm());
  if ((a - a.adjoint()).norm() > 1e-7 * scale || std::abs(a.trace()) > 1e-7 * scale)
    throw NumericalError("connection is not Hermitian traceless; the path derivative is inconsistent");
  return linalg::hermitian_traceless_part(a);
}

MovingFrame moving_frame(const EvolutionPath& path, const Algebra& algebra, double t, int side) {
  const CurvePoint p = side_point(path, t, side);
  const Matrix& s = p.value;
  const Matrix s_inv = s.adjoint();
  const Matrix g = s_inv * p.derivative;  // S^{-1} dS/dt
  const int n = algebra.size();

  MovingFrame frame;
  frame.n.reserve(n);
  frame.n_dot.reserve(n);
  // <n_B, dn_C/dt> = 2d Tr(T_B [G, T_C]) since S^{-1} (dn_C/dt) S = [G, T_C].
  RealMatrix projections(n, n);
  for (int c = 0; c < n; ++c) {
    const Matrix& tc = algebra.generator(c);
    frame.n.push_back(s * tc * s_inv);
    frame.n_dot.push_back(p.derivative * tc * s_inv - s * tc * s_inv * p.derivative * s_inv);
    projections.col(c) = algebra.coefficients(linalg::commutator(g, tc));
  }
  frame.c = RealVector::Zero(n);
  for (int a = 0; a < n; ++a)
    for (const StructureEntry& e : algebra.f_row(a)) frame.c(a) -= e.value * projections(e.b, e.c);
  return frame;
}

RealVector frame_coefficients(const EvolutionPath& path, const Algebra& algebra, double t, int side) {
  return moving_frame(path, algebra, t, side).c;
}

// ---------------------------------------------------------------------------

double CosetCartanSplit::closure_residual() const {
  const Matrix& last = u.back();
  return (last - Matrix::Identity(last.rows(), last.cols())).norm();
}

CosetCartanSplit split_coset_cartan(const std::vector<Matrix>& samples, const std::vector<double>& times,
                                    const Algebra& algebra) {
  const int d = algebra.dim();
  const std::size_t n = samples.size();
  if (n < 5 || times.size() != n) throw ShapeError("split needs at least 5 samples with matching times");

  CosetCartanSplit out;
  out.times = times;
  out.s = samples;
  out.u.resize(n);
  out.h = RealMatrix::Zero(d - 1, static_cast<Eigen::Index>(n));

  RealVector unwrapped(d);
  RealVector previous_raw(d);
  for (std::size_t i = 0; i < n; ++i) {
    const Matrix& s = samples[i];
    if (s.rows() != d || s.cols() != d) throw DimensionMismatch("path sample dimension differs from algebra");
    if (i > 0 && (s - samples[i - 1]).norm() > kMaxStep)
      throw UndersampledPath("consecutive samples differ by more than 0.1; refine the sampling");
    for (int j = 0; j < d; ++j) {
      const Complex pivot = s(j, j);
      if (std::abs(pivot) < kPivotFloor)
        throw NumericalError("coset pivot S_jj vanishes along the path (chart singularity)");
      const double raw = std::arg(pivot);
      unwrapped(j) = (i == 0) ? raw : unwrapped(j) + linalg::wrap_angle(raw - previous_raw(j));
      previous_raw(j) = raw;
    }
    const RealVector chi = unwrapped.array() - unwrapped.mean();
    Vector phases(d);
    for (int j = 0; j < d; ++j) phases(j) = std::exp(-kI * chi(j));
    out.u[i] = s * phases.asDiagonal();
    for (int q = 0; q < d - 1; ++q) {
      double acc = 0.0;
      for (int j = 0; j < d; ++j) acc += chi(j) * algebra.cartan_diagonal(q, j);
      out.h(q, static_cast<Eigen::Index>(i)) = 2.0 * d * acc;
    }
  }
  out.target_weight = out.h.col(static_cast<Eigen::Index>(n) - 1) / kTwoPi;
  out.pieces.push_back({0, static_cast<int>(n) - 1});
  return out;
}

CosetCartanSplit split_coset_cartan(const UnitaryCurve& curve, const Algebra& algebra, int samples_per_piece) {
  if (samples_per_piece < 5) throw DomainError("split needs at least 5 samples per piece");
  if (curve.dim() != algebra.dim()) throw DimensionMismatch("curve dimension differs from algebra");
  const std::vector<double> breaks = curve.breakpoints();
  std::vector<Matrix> samples;
  std::vector<double> times;
  std::vector<std::pair<int, int>> pieces;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k];
    const double b = breaks[k + 1];
    const int begin = static_cast<int>(samples.size());
    for (int i = 0; i < samples_per_piece; ++i) {
      // The right end is evaluated from inside the piece so one-sided limits stay on it.
      const double t = (i + 1 == samples_per_piece) ? std::nextafter(b, a) : a + (b - a) * i / (samples_per_piece - 1);
      samples.push_back(curve.at(t).value);
      times.push_back(i + 1 == samples_per_piece ? b : t);
    }
    pieces.push_back({begin, static_cast<int>(samples.size()) - 1});
  }
  CosetCartanSplit out = split_coset_cartan(samples, times, algebra);
  out.pieces = std::move(pieces);
  return out;
}

}  // namespace qudit
