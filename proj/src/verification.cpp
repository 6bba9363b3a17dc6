#include "qudit/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "qudit/algebra.hpp"
#include "qudit/errors.hpp"
#include "qudit/evolution.hpp"
#include "qudit/monopole.hpp"
#include "qudit/phase.hpp"
#include "qudit/states.hpp"
#include "qudit/topology.hpp"

namespace qudit {

namespace {

/// Worst deviation seen so far and where it happened.
struct Worst {
  double value = 0.0;
  std::string where;
  bool broken = false;  // a check with no numeric metric failed
  std::string note;

  void update(double v, const std::string& label) {
    if (!(v <= value)) {
      value = v;
      where = label;
    }
  }
  void fail(const std::string& label) {
    if (!broken) note = label;
    broken = true;
  }
};

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

CriterionResult finish(int id, std::string name, const Worst& worst, double tolerance, std::string extra = {}) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.metric = worst.value;
  r.tolerance = tolerance;
  r.passed = !worst.broken && worst.value <= tolerance;
  std::ostringstream os;
  if (!worst.where.empty()) os << "worst at " << worst.where;
  if (worst.broken) os << (os.tellp() > 0 ? "; " : "") << "failed: " << worst.note;
  if (!extra.empty()) os << (os.tellp() > 0 ? "; " : "") << extra;
  r.detail = os.str();
  return r;
}

std::vector<int> dims(std::initializer_list<int> wanted, int d_max) {
  std::vector<int> out;
  for (int d : wanted)
    if (d <= d_max) out.push_back(d);
  return out;
}

std::string label(int d, const std::string& rest) { return "d=" + std::to_string(d) + " " + rest; }

TwoQuditState random_state(int d, std::mt19937_64& rng) { return make_state(linalg::random_complex(d, rng)); }

TwoQuditState maximally_entangled(int d) {
  return make_state(Matrix::Identity(d, d) / std::sqrt(static_cast<double>(d)));
}

// ---------------------------------------------------------------------------

CriterionResult algebra_identities(const VerifyOptions& options) {
  Worst worst;
  for (int d : dims({2, 3, 4, 5, 6}, options.d_max)) {
    const Algebra alg(d);
    const int n = alg.size();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const Complex tr = (alg.generator(a) * alg.generator(b)).trace();
        const double expect = a == b ? 1.0 / (2.0 * d) : 0.0;
        worst.update(std::abs(tr - expect), label(d, "Tr(T_A T_B)"));
      }
    std::vector<double> dense(static_cast<std::size_t>(n) * n * n, 0.0);
    for (int a = 0; a < n; ++a)
      for (const StructureEntry& e : alg.f_row(a)) dense[(static_cast<std::size_t>(a) * n + e.b) * n + e.c] = e.value;
    for (int a = 0; a < n; ++a)
      for (int e = 0; e < n; ++e) {
        double sum = 0.0;
        for (int bc = 0; bc < n * n; ++bc)
          sum += dense[static_cast<std::size_t>(a) * n * n + bc] * dense[static_cast<std::size_t>(e) * n * n + bc];
        worst.update(std::abs(sum - (a == e ? 1.0 : 0.0)), label(d, "f_ABC f_DBC"));
      }
    RealVector total = RealVector::Zero(d - 1);
    for (int i = 0; i < d; ++i) {
      const RealVector wi = alg.fundamental_weight(i);
      total += wi;
      for (int j = 0; j < d; ++j) {
        const double expect = i == j ? (d - 1.0) / (2.0 * d * d) : -1.0 / (2.0 * d * d);
        worst.update(std::abs(wi.dot(alg.fundamental_weight(j)) - expect), label(d, "w_i.w_j"));
      }
      const Matrix m = alg.adjoint_cartan(alg.magnetic_weight(i));
      worst.update((m * m * m - m).cwiseAbs().maxCoeff(), label(d, "(beta.M)^3"));
    }
    worst.update(total.cwiseAbs().maxCoeff(), label(d, "sum w_i"));
  }
  return finish(1, "algebra identities", worst, 1e-10);
}

CriterionResult fractional_phases(const VerifyOptions& options) {
  Worst worst;
  for (int d : dims({2, 3, 4, 5}, options.d_max)) {
    const Algebra alg(d);
    const TwoQuditState mes = maximally_entangled(d);
    for (int i = 0; i < d; ++i)
      for (bool anti : {false, true}) {
        const std::string where = label(d, (anti ? "anti-" : "") + std::to_string(i + 1));
        const PhaseReport r = geometric_phase(mes, fundamental_loop(alg, i, anti, 1.0), alg);
        const int expect_z = anti ? 1 : d - 1;
        if (!r.closure.cyclic || r.closure.z != expect_z) worst.fail(where + " wrong center class");
        worst.update(angle_distance(r.phi_g, (anti ? kTwoPi : -kTwoPi) / d), where);
      }
  }
  return finish(2, "fractional phases", worst, 1e-6);
}

CriterionResult weight_paths(const VerifyOptions& options) {
  Worst worst;
  std::mt19937_64 rng(options.seed + 3);
  for (int d : dims({2, 3, 4}, options.d_max)) {
    const Algebra alg(d);
    std::uniform_int_distribution<int> pick(0, d - 1);
    for (int trial = 0; trial < 20; ++trial) {
      const TwoQuditState state = random_state(d, rng);
      const int i = pick(rng);
      const double s2 = state.sigma()(i) * state.sigma()(i);
      for (bool anti : {false, true}) {
        const std::string where = label(d, "trial " + std::to_string(trial) + (anti ? " -beta_" : " +beta_") +
                                                std::to_string(i + 1));
        const PhaseReport r = geometric_phase(state, fundamental_loop(alg, i, anti, 1.0), alg);
        worst.update(angle_distance(r.phi_g, (anti ? kTwoPi : -kTwoPi) * s2), where);
        worst.update(std::abs(r.sides.front().coset_part), where + " coset part");
      }
    }
  }
  return finish(3, "weight-path closed form", worst, 1e-6, "pairing +beta_i -> -2 pi sigma_i^2, -beta_i -> +2 pi sigma_i^2");
}

CriterionResult separable_null(const VerifyOptions& options) {
  Worst worst;
  std::mt19937_64 rng(options.seed + 4);
  std::uniform_int_distribution<int> winding(-2, 2);
  for (int d : dims({2, 3, 4, 5}, options.d_max)) {
    const Algebra alg(d);
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix a = linalg::random_complex(d, rng).col(0);
      const Matrix b = linalg::random_complex(d, rng).col(0);
      const TwoQuditState state = make_state(a * b.transpose());
      std::vector<RealVector> weights;
      for (int i = 0; i < d; ++i) {
        weights.push_back(alg.magnetic_weight(i));
        weights.push_back(-alg.magnetic_weight(i));
      }
      RealVector mixed = RealVector::Zero(d - 1);
      for (int i = 0; i < d; ++i) mixed += winding(rng) * alg.magnetic_weight(i);
      if (mixed.norm() > 0.0) weights.push_back(mixed);
      for (std::size_t w = 0; w < weights.size(); ++w) {
        const Side side = trial % 2 == 0 ? Side::first : Side::both;
        const PhaseReport r = geometric_phase(state, cartan_loop(alg, weights[w], 1.0, side), alg);
        worst.update(angle_distance(r.phi_g, 0.0), label(d, "trial " + std::to_string(trial) + " weight " + std::to_string(w)));
      }
    }
  }
  return finish(4, "separable null", worst, 1e-6);
}

CriterionResult qubit_solid_angle_check(const VerifyOptions& options) {
  Worst worst;
  const Algebra alg(2);
  Matrix product = Matrix::Zero(2, 2);
  product(0, 0) = 1.0;
  const TwoQuditState state = make_state(product);
  std::string raw;
  for (double theta : {kPi / 6, kPi / 3, kPi / 2, 2 * kPi / 3}) {
    const double expect = kPi * (1.0 - std::cos(theta));
    const std::string where = "theta=" + fmt("%.4f", theta);
    const PhaseReport r = geometric_phase(state, coset_loop(alg, 0, theta, 1.0), alg);
    worst.update(angle_distance(r.phi_g, expect), where + " line");
    const MonopoleCheck check = monopole_check(state, alg, 0, theta, options.monopole_grid);
    worst.update(std::abs(check.qubit_half_solid_angle->extrapolated - expect), where + " surface");
    raw = fmt("%.2e", std::abs(check.qubit_half_solid_angle->fine - expect));
  }
  return finish(5, "qubit solid angle", worst, 1e-5, "raw surface error at theta=2pi/3: " + raw);
}

CriterionResult monopole_formula(const VerifyOptions& options) {
  Worst worst;
  double raw = 0.0;
  std::mt19937_64 rng(options.seed + 6);
  for (int d : dims({2, 3, 4}, options.d_max)) {
    const Algebra alg(d);
    std::vector<int> roots{alg.root_index(0, d - 1)};
    if (d > 2) roots.push_back(alg.root_index(0, 1));
    if (d > 3) roots.push_back(alg.root_index(1, 3));
    for (int root : roots)
      for (double theta : {kPi / 3, 2 * kPi / 3}) {
        const TwoQuditState state = random_state(d, rng);
        const MonopoleCheck c = monopole_check(state, alg, root, theta, options.monopole_grid);
        const std::string where = label(d, "root " + std::to_string(root + 1) + " theta=" + fmt("%.4f", theta));
        worst.update(std::abs(c.surface_coset.extrapolated - c.line_coset), where + " surface-line");
        worst.update(std::abs(c.surface_coset.extrapolated - c.analytic), where + " surface-analytic");
        worst.update(std::abs(c.line_coset - c.analytic), where + " line-analytic");
        raw = std::max(raw, std::abs(c.surface_coset.fine - c.analytic));
      }
  }
  return finish(6, "monopole formula", worst, 1e-4, "worst unextrapolated surface error " + fmt("%.2e", raw));
}

CriterionResult flatness_and_stokes(const VerifyOptions& options) {
  Worst worst;
  double min_order = 1e300;
  std::ostringstream orders;
  for (int d : dims({2, 3}, options.d_max)) {
    const Algebra alg(d);
    const int root = alg.root_index(0, d - 1);
    double previous = 0.0;
    orders << "d=" << d << " residuals";
    for (int grid = 32; grid <= options.monopole_grid; grid *= 2) {
      const double r = flatness_residual(build_surface(alg, root, kPi / 3, grid), alg);
      orders << ' ' << fmt("%.2e", r);
      if (previous > 0.0) min_order = std::min(min_order, std::log2(previous / r));
      previous = r;
    }
    orders << "; ";
  }
  const bool order_ok = min_order >= 1.8;

  std::mt19937_64 rng(options.seed + 7);
  double raw = 0.0;
  for (int d : dims({2, 3, 4}, options.d_max)) {
    const Algebra alg(d);
    const MonopoleCheck c = monopole_check(random_state(d, rng), alg, alg.root_index(0, d - 1), kPi / 2, options.monopole_grid);
    for (int q = 0; q < d - 1; ++q) {
      worst.update(std::abs(c.surface_phi_q[q].extrapolated - c.line_phi_q(q)), label(d, "Phi_" + std::to_string(q + 1)));
      raw = std::max(raw, std::abs(c.surface_phi_q[q].fine - c.line_phi_q(q)));
    }
  }
  if (!order_ok) worst.fail("flatness order " + fmt("%.3f", min_order) + " below 1.8");
  return finish(7, "flatness and Stokes", worst, 1e-4,
                orders.str() + "min observed order " + fmt("%.3f", min_order) + "; worst unextrapolated Stokes gap " +
                    fmt("%.2e", raw));
}

/// s + a tau sin(2 pi s / tau) / (2 pi) with |a| < 1.
TimeWarp sine_warp(double duration, double a) {
  const double k = kTwoPi / duration;
  auto value = [a, k](double s) { return s + a * std::sin(k * s) / k; };
  auto inverse = [value, duration](double t) {
    double lo = 0.0;
    double hi = duration;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * duration; ++it) {
      const double mid = 0.5 * (lo + hi);
      (value(mid) < t ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  return {duration, value, [a, k](double s) { return 1.0 + a * std::cos(k * s); }, inverse};
}

CriterionResult gauge_and_reparametrization(const VerifyOptions& options) {
  Worst worst;
  const int d = std::min(3, options.d_max);
  const Algebra alg(d);
  std::mt19937_64 rng(options.seed + 8);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(-0.9, 0.9);
  RandomPathOptions path_options;
  path_options.amplitude = 0.6;
  const double tau = 1.0;
  for (int trial = 0; trial < 50; ++trial) {
    const TwoQuditState state = random_state(d, rng);
    const EvolutionPath path(d, random_smooth_path(alg, rng, tau, path_options),
                             trial % 2 == 0 ? random_smooth_path(alg, rng, tau, path_options) : nullptr);
    const std::vector<double> coeffs{3 * gauss(rng), gauss(rng), gauss(rng)};
    const double drift = 5 * gauss(rng);
    const double curve = gauss(rng);
    const Profile base = fourier_loop(coeffs, tau);
    const Profile gauge{[=](double t) { return base.value(t) + drift * t / tau + curve * t * t / (tau * tau); },
                        [=](double t) { return base.derivative(t) + drift / tau + 2 * curve * t / (tau * tau); }};
    const TimeWarp warp = trial % 2 == 0 ? quadratic_warp(tau) : sine_warp(tau, unit(rng));
    const std::string where = "trial " + std::to_string(trial);
    worst.update(gauge_transform_check(state, path, alg, gauge), where + " gauge");
    worst.update(reparametrization_check(state, path, alg, warp), where + (trial % 2 == 0 ? " quadratic warp" : " sine warp"));
  }
  return finish(8, "gauge and reparametrization invariance", worst, 1e-6, "d=" + std::to_string(d));
}

CriterionResult decomposition_consistency(const VerifyOptions& options) {
  Worst worst;
  std::mt19937_64 rng(options.seed + 9);
  for (int d : dims({2, 3, 4}, options.d_max)) {
    const Algebra alg(d);
    std::uniform_int_distribution<int> pick(0, 2 * d);
    for (int trial = 0; trial < 6; ++trial) {
      std::array<CurvePtr, 2> curves;
      std::array<std::optional<int>, 2> classes;
      for (int k = 0; k < 2; ++k) {
        const int w = pick(rng);
        RandomPathOptions o;
        o.amplitude = 0.5;
        if (w < 2 * d) o.winding = (w % 2 == 0 ? 1.0 : -1.0) * alg.magnetic_weight(w / 2);
        curves[k] = random_smooth_loop(alg, rng, 1.0, o);
        classes[k] = o.winding ? center_element(alg, *o.winding).z : 0;
      }
      const TwoQuditState state = random_state(d, rng);
      const std::string where = label(d, "trial " + std::to_string(trial));
      const PhaseReport both = geometric_phase(state, EvolutionPath(d, curves[0], curves[1], classes), alg);
      const PhaseReport first = geometric_phase(state, EvolutionPath(d, curves[0], nullptr, {classes[0], std::nullopt}), alg);
      const PhaseReport second = geometric_phase(state, EvolutionPath(d, nullptr, curves[1], {std::nullopt, classes[1]}), alg);
      worst.update(angle_distance(both.phi_g, first.phi_g + second.phi_g), where + " side additivity");
      double per_side = 0.0;
      for (const SidePhase& s : both.sides) {
        if (!s.has_split || !s.phi_g) {
          worst.fail(where + " side without split");
          continue;
        }
        per_side += *s.phi_g;
        worst.update((s.phi_q - s.phi_q_v - s.phi_q_u).cwiseAbs().maxCoeff(), where + " Phi_q split");
      }
      worst.update(angle_distance(both.phi_g, per_side), where + " per-side sum");
    }
  }
  return finish(9, "decomposition consistency", worst, 1e-6);
}

CriterionResult retraction(const VerifyOptions& options) {
  Worst worst;
  std::mt19937_64 rng(options.seed + 10);
  const std::vector<double> grid = default_retraction_grid();
  for (int d : dims({2, 3}, options.d_max)) {
    for (int trial = 0; trial < 20; ++trial)
      worst.update(verify_retraction(random_state(d, rng), grid).max_residual(),
                   label(d, "trial " + std::to_string(trial)));
    const TwoQuditState mes = make_state(linalg::random_su(d, rng));
    worst.update(verify_retraction(mes, grid).max_residual(), label(d, "MES input"));
    double moved = 0.0;
    for (double s : grid) moved = std::max(moved, (retract(mes, s).coeffs() - mes.coeffs()).norm());
    worst.update(moved, label(d, "MES fixed point"));
  }
  return finish(10, "retraction", worst, 1e-8);
}

}  // namespace

CriterionResult run_criterion(int id, const VerifyOptions& options) {
  if (options.d_max < 2) throw InvalidDimension("d_max must be at least 2");
  if (options.monopole_grid < 32 || options.monopole_grid % 2 != 0)
    throw DomainError("monopole grid must be even and at least 32");
  switch (id) {
    case 1:
      return algebra_identities(options);
    case 2:
      return fractional_phases(options);
    case 3:
      return weight_paths(options);
    case 4:
      return separable_null(options);
    case 5:
      return qubit_solid_angle_check(options);
    case 6:
      return monopole_formula(options);
    case 7:
      return flatness_and_stokes(options);
    case 8:
      return gauge_and_reparametrization(options);
    case 9:
      return decomposition_consistency(options);
    case 10:
      return retraction(options);
    default:
      throw IndexOutOfRange("criterion id must lie in [1, 10]");
  }
}

std::vector<CriterionResult> run_all_criteria(const VerifyOptions& options) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) {
    try {
      out.push_back(run_criterion(id, options));
    } catch (const Error& e) {
      CriterionResult r;
      r.id = id;
      r.name = "criterion " + std::to_string(id);
      r.metric = std::nan("");
      r.detail = std::string("error: ") + e.what();
      out.push_back(r);
    }
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %2d  %-40s metric=%.3e tol=%.0e", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.metric, r.tolerance);
  std::string line(buf);
  if (!r.detail.empty()) line += "  " + r.detail;
  return line;
}

}  // namespace qudit
