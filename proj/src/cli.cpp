#include "qudit/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qudit/algebra.hpp"
#include "qudit/errors.hpp"
#include "qudit/io.hpp"
#include "qudit/monopole.hpp"
#include "qudit/topology.hpp"
#include "qudit/verification.hpp"

namespace qudit::cli {

namespace {

using io::Json;

std::pair<int, bool> parse_weight(const std::string& text, int d) {
  std::string digits = text;
  bool anti = false;
  if (digits.rfind("anti-", 0) == 0) {
    anti = true;
    digits = digits.substr(5);
  }
  int index = 0;
  std::size_t used = 0;
  try {
    index = std::stoi(digits, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != digits.size()) throw ParseError("--weight must look like 2 or anti-2");
  if (index < 1 || index > d) throw IndexOutOfRange("--weight index must lie in [1, d]");
  return {index - 1, anti};
}

Json fractional(const RunConfig& config) {
  const Algebra alg(config.d);
  const auto [index, anti] = parse_weight(config.weight, config.d);
  const TwoQuditState mes = make_state(Matrix::Identity(config.d, config.d));
  const EvolutionPath path = fundamental_loop(alg, index, anti, 1.0);
  PhaseOptions options;
  options.quadrature = config.quadrature;
  options.split_samples = config.split_samples;
  const PhaseReport r = geometric_phase(mes, path, alg, options);
  RealVector beta = alg.magnetic_weight(index);
  if (anti) beta = -beta;
  Json out;
  out["d"] = config.d;
  out["weight"] = config.weight;
  out["beta"] = io::vector_json(beta);
  out["z"] = r.closure.signed_z;
  out["z_class"] = r.closure.z;
  out["closure_residual"] = r.closure.residual;
  out["phi_g"] = r.phi_g;
  out["expected_phi_g"] = linalg::wrap_angle(kTwoPi * r.closure.signed_z / config.d);
  return out;
}

TwoQuditState spectrum_state(const RunConfig& config) {
  const int d = config.d;
  RealVector sigma(d);
  if (config.spectrum.empty()) {
    for (int j = 0; j < d; ++j) sigma(j) = d - j;
  } else {
    if (static_cast<int>(config.spectrum.size()) != d) throw ShapeError("--spectrum needs d values");
    for (int j = 0; j < d; ++j) {
      if (!(config.spectrum[j] >= 0.0)) throw DomainError("--spectrum values must be non-negative");
      sigma(j) = config.spectrum[j];
    }
  }
  return make_state(Matrix(sigma.cast<Complex>().asDiagonal()));
}

void emit(const RunConfig& config, std::ostream& out, const std::string& text) {
  if (!config.out) {
    out << text;
    return;
  }
  std::ofstream file(*config.out, std::ios::binary);
  if (!file) throw DomainError("cannot write " + *config.out);
  file << text;
}

std::string phase_text(const PhaseReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "phi_g           " << r.phi_g << "\n";
  os << "phi_g_raw       " << r.phi_g_raw << "\n";
  os << "overlap_arg     " << r.overlap_arg << "\n";
  os << "dynamical_term  " << r.dynamical_term << "\n";
  os << "z_detected      " << (r.closure.cyclic ? std::to_string(r.closure.signed_z) : "none") << "\n";
  for (const SidePhase& s : r.sides) {
    os << (s.side == 0 ? "first" : "second") << ": phi(S) " << s.phi_s;
    if (s.phi_g) os << "  phi_g(S) " << *s.phi_g;
    if (s.has_split) os << "  cartan " << s.cartan_part << "  coset " << s.coset_part;
    os << "\n";
  }
  os << "intervals       " << r.convergence.intervals << " (last delta " << r.convergence.last_delta << ")\n";
  return os.str();
}

std::string execute(const RunConfig& config) {
  switch (config.command) {
    case Command::algebra_dump: {
      const Algebra alg(config.d);
      if (config.format == Format::csv) return io::algebra_csv(alg);
      return io::dump(io::algebra_json(alg));
    }
    case Command::state_analyze: {
      const TwoQuditState state = io::parse_state(io::read_json_file(config.state_file));
      return io::dump(io::state_analysis(state, Algebra(state.dim())));
    }
    case Command::phase_compute: {
      const TwoQuditState state = io::parse_state(io::read_json_file(config.state_file));
      const Algebra alg(state.dim());
      EvolutionPath path = io::parse_path(io::read_json_file(config.path_file), alg);
      if (config.both_sides && path.side() != Side::both) {
        const int k = path.curve(0) ? 0 : 1;
        path = EvolutionPath(alg.dim(), path.curve(k), path.curve(k), {path.closure_class(k), path.closure_class(k)});
      }
      PhaseOptions options;
      options.frame = config.frame;
      options.quadrature = config.quadrature;
      options.split_samples = config.split_samples;
      const PhaseReport r = geometric_phase(state, path, alg, options);
      if (config.format == Format::text) return phase_text(r);
      return io::dump(io::phase_report_json(r));
    }
    case Command::phase_fractional:
      return io::dump(fractional(config));
    case Command::monopole_check: {
      const Algebra alg(config.d);
      const auto [i, k] = config.root;
      if (i < 1 || k > config.d || i >= k) throw IndexOutOfRange("--root needs 1 <= i < k <= d");
      const int root = alg.root_index(i - 1, k - 1);
      const TwoQuditState state = spectrum_state(config);
      std::vector<MonopoleCheck> checks;
      for (double theta : config.thetas) checks.push_back(qudit::monopole_check(state, alg, root, theta, config.grid));
      const Format format = config.format.value_or(checks.size() > 1 ? Format::csv : Format::json);
      if (format == Format::csv) return io::monopole_csv(checks);
      if (checks.size() == 1) return io::dump(io::monopole_json(checks.front()));
      Json all = Json::array();
      for (const MonopoleCheck& c : checks) all.push_back(io::monopole_json(c));
      return io::dump(all);
    }
    case Command::topology_adjoint: {
      const Matrix s = io::parse_square_matrix(io::read_json_file(config.matrix_file));
      if (config.d != 0 && config.d != s.rows()) throw DimensionMismatch("--d differs from the matrix file");
      return io::dump(io::adjoint_json(adjoint_image(Algebra(static_cast<int>(s.rows())), s)));
    }
    case Command::topology_retract: {
      const TwoQuditState state = io::parse_state(io::read_json_file(config.state_file));
      std::vector<double> grid;
      for (int n = 0; n < config.retract_points; ++n) grid.push_back(static_cast<double>(n) / (config.retract_points - 1));
      return io::dump(io::retraction_json(verify_retraction(state, grid)));
    }
    case Command::verify_all:
      break;
  }
  return {};
}

}  // namespace

void validate(const RunConfig& config) {
  const bool needs_d = config.command == Command::algebra_dump || config.command == Command::phase_fractional ||
                       config.command == Command::monopole_check;
  if (needs_d && (config.d < 2 || config.d > Algebra::kMaxDimension)) throw InvalidDimension("--d must lie in [2, 32]");
  if (!(config.quadrature.tolerance > 0.0)) throw DomainError("--tolerance must be positive");
  if (config.quadrature.initial_intervals < 2) throw DomainError("--initial-intervals must be at least 2");
  if (config.quadrature.max_doublings < 0) throw DomainError("--max-doublings must be non-negative");
  if (config.split_samples < 5) throw DomainError("--split-samples must be at least 5");
  if (config.grid < 32 || config.grid % 2 != 0) throw DomainError("--grid must be even and at least 32");
  if (config.retract_points < 2) throw DomainError("--points must be at least 2");
  if (config.d_max < 2) throw InvalidDimension("--d-max must be at least 2");
  if (config.thetas.empty()) throw DomainError("--theta needs at least one value");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    if (config.command == Command::verify_all) {
      VerifyOptions options;
      options.d_max = config.d_max;
      options.seed = config.seed;
      options.monopole_grid = config.grid;
      const std::vector<CriterionResult> results = run_all_criteria(options);
      bool all = true;
      std::string text;
      if (config.format == Format::json) {
        Json rows = Json::array();
        for (const CriterionResult& r : results)
          rows.push_back(Json{{"id", r.id},
                              {"name", r.name},
                              {"passed", r.passed},
                              {"metric", r.metric},
                              {"tolerance", r.tolerance},
                              {"detail", r.detail}});
        text = io::dump(rows);
      } else {
        for (const CriterionResult& r : results) text += format_result(r) + "\n";
      }
      for (const CriterionResult& r : results) all = all && r.passed;
      emit(config, out, text);
      return all ? 0 : 1;
    }
    emit(config, out, execute(config));
    return 0;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    emit(config, out,
         io::dump(Json{{"error", "convergence"},
                       {"message", e.what()},
                       {"best_estimate", e.best_estimate()},
                       {"last_delta", e.last_delta()}}));
    return 1;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Geometric and fractional phases of two-qudit states under local unitary evolution", "qudit-holonomy"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out_file;
  app.add_option("--out", out_file, "Write the report to this file instead of stdout");
  std::string format_name;
  const auto format_check = CLI::IsMember({"json", "csv"});

  const auto add_quadrature = [&](CLI::App* sub) {
    sub->add_option("--tolerance", config.quadrature.tolerance, "Quadrature refinement tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--initial-intervals", config.quadrature.initial_intervals, "Initial Simpson intervals")
        ->check(CLI::Range(2, 1 << 24));
    sub->add_option("--max-doublings", config.quadrature.max_doublings, "Refinement doublings before giving up")
        ->check(CLI::Range(0, 20));
    sub->add_option("--split-samples", config.split_samples, "Samples per smooth piece for the coset/Cartan split")
        ->check(CLI::Range(5, 1 << 22));
  };

  CLI::App* algebra = app.add_subcommand("algebra", "su(d) basis data")->require_subcommand(1);
  CLI::App* dump = algebra->add_subcommand("dump", "Generators, weights, roots and structure-constant sparsity");
  dump->add_option("--d", config.d, "Qudit dimension")->required();
  dump->add_option("--format", format_name, "json or csv")->check(format_check);
  dump->callback([&] { config.command = Command::algebra_dump; });

  CLI::App* state = app.add_subcommand("state", "State invariants")->require_subcommand(1);
  CLI::App* analyze = state->add_subcommand("analyze", "Invariants, concurrence, Schmidt data and b_q");
  analyze->add_option("--input", config.state_file, "State JSON file")->required();
  analyze->callback([&] { config.command = Command::state_analyze; });

  CLI::App* phase = app.add_subcommand("phase", "Geometric phases")->require_subcommand(1);
  CLI::App* compute = phase->add_subcommand("compute", "Phase report for a state and a path");
  compute->add_option("--state", config.state_file, "State JSON file")->required();
  compute->add_option("--path", config.path_file, "Path JSON file")->required();
  compute->add_flag("--both-sides", config.both_sides, "Apply the path to both qudits");
  bool json = false;
  compute->add_flag("--json", json, "Emit JSON instead of a text summary");
  std::string frame = "schmidt";
  compute->add_option("--frame", frame, "schmidt or computational")->check(CLI::IsMember({"schmidt", "computational"}));
  add_quadrature(compute);
  compute->callback([&] {
    config.command = Command::phase_compute;
    config.format = json ? Format::json : Format::text;
    config.frame = frame == "computational" ? Frame::computational : Frame::schmidt;
  });
  CLI::App* frac = phase->add_subcommand("fractional", "Maximally entangled state around a fundamental weight loop");
  frac->add_option("--d", config.d, "Qudit dimension")->required();
  frac->add_option("--weight", config.weight, "Weight index i or anti-i (1-based)")->required();
  add_quadrature(frac);
  frac->callback([&] { config.command = Command::phase_fractional; });

  CLI::App* mono = app.add_subcommand("monopole-check", "Line versus surface integral of the coset phase");
  mono->add_option("--d", config.d, "Qudit dimension")->required();
  std::vector<int> root;
  mono->add_option("--root", root, "Root i,k (1-based, i < k)")->delimiter(',')->expected(2);
  mono->add_option("--theta", config.thetas, "Polar angle, or a comma-separated sweep")->delimiter(',');
  mono->add_option("--grid", config.grid, "Finest surface grid (even, >= 32)");
  mono->add_option("--spectrum", config.spectrum, "Schmidt coefficients s1,...,sd (normalised)")->delimiter(',');
  mono->add_option("--format", format_name, "json or csv")->check(format_check);
  mono->callback([&] {
    config.command = Command::monopole_check;
    if (root.size() == 2) config.root = {root[0], root[1]};
  });

  CLI::App* topo = app.add_subcommand("topology", "Topological witnesses")->require_subcommand(1);
  CLI::App* adjoint = topo->add_subcommand("adjoint", "Adjoint image R of a matrix in SU(d)");
  adjoint->add_option("--d", config.d, "Expected dimension");
  adjoint->add_option("--matrix", config.matrix_file, "Matrix JSON file")->required();
  adjoint->callback([&] { config.command = Command::topology_adjoint; });
  CLI::App* retract_check = topo->add_subcommand("retract-check", "Deformation retraction checks");
  retract_check->add_option("--state", config.state_file, "State JSON file")->required();
  retract_check->add_option("--points", config.retract_points, "Points on the s grid");
  retract_check->callback([&] { config.command = Command::topology_retract; });

  CLI::App* verify = app.add_subcommand("verify-all", "Run every acceptance criterion");
  verify->add_option("--d-max", config.d_max, "Largest dimension swept");
  verify->add_option("--seed", config.seed, "Seed for randomized suites");
  verify->add_option("--grid", config.grid, "Finest monopole grid");
  verify->add_option("--format", format_name, "json for a machine-readable table")->check(format_check);
  verify->callback([&] { config.command = Command::verify_all; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (!out_file.empty()) config.out = out_file;
  if (format_name == "csv") config.format = Format::csv;
  else if (format_name == "json") config.format = Format::json;
  return run(config, out, err);
}

}  // namespace qudit::cli
