#include "qudit/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qudit/errors.hpp"

namespace qudit::io {

namespace {

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write(std::ostringstream& os, const Json& v, int indent, int depth) {
  const auto newline = [&](int level) {
    if (indent < 0) return;
    os << '\n' << std::string(static_cast<std::size_t>(indent * level), ' ');
  };
  switch (v.type()) {
    case Json::value_t::number_float:
      os << format_double(v.get<double>());
      return;
    case Json::value_t::array: {
      if (v.empty()) {
        os << "[]";
        return;
      }
      os << '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        write(os, item, indent, depth + 1);
      }
      newline(depth);
      os << ']';
      return;
    }
    case Json::value_t::object: {
      if (v.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) os << ',';
        first = false;
        newline(depth + 1);
        os << Json(key).dump() << (indent < 0 ? ":" : ": ");
        write(os, item, indent, depth + 1);
      }
      newline(depth);
      os << '}';
      return;
    }
    default:
      os << v.dump();
  }
}

const Json& require(const Json& object, const std::string& field, const std::string& context) {
  if (!object.is_object()) throw ParseError(context + ": expected a JSON object");
  const auto it = object.find(field);
  if (it == object.end()) throw ParseError(context + ": missing field '" + field + "'");
  return *it;
}

double number_field(const Json& object, const std::string& field, const std::string& context) {
  const Json& v = require(object, field, context);
  if (!v.is_number()) throw ParseError(context + ": field '" + field + "' must be a number");
  return v.get<double>();
}

int integer_field(const Json& object, const std::string& field, const std::string& context) {
  const Json& v = require(object, field, context);
  if (!v.is_number_integer()) throw ParseError(context + ": field '" + field + "' must be an integer");
  return v.get<int>();
}

std::vector<double> real_entries(const Json& array, int d, const std::string& context) {
  std::vector<double> out;
  if (!array.is_array()) throw ParseError(context + ": expected an array");
  const bool nested = !array.empty() && array.front().is_array();
  if (nested) {
    if (static_cast<int>(array.size()) != d) throw ShapeError(context + ": expected " + std::to_string(d) + " rows");
    for (std::size_t r = 0; r < array.size(); ++r) {
      const Json& row = array[r];
      if (!row.is_array() || static_cast<int>(row.size()) != d)
        throw ShapeError(context + "[" + std::to_string(r) + "]: expected " + std::to_string(d) + " entries");
      for (const auto& x : row) {
        if (!x.is_number()) throw ParseError(context + "[" + std::to_string(r) + "]: entries must be numbers");
        out.push_back(x.get<double>());
      }
    }
  } else {
    if (static_cast<int>(array.size()) != d * d)
      throw ShapeError(context + ": expected " + std::to_string(d * d) + " row-major entries");
    for (const auto& x : array) {
      if (!x.is_number()) throw ParseError(context + ": entries must be numbers");
      out.push_back(x.get<double>());
    }
  }
  return out;
}

int dimension_field(const Json& object, const std::string& context) {
  const int d = integer_field(object, "d", context);
  if (d < 2 || d > Algebra::kMaxDimension) throw InvalidDimension(context + ": d must lie in [2, 32]");
  return d;
}

double duration_field(const Json& object, const std::string& context) {
  if (!object.contains("duration")) return 1.0;
  const double tau = number_field(object, "duration", context);
  if (!(tau > 0.0)) throw DomainError(context + ": duration must be positive");
  return tau;
}

std::string string_field(const Json& object, const std::string& field, const std::string& context) {
  const Json& v = require(object, field, context);
  if (!v.is_string()) throw ParseError(context + ": field '" + field + "' must be a string");
  return v.get<std::string>();
}

EvolutionPath parse_path_node(const Json& object, const Algebra& algebra, Side inherited, const std::string& context) {
  const int d = algebra.dim();
  if (object.contains("d") && integer_field(object, "d", context) != d)
    throw DimensionMismatch(context + ": segment dimension differs from the path");
  const Side side = object.contains("side") ? parse_side(string_field(object, "side", context)) : inherited;
  const std::string kind = string_field(object, "kind", context);
  const double tau = duration_field(object, context);

  std::optional<int> declared;
  if (object.contains("closure_class")) declared = integer_field(object, "closure_class", context);

  EvolutionPath path = [&]() -> EvolutionPath {
    if (kind == "cartan_loop") {
      RealVector beta;
      if (object.contains("beta")) {
        const Json& b = object["beta"];
        if (!b.is_array() || static_cast<int>(b.size()) != d - 1)
          throw ShapeError(context + ": field 'beta' must hold d-1 numbers");
        beta.resize(d - 1);
        for (int q = 0; q < d - 1; ++q) {
          if (!b[q].is_number()) throw ParseError(context + ": field 'beta' must hold numbers");
          beta(q) = b[q].get<double>();
        }
      } else {
        const int index = integer_field(object, "weight_index", context);
        if (index < 1 || index > d) throw IndexOutOfRange(context + ": weight_index must lie in [1, d]");
        beta = algebra.magnetic_weight(index - 1);
        if (object.contains("antifundamental")) {
          const Json& a = object["antifundamental"];
          if (!a.is_boolean()) throw ParseError(context + ": field 'antifundamental' must be a boolean");
          if (a.get<bool>()) beta = -beta;
        }
      }
      Profile ramp = cosine_ramp(tau);
      if (object.contains("profile")) {
        const std::string name = string_field(object, "profile", context);
        if (name == "linear") ramp = linear_profile(tau);
        else if (name != "cosine") throw ParseError(context + ": profile must be 'cosine' or 'linear'");
      }
      return cartan_loop(algebra, beta, tau, ramp, side);
    }
    if (kind == "coset_loop") {
      const Json& root = require(object, "root", context);
      if (!root.is_array() || root.size() != 2 || !root[0].is_number_integer() || !root[1].is_number_integer())
        throw ParseError(context + ": field 'root' must be a pair of integers [i, k]");
      const int i = root[0].get<int>();
      const int k = root[1].get<int>();
      if (i < 1 || k > d || i >= k) throw IndexOutOfRange(context + ": root needs 1 <= i < k <= d");
      return coset_loop(algebra, algebra.root_index(i - 1, k - 1), number_field(object, "theta", context), tau, side);
    }
    if (kind == "composite") {
      const Json& segments = require(object, "segments", context);
      if (!segments.is_array() || segments.empty())
        throw ParseError(context + ": field 'segments' must be a non-empty array");
      std::optional<EvolutionPath> joined;
      for (std::size_t n = 0; n < segments.size(); ++n) {
        EvolutionPath next = parse_path_node(segments[n], algebra, side, context + ".segments[" + std::to_string(n) + "]");
        joined = joined ? joined->then(next) : next;
      }
      return *joined;
    }
    if (kind == "samples") {
      const Json& table = require(object, "samples", context);
      if (!table.is_array()) throw ParseError(context + ": field 'samples' must be an array");
      std::vector<Matrix> samples;
      for (std::size_t n = 0; n < table.size(); ++n)
        samples.push_back(parse_matrix(table[n], d, context + ".samples[" + std::to_string(n) + "]"));
      return EvolutionPath::single(std::make_shared<SampledCurve>(tau, std::move(samples)), side, declared);
    }
    throw ParseError(context + ": unknown kind '" + kind + "'");
  }();

  if (declared && kind != "samples") {
    const int z = ((*declared % d) + d) % d;
    for (int k = 0; k < 2; ++k)
      if (path.curve(k) && path.closure_class(k) != z)
        throw DomainError(context + ": declared closure_class does not match the path");
  }
  return path;
}

std::string csv_number(double x) { return format_double(x); }

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": malformed JSON");
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str(), path);
}

std::string dump(const Json& value, int indent) {
  std::ostringstream os;
  write(os, value, indent, 0);
  os << '\n';
  return os.str();
}

Matrix parse_matrix(const Json& object, int d, const std::string& context) {
  const std::vector<double> re = real_entries(require(object, "re", context), d, context + ".re");
  std::vector<double> im(re.size(), 0.0);
  if (object.contains("im")) im = real_entries(object["im"], d, context + ".im");
  Matrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = Complex(re[r * d + c], im[r * d + c]);
  return m;
}

TwoQuditState parse_state(const Json& object) {
  const int d = dimension_field(object, "state");
  return TwoQuditState::normalized(parse_matrix(object, d, "state"));
}

Matrix parse_square_matrix(const Json& object) {
  const int d = dimension_field(object, "matrix");
  return parse_matrix(object, d, "matrix");
}

EvolutionPath parse_path(const Json& object, const Algebra& algebra) {
  if (dimension_field(object, "path") != algebra.dim()) throw DimensionMismatch("path: d differs from the state");
  return parse_path_node(object, algebra, Side::first, "path");
}

Side parse_side(const std::string& name) {
  if (name == "first") return Side::first;
  if (name == "second") return Side::second;
  if (name == "both") return Side::both;
  throw ParseError("side must be 'first', 'second' or 'both'");
}

std::string side_name(Side side) {
  switch (side) {
    case Side::first:
      return "first";
    case Side::second:
      return "second";
    case Side::both:
      return "both";
  }
  return "first";
}

Json matrix_json(const Matrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json rr = Json::array();
    Json ii = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return Json{{"re", re}, {"im", im}};
}

Json vector_json(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json real_matrix_json(const RealMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

Json state_analysis(const TwoQuditState& state, const Algebra& algebra) {
  const int d = state.dim();
  Json invariants = Json::array();
  for (int p = 1; p <= d; ++p) invariants.push_back(invariant(state, p));
  const Json coeffs = matrix_json(state.coeffs());
  Json out;
  out["d"] = d;
  out["re"] = coeffs["re"];
  out["im"] = coeffs["im"];
  out["normalization"] = state.normalization();
  out["invariants"] = invariants;
  out["concurrence"] = concurrence(state);
  out["max_concurrence"] = max_concurrence(d);
  out["sigma"] = vector_json(state.sigma());
  out["schmidt_rank"] = schmidt_rank(state);
  out["maximally_entangled"] = is_maximally_entangled(state);
  out["b"] = vector_json(b_vector(state, algebra));
  out["schmidt_phase"] = state.schmidt().phi;
  return out;
}

Json phase_report_json(const PhaseReport& report) {
  Json sides = Json::array();
  for (const SidePhase& s : report.sides) {
    Json side;
    side["side"] = s.side == 0 ? "first" : "second";
    side["phi_s"] = s.phi_s;
    side["Phi_q"] = vector_json(s.phi_q);
    side["weighted"] = s.weighted;
    side["z_detected"] = s.closure.cyclic ? Json(s.closure.signed_z) : Json();
    side["closure_residual"] = s.closure.residual;
    side["phi_g"] = s.phi_g ? Json(*s.phi_g) : Json();
    if (s.has_split) {
      side["split"] = Json{{"Phi_q_V", vector_json(s.phi_q_v)},
                           {"Phi_q_U", vector_json(s.phi_q_u)},
                           {"target_weight", vector_json(s.target_weight)},
                           {"cartan_part", s.cartan_part},
                           {"coset_part", s.coset_part}};
    } else {
      side["split"] = Json();
    }
    sides.push_back(side);
  }
  Json out;
  out["phi_g"] = report.phi_g;
  out["phi_g_raw"] = report.phi_g_raw;
  out["overlap_arg"] = report.overlap_arg;
  out["overlap_modulus"] = report.overlap_modulus;
  out["dynamical_term"] = report.dynamical_term;
  out["sigma"] = vector_json(report.sigma);
  out["z_detected"] = report.closure.cyclic ? Json(report.closure.signed_z) : Json();
  out["closure_residual"] = report.closure.residual;
  out["per_side"] = sides;
  out["convergence"] = Json{{"intervals", report.convergence.intervals},
                            {"doublings", report.convergence.doublings},
                            {"last_delta", report.convergence.last_delta},
                            {"converged", report.convergence.converged},
                            {"fixed_grid", report.convergence.fixed_grid}};
  return out;
}

Json algebra_json(const Algebra& algebra) {
  const int d = algebra.dim();
  Json generators = Json::array();
  for (int a = 0; a < algebra.size(); ++a) {
    Json g = matrix_json(algebra.generator(a));
    g["index"] = a + 1;
    g["kind"] = a < d - 1 ? "cartan" : ((a - d + 1) % 2 == 0 ? "root_real" : "root_imag");
    generators.push_back(g);
  }
  Json weights = Json::array();
  for (int i = 0; i < d; ++i)
    weights.push_back(Json{{"index", i + 1},
                           {"w", vector_json(algebra.fundamental_weight(i))},
                           {"beta", vector_json(algebra.magnetic_weight(i))}});
  Json roots = Json::array();
  for (const Root& r : algebra.roots())
    roots.push_back(Json{{"i", r.i + 1},
                         {"k", r.k + 1},
                         {"vector", vector_json(r.vector)},
                         {"generators", Json::array({r.real_index + 1, r.imag_index + 1})}});
  const std::size_t total = static_cast<std::size_t>(algebra.size()) * algebra.size() * algebra.size();
  Json out;
  out["d"] = d;
  out["generator_count"] = algebra.size();
  out["generators"] = generators;
  out["weights"] = weights;
  out["roots"] = roots;
  out["structure_constants"] = Json{{"nonzeros", algebra.structure_nonzeros()},
                                    {"total", total},
                                    {"density", static_cast<double>(algebra.structure_nonzeros()) / total}};
  return out;
}

std::string algebra_csv(const Algebra& algebra) {
  std::ostringstream os;
  os << "a,b,c,f\n";
  for (int a = 0; a < algebra.size(); ++a)
    for (const StructureEntry& e : algebra.f_row(a))
      os << a + 1 << ',' << e.b + 1 << ',' << e.c + 1 << ',' << csv_number(e.value) << '\n';
  return os.str();
}

namespace {

Json refined_json(const RefinedValue& v) {
  return Json{{"coarse", v.coarse}, {"fine", v.fine}, {"extrapolated", v.extrapolated}};
}

}  // namespace

Json monopole_json(const MonopoleCheck& check) {
  Json surface_q = Json::array();
  for (const RefinedValue& v : check.surface_phi_q) surface_q.push_back(refined_json(v));
  Json out;
  out["d"] = check.d;
  out["root_index"] = check.root_index + 1;
  out["theta"] = check.theta;
  out["grid"] = check.grid;
  out["sigma"] = vector_json(check.sigma);
  out["solid_angle"] = check.solid_angle;
  out["line_integral"] = check.line_coset;
  out["surface_integral"] = check.surface_coset.fine;
  out["surface_integral_extrapolated"] = check.surface_coset.extrapolated;
  out["difference"] = check.surface_coset.fine - check.line_coset;
  out["difference_extrapolated"] = check.surface_coset.extrapolated - check.line_coset;
  out["analytic"] = check.analytic;
  out["line_Phi_q"] = vector_json(check.line_phi_q);
  out["surface_Phi_q"] = surface_q;
  out["surface_coset"] = refined_json(check.surface_coset);
  out["flatness_residual"] = refined_json(check.flatness);
  out["qubit_half_solid_angle"] = check.qubit_half_solid_angle ? refined_json(*check.qubit_half_solid_angle) : Json();
  return out;
}

std::string monopole_csv(const std::vector<MonopoleCheck>& checks) {
  std::ostringstream os;
  os << "d,root_index,theta,grid,solid_angle,line_integral,surface_integral,surface_integral_extrapolated,"
        "difference,analytic,flatness_residual\n";
  for (const MonopoleCheck& c : checks)
    os << c.d << ',' << c.root_index + 1 << ',' << csv_number(c.theta) << ',' << c.grid << ','
       << csv_number(c.solid_angle) << ',' << csv_number(c.line_coset) << ',' << csv_number(c.surface_coset.fine)
       << ',' << csv_number(c.surface_coset.extrapolated) << ',' << csv_number(c.surface_coset.fine - c.line_coset)
       << ',' << csv_number(c.analytic) << ',' << csv_number(c.flatness.fine) << '\n';
  return os.str();
}

Json retraction_json(const RetractionReport& report) {
  Json grid = Json::array();
  for (double s : report.s_grid) grid.push_back(s);
  return Json{{"s_grid", grid},
              {"identity_residual", report.identity_residual},
              {"mes_residual", report.mes_residual},
              {"fixed_point_residual", report.fixed_point_residual},
              {"equivalence_residual", report.equivalence_residual},
              {"equivalence_phase_error", report.equivalence_phase_error},
              {"max_residual", report.max_residual()}};
}

Json adjoint_json(const RealMatrix& r) {
  return Json{{"dimension", r.rows()},
              {"R", real_matrix_json(r)},
              {"orthogonality_residual", orthogonality_residual(r)},
              {"identity_distance", (r - RealMatrix::Identity(r.rows(), r.cols())).norm()}};
}

}  // namespace qudit::io
