#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qudit/algebra.hpp"
#include "qudit/evolution.hpp"
#include "qudit/monopole.hpp"
#include "qudit/phase.hpp"
#include "qudit/states.hpp"
#include "qudit/topology.hpp"

namespace qudit::io {

using Json = nlohmann::ordered_json;

/// Throws ParseError naming `source`, line and column on malformed text.
Json parse_json(const std::string& text, const std::string& source = "<input>");
/// Throws ParseError when the file cannot be opened.
Json read_json_file(const std::string& path);

/// Serialises with every floating value at 17 significant digits; non-finite values become null.
std::string dump(const Json& value, int indent = 2);

/// {"re": ..., "im": ...} with d x d nested or d^2 flat row-major arrays; "im" may be omitted.
Matrix parse_matrix(const Json& object, int d, const std::string& context);
/// {"d", "re", "im"}; normalised on read.
TwoQuditState parse_state(const Json& object);
/// {"d", "re", "im"} returned as given.
Matrix parse_square_matrix(const Json& object);

/// Builds a path from {"d", "side", "kind", ...}; see schemas/path.schema.json.
EvolutionPath parse_path(const Json& object, const Algebra& algebra);

Side parse_side(const std::string& name);
std::string side_name(Side side);

Json matrix_json(const Matrix& m);
Json vector_json(const RealVector& v);
Json real_matrix_json(const RealMatrix& m);

Json state_analysis(const TwoQuditState& state, const Algebra& algebra);
Json phase_report_json(const PhaseReport& report);
Json algebra_json(const Algebra& algebra);
/// One row per nonzero structure constant (1-based indices).
std::string algebra_csv(const Algebra& algebra);
Json monopole_json(const MonopoleCheck& check);
/// One row per polar angle.
std::string monopole_csv(const std::vector<MonopoleCheck>& checks);
Json retraction_json(const RetractionReport& report);
Json adjoint_json(const RealMatrix& r);

}  // namespace qudit::io
