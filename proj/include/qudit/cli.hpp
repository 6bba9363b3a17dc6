#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qudit/numerics.hpp"
#include "qudit/phase.hpp"

namespace qudit::cli {

enum class Command {
  algebra_dump,
  state_analyze,
  phase_compute,
  phase_fractional,
  monopole_check,
  topology_adjoint,
  topology_retract,
  verify_all,
};

enum class Format { json, csv, text };

struct RunConfig {
  Command command = Command::verify_all;
  std::optional<std::string> out;
  std::optional<Format> format;

  int d = 0;
  std::string state_file;
  std::string path_file;
  std::string matrix_file;

  bool both_sides = false;
  Frame frame = Frame::schmidt;
  numerics::QuadratureOptions quadrature;
  int split_samples = kDefaultSplitSamples;

  std::string weight;  ///< "i" or "anti-i", 1-based
  std::pair<int, int> root{1, 2};
  std::vector<double> thetas{1.0471975511965976};
  int grid = 256;
  std::vector<double> spectrum;

  int retract_points = 11;

  int d_max = 6;
  std::uint64_t seed = 7;
};

/// Throws InputError on invalid tolerances or grids.
void validate(const RunConfig& config);

/// Executes one command, writing the report to `out` (or config.out) and
/// diagnostics to `err`. Returns 0 on success, 1 on computation errors or
/// failing criteria, 2 on input errors.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses the command line into a RunConfig and runs it; usage errors exit 2.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qudit::cli
