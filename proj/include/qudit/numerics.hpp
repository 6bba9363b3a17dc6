#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qudit::numerics {

/// Vector-valued integrand: every component is integrated on the same nodes.
using Integrand = std::function<std::vector<double>(double)>;

struct QuadratureOptions {
  int initial_intervals = 2048;  ///< total over [a, b], shared among pieces by length
  double tolerance = 1e-7;       ///< absolute, on the max component change per doubling
  int max_doublings = 6;
};

struct QuadratureResult {
  std::vector<double> values;
  int intervals = 0;          ///< total Simpson intervals of the final estimate
  int doublings = 0;
  double last_delta = 0.0;    ///< max component change at the last doubling
  bool converged = false;
};

/// Composite Simpson over consecutive pieces [b_k, b_{k+1}], doubling every
/// piece's resolution until successive estimates agree to `tolerance`.
/// Previous nodes are reused, so each doubling only evaluates new midpoints.
QuadratureResult integrate_piecewise(const Integrand& f, std::span<const double> breakpoints,
                                     const QuadratureOptions& options);

/// Composite Simpson on a fixed uniform sample table (3/8 rule closes odd counts).
double simpson_uniform(std::span<const double> values, double spacing);

/// Fourth-order first derivative on a uniform grid; one-sided fourth-order
/// stencils at both ends. Requires at least 5 samples.
template <typename T>
std::vector<T> derivative4(const std::vector<T>& f, double h) {
  const std::size_t n = f.size();
  std::vector<T> out(n);
  const double c = 1.0 / (12.0 * h);
  out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * c;
  out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + 1.0 * f[4]) * c;
  for (std::size_t i = 2; i + 2 < n; ++i)
    out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * c;
  out[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - 1.0 * f[n - 5]) * c;
  out[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) * c;
  return out;
}

/// Second-order first derivative at index i of a non-periodic uniform line.
template <typename T, typename Get>
T derivative2_at(Get&& get, std::size_t i, std::size_t n, double h) {
  if (i == 0) return (-3.0 * get(0) + 4.0 * get(1) - get(2)) * (0.5 / h);
  if (i + 1 == n) return (3.0 * get(n - 1) - 4.0 * get(n - 2) + get(n - 3)) * (0.5 / h);
  return (get(i + 1) - get(i - 1)) * (0.5 / h);
}

/// Worker count: QUDIT_HOLONOMY_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) across thread_count() workers. Each index is
/// visited exactly once; callers write into per-index slots so results do not
/// depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qudit::numerics
