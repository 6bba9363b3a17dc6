#include "qudit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "qudit/errors.hpp"

namespace qudit::numerics {
namespace {

struct Piece {
  double a = 0.0;
  double b = 0.0;
  int intervals = 0;               // current trapezoid resolution
  std::vector<double> trapezoid;   // running trapezoid sum, per component
};

void accumulate(std::vector<double>& acc, const std::vector<double>& v, double w) {
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w * v[k];
}

}  // namespace

QuadratureResult integrate_piecewise(const Integrand& f, std::span<const double> breakpoints,
                                     const QuadratureOptions& options) {
  if (breakpoints.size() < 2) throw DomainError("integration needs at least two breakpoints");
  const double total = breakpoints.back() - breakpoints.front();
  if (!(total > 0.0)) throw DomainError("integration interval is empty");

  std::vector<Piece> pieces;
  std::size_t width = 0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const double a = breakpoints[k];
    const double b = breakpoints[k + 1];
    if (b - a <= 0.0) continue;
    Piece p;
    p.a = a;
    p.b = b;
    // Start at half the requested resolution; the first doubling yields Simpson.
    const double share = options.initial_intervals * (b - a) / total / 2.0;
    p.intervals = std::max(2, static_cast<int>(std::ceil(share)));
    const double h = (b - a) / p.intervals;
    for (int i = 0; i <= p.intervals; ++i) {
      // The right end is taken from inside the piece so piecewise integrands use their left limit.
      const std::vector<double> v = f(i == p.intervals ? std::nextafter(b, a) : a + i * h);
      if (p.trapezoid.empty()) p.trapezoid.assign(v.size(), 0.0);
      width = v.size();
      const double w = (i == 0 || i == p.intervals) ? 0.5 * h : h;
      accumulate(p.trapezoid, v, w);
    }
    pieces.push_back(std::move(p));
  }

  auto refine = [&](Piece& p) {
    const double h_old = (p.b - p.a) / p.intervals;
    std::vector<double> mids(width, 0.0);
    for (int i = 0; i < p.intervals; ++i) accumulate(mids, f(p.a + (i + 0.5) * h_old), 1.0);
    for (std::size_t k = 0; k < width; ++k) p.trapezoid[k] = 0.5 * p.trapezoid[k] + 0.5 * h_old * mids[k];
    p.intervals *= 2;
  };

  auto simpson_step = [&]() {
    std::vector<double> sum(width, 0.0);
    int intervals = 0;
    for (Piece& p : pieces) {
      const std::vector<double> coarse = p.trapezoid;
      refine(p);
      for (std::size_t k = 0; k < width; ++k) sum[k] += (4.0 * p.trapezoid[k] - coarse[k]) / 3.0;
      intervals += p.intervals;
    }
    return std::pair{sum, intervals};
  };

  QuadratureResult result;
  auto [estimate, intervals] = simpson_step();
  result.values = estimate;
  result.intervals = intervals;
  for (int level = 1; level <= options.max_doublings; ++level) {
    auto [next, n] = simpson_step();
    double delta = 0.0;
    for (std::size_t k = 0; k < width; ++k) delta = std::max(delta, std::abs(next[k] - result.values[k]));
    result.values = std::move(next);
    result.intervals = n;
    result.doublings = level;
    result.last_delta = delta;
    if (delta < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

double simpson_uniform(std::span<const double> v, double h) {
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  const std::size_t intervals = n - 1;
  if (intervals == 1) return 0.5 * h * (v[0] + v[1]);
  std::size_t simpson_end = intervals;
  double tail = 0.0;
  if (intervals % 2 == 1) {
    // Simpson 3/8 on the last three intervals.
    simpson_end = intervals - 3;
    tail = 3.0 * h / 8.0 * (v[n - 4] + 3.0 * v[n - 3] + 3.0 * v[n - 2] + v[n - 1]);
  }
  double s = 0.0;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) s += v[i] + 4.0 * v[i + 1] + v[i + 2];
  return s * h / 3.0 + tail;
}

unsigned thread_count() {
  if (const char* env = std::getenv("QUDIT_HOLONOMY_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> failures(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, &failures, w, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : failures)
    if (e) std::rethrow_exception(e);
}

}  // namespace qudit::numerics
