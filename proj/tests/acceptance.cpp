#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "qudit/verification.hpp"

int main(int argc, char** argv) {
  qudit::VerifyOptions options;
  if (argc > 1) options.seed = std::strtoull(argv[1], nullptr, 10);
  int failures = 0;
  for (int id = 1; id <= qudit::kCriterionCount; ++id) {
    const auto start = std::chrono::steady_clock::now();
    qudit::CriterionResult r;
    try {
      r = qudit::run_criterion(id, options);
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "criterion " + std::to_string(id);
      r.detail = std::string("error: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  [%.1fs]\n", qudit::format_result(r).c_str(), seconds);
    std::fflush(stdout);
    if (!r.passed) ++failures;
  }
  std::printf("%d of %d criteria passed\n", qudit::kCriterionCount - failures, qudit::kCriterionCount);
  return failures == 0 ? 0 : 1;
}
