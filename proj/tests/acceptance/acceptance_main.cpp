#include <chrono>
#include <cstdio>

#include "imgrx/validation.hpp"

int main() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const imgrx::AcceptanceOptions options;
  const auto results = imgrx::run_acceptance(options);

  int failed = 0;
  for (const auto& r : results) {
    std::printf("[%s] %2d %s: %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.detail.c_str());
    if (!r.passed) ++failed;
  }

  const auto cal = imgrx::calibration_diagnostic(options.space, imgrx::DesignConstraints{});
  std::printf("[INFO]    d_delta(N_PD = 49, N_a = 64) with default link budget = %.4f um "
              "(%.4f x 44.81 um)\n",
              cal.d_delta * 1e6, cal.ratio);

  const double seconds = std::chrono::duration<double>(clock::now() - start).count();
  std::printf("%zu criteria, %d failed, %.1f s\n", results.size(), failed, seconds);
  return failed == 0 ? 0 : 1;
}
