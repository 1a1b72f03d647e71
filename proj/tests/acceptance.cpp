// Acceptance suite: one line per criterion, nonzero exit if any fail.
// Replication counts are the documented minima; runtime is dominated by the
// simulation-backed checks.
#include <cstdio>
#include <vector>

#include "aloha/validate.hpp"

int main() {
  using namespace aloha::validate;
  const ValidateOptions opt;  // defaults: seed 1, per-check replication minima

  struct Entry {
    int number;
    CheckResult result;
  };
  std::vector<Entry> entries;
  entries.push_back({1, check_zeta()});
  entries.push_back({2, check_coverage_closed(opt)});
  entries.push_back({3, check_specialization(opt)});
  entries.push_back({4, check_sim_coverage(opt)});
  entries.push_back({5, check_renewal_rain_convergence(opt)});
  entries.push_back({6, check_optima()});
  entries.push_back({7, check_throughput_ratio()});
  entries.push_back({8, check_nofading_sim(opt)});
  entries.push_back({9, check_mean_vs_max(opt)});
  entries.push_back({10, check_lt_vs_sim(opt)});

  int failures = 0;
  for (const auto& e : entries) {
    std::printf("criterion %2d %-32s %s: %s (%.1fs)\n", e.number,
                e.result.name.c_str(), e.result.passed ? "PASS" : "FAIL",
                e.result.detail.c_str(), e.result.seconds);
    if (!e.result.passed) ++failures;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
