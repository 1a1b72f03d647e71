#pragma once
// End-to-end consistency checks: closed forms against quadrature routes,
// quadrature routes against the Monte Carlo engine.

#include <cstdint>
#include <string>
#include <vector>

namespace aloha::validate {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // one line of measured numbers
  double seconds = 0.0;
};

struct ValidateOptions {
  std::uint64_t seed = 1;
  // 0 keeps each check's own replication count; a positive value overrides
  // them all (useful for quick smoke runs, the detail line records it).
  std::size_t replications = 0;
  double quad_rel_tol = 1e-8;
  // Test hook: scales one side of the kappa ratio so the consistency check
  // can be made to fail on purpose.
  double kappa_perturbation = 1.0;
};

CheckResult check_zeta();
CheckResult check_coverage_closed(const ValidateOptions& opt = {});
CheckResult check_specialization(const ValidateOptions& opt = {});
CheckResult check_sim_coverage(const ValidateOptions& opt = {});
CheckResult check_renewal_rain_convergence(const ValidateOptions& opt = {});
CheckResult check_optima();
CheckResult check_throughput_ratio();
CheckResult check_nofading_sim(const ValidateOptions& opt = {});
CheckResult check_mean_vs_max(const ValidateOptions& opt = {});
CheckResult check_lt_vs_sim(const ValidateOptions& opt = {});
CheckResult check_kappa_zeta_consistency(const ValidateOptions& opt = {});

// Closed-form and quadrature checks only; finishes in seconds.
std::vector<CheckResult> run_fast(const ValidateOptions& opt = {});
// Adds the Monte Carlo cross-checks.
std::vector<CheckResult> run_full(const ValidateOptions& opt = {});

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace aloha::validate
