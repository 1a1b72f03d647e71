// Compares the serial replication loop against the OpenMP one on the two
// expensive kernels and confirms bit-identical estimates. Per-replication
// RNG substreams make the schedule irrelevant to the result, so "identical"
// is expected to hold exactly.
#include <chrono>
#include <cstdio>

#include "aloha/model.hpp"
#include "aloha/sim.hpp"

namespace {

using namespace aloha;

double seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

template <typename F>
void bench_kernel(const char* name, std::size_t reps, F run) {
  auto t0 = std::chrono::steady_clock::now();
  const auto serial = run(sim::ExecMode::serial);
  const double ts = seconds(t0);
  t0 = std::chrono::steady_clock::now();
  const auto parallel = run(sim::ExecMode::parallel);
  const double tp = seconds(t0);
  const bool same = serial.first == parallel.first &&
                    serial.second == parallel.second;
  std::printf("%-18s %8zu %10.3f %10.3f %9.2fx %10s\n", name, reps, ts, tp,
              ts / tp, same ? "yes" : "NO");
}

}  // namespace

int main() {
  std::printf("%-18s %8s %10s %10s %10s %10s\n", "kernel", "reps", "serial_s",
              "parallel_s", "speedup", "identical");

  sim::SimConfig cfg;
  cfg.window_side = 100.0;
  cfg.seed = 42;

  Scenario slotted;
  slotted.mac = MacModel::slotted(0.2);
  cfg.replications = 2000;
  bench_kernel("slotted", cfg.replications, [&](sim::ExecMode mode) {
    sim::SimConfig c = cfg;
    c.mode = mode;
    const auto res = sim::simulate_slotted(slotted, c);
    return std::make_pair(res.coverage.mean, res.coverage.std_error);
  });

  Scenario renewal;
  renewal.mac = MacModel::renewal(1.0, 0.1 / 0.9);  // 10% access fraction
  cfg.replications = 1000;
  bench_kernel("renewal", cfg.replications, [&](sim::ExecMode mode) {
    sim::SimConfig c = cfg;
    c.mode = mode;
    const auto res = sim::simulate_renewal(renewal, c);
    return std::make_pair(res.coverage_mean.mean, res.coverage_max.mean);
  });

  return 0;
}
