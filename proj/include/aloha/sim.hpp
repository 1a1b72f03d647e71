#pragma once
// Spatial Monte Carlo for the tagged link: one replication draws a network,
// MAC activity, and fades, then scores the tagged transmission.

#include <cstdint>
#include <vector>

#include "aloha/model.hpp"

namespace aloha::sim {

enum class Boundary { torus, guard_zone };
enum class ExecMode { serial, parallel };

struct SimConfig {
  double window_side = 300.0;
  Boundary boundary = Boundary::torus;
  double guard_width = 0.0;  // extra margin drawn around the window (guard_zone)
  std::size_t replications = 1000;
  std::uint64_t seed = 1;
  ExecMode mode = ExecMode::parallel;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ci95_halfwidth = 0.0;
  std::size_t n = 0;

  bool contains(double v) const {
    return mean - ci95_halfwidth <= v && v <= mean + ci95_halfwidth;
  }
};

struct TimelineEvent {
  std::size_t node_id = 0;
  enum class Kind { tx_start, tx_end } kind = Kind::tx_start;
  double time = 0.0;
};

struct NetworkDraw {
  std::vector<double> x, y;  // interferer positions
  double rx_x = 0.0, rx_y = 0.0;
  std::size_t count = 0;
};

struct SlottedResult {
  Estimate coverage;
  std::vector<double> interference;  // per replication, the tagged slot
};

struct RenewalResult {
  Estimate coverage_mean;  // SINR with packet-averaged interference
  Estimate coverage_max;   // SINR with worst-instant interference
  Estimate on_fraction;    // mean per-node ON overlap with the tagged packet
  std::vector<double> interference_mean;
  std::vector<double> interference_max;
};

struct RainResult {
  Estimate coverage;
  std::vector<double> interference;
};

// One draw of the interferer process (full density lambda) plus the tagged
// receiver, placed at distance r from the window-center transmitter in a
// uniform direction. Deterministic in (cfg.seed, replication).
NetworkDraw draw_network(const Scenario& sc, const SimConfig& cfg,
                         std::uint64_t replication);

// ON intervals of one interferer over [0, horizon), started in its stationary
// regime at time 0 and clipped to the horizon. Events come in
// (tx_start, tx_end) pairs, one pair per transmission, in time order.
std::vector<TimelineEvent> renewal_timeline(const MacModel& mac, RngStream& rs,
                                            std::size_t node_id, double horizon);

// Max over [0, horizon) of the summed weights of active transmissions; tl is
// a concatenation of (tx_start, tx_end) pairs and weights[k] scales pair k.
double peak_interference(const std::vector<TimelineEvent>& tl,
                         const std::vector<double>& weights);

// Coverage of the tagged link in one synchronized slot; interferers are the
// lambda*p thinning of the network.
SlottedResult simulate_slotted(const Scenario& sc, const SimConfig& cfg);

// Coverage of one tagged packet [0, B) against interferers with stationary
// ON/OFF renewal activity (ON = B, OFF ~ Exp(eps)), fades redrawn per
// transmission. Reports both the packet-mean and the packet-max constraint.
RenewalResult simulate_renewal(const Scenario& sc, const SimConfig& cfg);

// Coverage of one tagged packet against a space-time Poisson rain of
// transmissions (rate lambda*tau/B per unit area and time).
RainResult simulate_rain(const Scenario& sc, const SimConfig& cfg);

// Mean of exp(-xi * s) over the samples, with its sampling error.
Estimate empirical_laplace(const std::vector<double>& samples, double xi);

// Binomial point estimate with normal-approximation error bars.
Estimate estimate_coverage(std::size_t successes, std::size_t n);

}  // namespace aloha::sim
