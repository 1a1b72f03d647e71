#include "aloha/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace aloha::sim {

namespace {

constexpr double kPi = std::numbers::pi;

struct Geometry {
  double draw_side = 0.0;  // side of the square nodes are drawn in
  double wrap = 0.0;       // torus wrap length; 0 selects plain distance
  double rx_x = 0.0, rx_y = 0.0;

  double dist2(double px, double py) const {
    double dx = px - rx_x;
    double dy = py - rx_y;
    if (wrap > 0.0) {
      dx = std::fabs(dx);
      if (dx > 0.5 * wrap) dx = wrap - dx;
      dy = std::fabs(dy);
      if (dy > 0.5 * wrap) dy = wrap - dy;
    }
    return dx * dx + dy * dy;
  }
};

// 1/l(d) from the squared distance; beta = 4 avoids the pow call entirely.
struct Gain {
  double a2, half_beta;
  bool quartic;
  explicit Gain(const PathLoss& pl)
      : a2(pl.A * pl.A), half_beta(pl.beta / 2.0), quartic(pl.beta == 4.0) {}
  double operator()(double d2) const {
    const double s = a2 * d2;
    return quartic ? 1.0 / (s * s) : std::pow(s, -half_beta);
  }
};

void check_config(const Scenario& sc, const SimConfig& cfg) {
  sc.validate();
  if (!(cfg.window_side > 4.0 * sc.r))
    throw std::invalid_argument("window_side must exceed 4 r");
  if (cfg.replications < 1)
    throw std::invalid_argument("need at least one replication");
  if (cfg.guard_width < 0.0)
    throw std::invalid_argument("guard width must be >= 0");
}

Geometry make_geometry(const SimConfig& cfg, double rx_x, double rx_y) {
  Geometry g;
  if (cfg.boundary == Boundary::torus) {
    g.draw_side = cfg.window_side;
    g.wrap = cfg.window_side;
  } else {
    g.draw_side = cfg.window_side + 2.0 * cfg.guard_width;
    g.wrap = 0.0;
  }
  g.rx_x = rx_x;
  g.rx_y = rx_y;
  return g;
}

// Replications are independent: each gets its own counter-derived substream,
// so the estimate is bit-identical whether the loop runs serial or parallel.
template <typename Body>
void run_reps(std::size_t n, ExecMode mode, const Body& body) {
#ifdef _OPENMP
  if (mode == ExecMode::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#endif
  (void)mode;
  for (std::size_t i = 0; i < n; ++i) body(i);
}

Estimate coverage_from_flags(const std::vector<unsigned char>& flags) {
  std::size_t c = 0;
  for (unsigned char v : flags) c += v;
  if (flags.size() >= 2) return estimate_coverage(c, flags.size());
  Estimate e;
  e.mean = flags.empty() ? 0.0 : static_cast<double>(c);
  e.n = flags.size();
  return e;
}

// Stationary ON/OFF walk over [0, horizon): ON w.p. tau at time 0 with a
// uniform elapsed ON age, otherwise a memoryless residual OFF; then
// alternating ON = B, OFF ~ Exp(eps). Calls f(a, b) once per transmission
// overlapping the horizon and returns the total overlap fraction.
template <typename F>
double walk_on_intervals(const MacModel& mac, RngStream& rs, double horizon,
                         const F& f) {
  const double tau = mac.access_fraction();
  double s;
  if (rs.uniform() < tau)
    s = -mac.B * rs.uniform();
  else if (mac.epsilon > 0.0)
    s = rs.exponential(mac.epsilon);
  else
    return 0.0;
  double overlap = 0.0;
  while (s < horizon) {
    const double a = s > 0.0 ? s : 0.0;
    const double b = std::min(s + mac.B, horizon);
    if (b > a) {
      f(a, b);
      overlap += b - a;
    }
    if (mac.epsilon <= 0.0) break;
    s += mac.B + rs.exponential(mac.epsilon);
  }
  return overlap / horizon;
}

double receiver_gain(const Scenario& sc) {
  return 1.0 / std::pow(sc.pathloss.A * sc.r, sc.pathloss.beta);
}

}  // namespace

NetworkDraw draw_network(const Scenario& sc, const SimConfig& cfg,
                         std::uint64_t replication) {
  check_config(sc, cfg);
  RngStream rs = RngStream::substream(cfg.seed, replication);
  const double phi = 2.0 * kPi * rs.uniform();
  NetworkDraw nd;
  nd.rx_x = sc.r * std::cos(phi);
  nd.rx_y = sc.r * std::sin(phi);
  const Geometry g = make_geometry(cfg, nd.rx_x, nd.rx_y);
  const std::size_t n = rs.poisson(sc.lambda * g.draw_side * g.draw_side);
  nd.x.resize(n);
  nd.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    nd.x[i] = (rs.uniform() - 0.5) * g.draw_side;
    nd.y[i] = (rs.uniform() - 0.5) * g.draw_side;
  }
  nd.count = n;
  return nd;
}

std::vector<TimelineEvent> renewal_timeline(const MacModel& mac, RngStream& rs,
                                            std::size_t node_id, double horizon) {
  if (mac.kind != Mac::renewal)
    throw std::invalid_argument("timelines are defined for the renewal MAC");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  std::vector<TimelineEvent> ev;
  walk_on_intervals(mac, rs, horizon, [&](double a, double b) {
    ev.push_back({node_id, TimelineEvent::Kind::tx_start, a});
    ev.push_back({node_id, TimelineEvent::Kind::tx_end, b});
  });
  return ev;
}

double peak_interference(const std::vector<TimelineEvent>& tl,
                         const std::vector<double>& weights) {
  if (tl.size() != 2 * weights.size())
    throw std::invalid_argument("need one (tx_start, tx_end) pair per weight");
  std::vector<std::pair<double, double>> ev;  // (time, signed weight)
  ev.reserve(tl.size());
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const TimelineEvent& a = tl[2 * k];
    const TimelineEvent& b = tl[2 * k + 1];
    if (a.kind != TimelineEvent::Kind::tx_start ||
        b.kind != TimelineEvent::Kind::tx_end || !(a.time <= b.time) ||
        !(weights[k] >= 0.0))
      throw std::invalid_argument("malformed timeline pair");
    if (a.time == b.time) continue;
    ev.emplace_back(a.time, weights[k]);
    ev.emplace_back(b.time, -weights[k]);
  }
  // Pair ordering puts the -w of an interval ending at t before the +w of one
  // starting at t, matching the half-open [a, b) activity convention.
  std::sort(ev.begin(), ev.end());
  double run = 0.0, peak = 0.0;
  for (const auto& [t, d] : ev) {
    run += d;
    peak = std::max(peak, run);
  }
  return peak;
}

SlottedResult simulate_slotted(const Scenario& sc, const SimConfig& cfg) {
  check_config(sc, cfg);
  if (sc.mac.kind != Mac::slotted)
    throw std::invalid_argument("simulate_slotted requires a slotted MAC");
  const std::size_t reps = cfg.replications;
  std::vector<double> interf(reps);
  std::vector<unsigned char> success(reps);
  const Gain gain(sc.pathloss);
  const double g_r = receiver_gain(sc);
  // Per replication: receiver angle, tagged fade, interferer count (already
  // thinned to intensity lambda*p), then position + fade per interferer.
  run_reps(reps, cfg.mode, [&](std::size_t rep) {
    RngStream rs = RngStream::substream(cfg.seed, rep);
    const double phi = 2.0 * kPi * rs.uniform();
    const Geometry g =
        make_geometry(cfg, sc.r * std::cos(phi), sc.r * std::sin(phi));
    const double f0 = sample(sc.fading, rs);
    const std::size_t n =
        rs.poisson(sc.lambda * sc.mac.p * g.draw_side * g.draw_side);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double px = (rs.uniform() - 0.5) * g.draw_side;
      const double py = (rs.uniform() - 0.5) * g.draw_side;
      acc += sample(sc.fading, rs) * gain(g.dist2(px, py));
    }
    interf[rep] = acc;
    success[rep] = f0 * g_r >= sc.T * (sc.noise_w + acc) ? 1 : 0;
  });
  SlottedResult res;
  res.coverage = coverage_from_flags(success);
  res.interference = std::move(interf);
  return res;
}

RenewalResult simulate_renewal(const Scenario& sc, const SimConfig& cfg) {
  check_config(sc, cfg);
  if (sc.mac.kind != Mac::renewal)
    throw std::invalid_argument("simulate_renewal requires a renewal MAC");
  const std::size_t reps = cfg.replications;
  const double b_len = sc.mac.B;
  std::vector<double> i_mean(reps), i_max(reps);
  std::vector<unsigned char> s_mean(reps), s_max(reps);
  std::vector<double> on_sum(reps), on_sumsq(reps);
  std::vector<std::size_t> node_count(reps);
  const Gain gain(sc.pathloss);
  const double g_r = receiver_gain(sc);
  // Per replication: receiver angle, tagged fade, node count, then per node
  // the MAC walk with position and per-transmission fades drawn lazily at the
  // first overlap (nodes silent during the tagged packet cost no draws).
  run_reps(reps, cfg.mode, [&](std::size_t rep) {
    RngStream rs = RngStream::substream(cfg.seed, rep);
    const double phi = 2.0 * kPi * rs.uniform();
    const Geometry g =
        make_geometry(cfg, sc.r * std::cos(phi), sc.r * std::sin(phi));
    const double f0 = sample(sc.fading, rs);
    const std::size_t n = rs.poisson(sc.lambda * g.draw_side * g.draw_side);
    std::vector<TimelineEvent> tl;
    std::vector<double> weights;
    double acc = 0.0, osum = 0.0, osq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double gv = -1.0;  // position not drawn yet
      const double frac =
          walk_on_intervals(sc.mac, rs, b_len, [&](double a, double b) {
            if (gv < 0.0) {
              const double px = (rs.uniform() - 0.5) * g.draw_side;
              const double py = (rs.uniform() - 0.5) * g.draw_side;
              gv = gain(g.dist2(px, py));
            }
            const double w = sample(sc.fading, rs) * gv;
            acc += w * (b - a) / b_len;
            tl.push_back({i, TimelineEvent::Kind::tx_start, a});
            tl.push_back({i, TimelineEvent::Kind::tx_end, b});
            weights.push_back(w);
          });
      osum += frac;
      osq += frac * frac;
    }
    i_mean[rep] = acc;
    i_max[rep] = peak_interference(tl, weights);
    s_mean[rep] = f0 * g_r >= sc.T * (sc.noise_w + i_mean[rep]) ? 1 : 0;
    s_max[rep] = f0 * g_r >= sc.T * (sc.noise_w + i_max[rep]) ? 1 : 0;
    on_sum[rep] = osum;
    on_sumsq[rep] = osq;
    node_count[rep] = n;
  });

  RenewalResult res;
  res.coverage_mean = coverage_from_flags(s_mean);
  res.coverage_max = coverage_from_flags(s_max);
  double s = 0.0, q = 0.0;
  std::size_t n_nodes = 0;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    s += on_sum[rep];
    q += on_sumsq[rep];
    n_nodes += node_count[rep];
  }
  res.on_fraction.n = n_nodes;
  if (n_nodes >= 1) res.on_fraction.mean = s / static_cast<double>(n_nodes);
  if (n_nodes >= 2) {
    const double nn = static_cast<double>(n_nodes);
    const double var = std::max(0.0, (q - s * s / nn) / (nn - 1.0));
    res.on_fraction.std_error = std::sqrt(var / nn);
    res.on_fraction.ci95_halfwidth = 1.96 * res.on_fraction.std_error;
  }
  res.interference_mean = std::move(i_mean);
  res.interference_max = std::move(i_max);
  return res;
}

RainResult simulate_rain(const Scenario& sc, const SimConfig& cfg) {
  check_config(sc, cfg);
  if (sc.mac.kind != Mac::rain)
    throw std::invalid_argument("simulate_rain requires a rain MAC");
  const std::size_t reps = cfg.replications;
  const double b_len = sc.mac.B;
  std::vector<double> interf(reps);
  std::vector<unsigned char> success(reps);
  const Gain gain(sc.pathloss);
  const double g_r = receiver_gain(sc);
  // Transmissions overlapping the tagged packet [0, B) are exactly the births
  // of the space-time rain (rate lambda*tau/B) in window x [-B, B); one that
  // starts at offset t overlaps for B - |t|.
  run_reps(reps, cfg.mode, [&](std::size_t rep) {
    RngStream rs = RngStream::substream(cfg.seed, rep);
    const double phi = 2.0 * kPi * rs.uniform();
    const Geometry g =
        make_geometry(cfg, sc.r * std::cos(phi), sc.r * std::sin(phi));
    const double f0 = sample(sc.fading, rs);
    const std::size_t m = rs.poisson(2.0 * sc.lambda * sc.mac.tau_rain *
                                     g.draw_side * g.draw_side);
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double t = (2.0 * rs.uniform() - 1.0) * b_len;
      const double px = (rs.uniform() - 0.5) * g.draw_side;
      const double py = (rs.uniform() - 0.5) * g.draw_side;
      const double f = sample(sc.fading, rs);
      acc += f * gain(g.dist2(px, py)) * (b_len - std::fabs(t)) / b_len;
    }
    interf[rep] = acc;
    success[rep] = f0 * g_r >= sc.T * (sc.noise_w + acc) ? 1 : 0;
  });
  RainResult res;
  res.coverage = coverage_from_flags(success);
  res.interference = std::move(interf);
  return res;
}

Estimate empirical_laplace(const std::vector<double>& samples, double xi) {
  if (samples.empty())
    throw std::invalid_argument("empirical transform needs samples");
  if (!(xi >= 0.0))
    throw std::invalid_argument("transform argument must be >= 0");
  double sum = 0.0;
  for (double s : samples) sum += std::exp(-xi * s);
  Estimate e;
  e.n = samples.size();
  e.mean = sum / static_cast<double>(samples.size());
  if (samples.size() >= 2) {
    double q = 0.0;
    for (double s : samples) {
      const double d = std::exp(-xi * s) - e.mean;
      q += d * d;
    }
    e.std_error = std::sqrt(q / static_cast<double>(samples.size() - 1) /
                            static_cast<double>(samples.size()));
    e.ci95_halfwidth = 1.96 * e.std_error;
  }
  return e;
}

Estimate estimate_coverage(std::size_t successes, std::size_t n) {
  if (n < 2) throw std::invalid_argument("need at least two trials");
  if (successes > n) throw std::invalid_argument("successes exceed trials");
  Estimate e;
  e.n = n;
  e.mean = static_cast<double>(successes) / static_cast<double>(n);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(n));
  e.ci95_halfwidth = 1.96 * e.std_error;
  return e;
}

}  // namespace aloha::sim
