#pragma once
// Throughput-optimal access tuning and parameter sweeps.

#include <string>
#include <vector>

#include "aloha/model.hpp"
#include "aloha/numerics.hpp"

namespace aloha::optimize {

// Contention cost of non-synchronization, 2*beta/(2+beta): the factor by
// which rain access inflates the interference exponent relative to slotted.
double zeta(double beta);

// Spatial throughput of slotted relative to rain access at their respective
// optimal access fractions: 1/zeta(beta) = (beta+2)/(2*beta).
double throughput_ratio(double beta);

struct OptimaReport {
  double tau_max = 0.0;     // throughput-maximizing access fraction (clamped to 1)
  double d_max = 0.0;       // spatial throughput at tau_max
  double p_c_at_opt = 0.0;  // coverage at tau_max; exp(-1) when unclamped
  std::string model_tag;    // "slotted" or "rain"
};

// Closed-form optimum of tau -> lambda*tau*coverage for Rayleigh fading and
// W = 0 (the regimes where coverage is a pure exponential in tau).
OptimaReport optimal_tau(const Scenario& sc, Mac mac);

enum class SweepAxis { tau, beta, T, lambda };
enum class SweepQuantity { coverage, throughput, lt_at_point };

struct SweepRow {
  double x = 0.0;
  double value = 0.0;
  bool ok = false;
  std::string error;  // empty when ok
};

// Evaluate a quantity along a one-parameter family of scenarios. A failure at
// one grid point is recorded in its row and does not abort the sweep. For the
// tau axis the renewal MAC keeps B and solves for eps; slotted and rain set
// their access parameter directly. lt_at_point evaluates the interference
// transform at xi = xi_point.
std::vector<SweepRow> sweep(const Scenario& base, SweepAxis axis,
                            const std::vector<double>& grid, SweepQuantity q,
                            double xi_point = 1.0,
                            const numerics::QuadSpec& spec = {},
                            const numerics::InversionSpec& inv = {});

}  // namespace aloha::optimize
