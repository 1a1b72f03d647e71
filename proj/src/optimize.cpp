#include "aloha/optimize.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "aloha/analytic.hpp"

namespace aloha::optimize {

double zeta(double beta) { return analytic::zeta_factor(beta); }

double throughput_ratio(double beta) { return 1.0 / analytic::zeta_factor(beta); }

OptimaReport optimal_tau(const Scenario& sc, Mac mac) {
  sc.validate();
  if (mac == Mac::renewal)
    throw std::invalid_argument("optimal_tau covers slotted and rain access only");
  if (sc.fading.kind != Fading::rayleigh)
    throw std::invalid_argument("optimal_tau requires Rayleigh fading");
  if (sc.noise_w != 0.0)
    throw std::invalid_argument("optimal_tau requires W = 0");

  const double beta = sc.pathloss.beta;
  const double alpha = 2.0 / beta;
  const double slope = sc.lambda * sc.r * sc.r * std::pow(sc.T, alpha) *
                       analytic::kappa_coverage(beta, mac);

  OptimaReport rep;
  rep.model_tag = mac == Mac::slotted ? "slotted" : "rain";
  rep.tau_max = std::min(1.0, 1.0 / slope);

  Scenario at = sc;
  at.mac = mac == Mac::slotted ? MacModel::slotted(rep.tau_max)
                               : MacModel::rain(rep.tau_max);
  rep.p_c_at_opt = analytic::coverage_rayleigh(at);
  rep.d_max = sc.lambda * rep.tau_max * rep.p_c_at_opt;
  return rep;
}

namespace {

Scenario at_axis_point(const Scenario& base, SweepAxis axis, double x) {
  Scenario sc = base;
  switch (axis) {
    case SweepAxis::tau:
      switch (sc.mac.kind) {
        case Mac::slotted:
          sc.mac = MacModel::slotted(x);
          break;
        case Mac::rain:
          sc.mac = MacModel::rain(x, sc.mac.B);
          break;
        case Mac::renewal: {
          if (!(x >= 0.0 && x < 1.0))
            throw std::invalid_argument(
                "renewal access fraction must lie in [0, 1)");
          const double eps = x / ((1.0 - x) * sc.mac.B);
          sc.mac = MacModel::renewal(sc.mac.B, eps);
          break;
        }
      }
      break;
    case SweepAxis::beta:
      sc.pathloss.beta = x;
      break;
    case SweepAxis::T:
      sc.T = x;
      break;
    case SweepAxis::lambda:
      sc.lambda = x;
      break;
  }
  return sc;
}

}  // namespace

std::vector<SweepRow> sweep(const Scenario& base, SweepAxis axis,
                            const std::vector<double>& grid, SweepQuantity q,
                            double xi_point, const numerics::QuadSpec& spec,
                            const numerics::InversionSpec& inv) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double x : grid) {
    SweepRow row;
    row.x = x;
    try {
      const Scenario sc = at_axis_point(base, axis, x);
      switch (q) {
        case SweepQuantity::coverage:
          row.value = analytic::coverage_probability(sc, spec, inv);
          break;
        case SweepQuantity::throughput:
          row.value = analytic::spatial_throughput(sc, spec, inv);
          break;
        case SweepQuantity::lt_at_point:
          row.value = analytic::InterferenceLT::for_scenario(sc, spec)(xi_point);
          break;
      }
      row.ok = true;
    } catch (const std::exception& e) {
      row.value = std::numeric_limits<double>::quiet_NaN();
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace aloha::optimize
