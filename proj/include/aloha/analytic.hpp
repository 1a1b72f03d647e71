#pragma once
// Interference Laplace transforms and SINR coverage for the three MAC models.
//
// Every mean-interference transform here reduces to the stable-law form
// L(xi) = exp(-coef * xi^(2/beta)): substituting u = xi/v inside the
// point-process exponent makes the remaining shape integral independent of
// xi, so a transform is fully described by (alpha, coef). Complex arguments
// (needed by CDF inversion on a Bromwich contour) use the principal branch of
// s^alpha, the unique analytic continuation off the positive axis.

#include <complex>

#include "aloha/model.hpp"
#include "aloha/numerics.hpp"

namespace aloha::analytic {

// Contention cost of non-synchronization, 2*beta/(2+beta).
double zeta_factor(double beta);

// Spatial contention constant in the LT exponent: pi*Gamma(1-2/beta) for
// slotted access, multiplied by zeta_factor(beta) for rain access.
// The renewal model has no single kappa (its shape depends on eps*B).
double kappa(double beta, Mac mac);

// Contention constant in the Rayleigh coverage exponent:
// pi*Gamma(1-2/beta)*Gamma(1+2/beta), times zeta_factor(beta) for rain.
double kappa_coverage(double beta, Mac mac);

struct InterferenceLT {
  double alpha = 0.5;  // 2/beta
  double coef = 0.0;   // L(xi) = exp(-coef * xi^alpha)

  double operator()(double xi) const;
  std::complex<double> operator()(std::complex<double> s) const;

  static InterferenceLT slotted(const Scenario& sc);
  static InterferenceLT rain_mean(const Scenario& sc);
  static InterferenceLT renewal_mean_general(const Scenario& sc,
                                             const numerics::QuadSpec& spec = {});
  static InterferenceLT renewal_mean_nofading(const Scenario& sc,
                                              const numerics::QuadSpec& spec = {});
  static InterferenceLT renewal_mean_rayleigh(const Scenario& sc,
                                              const numerics::QuadSpec& spec = {});
  // Dispatch on sc.mac (and, for renewal, sc.fading) to the best evaluator.
  static InterferenceLT for_scenario(const Scenario& sc,
                                     const numerics::QuadSpec& spec = {});
};

// Transform of the interference seen in one slot (slotted access).
double lt_slotted(const Scenario& sc, double xi);
// Transform of the packet-averaged interference, rain access.
double lt_rain_mean(const Scenario& sc, double xi);
// Transform of the packet-averaged interference, renewal access; the general
// route works for every fading law via the two-fade transform.
double lt_renewal_mean_general(const Scenario& sc, double xi,
                               const numerics::QuadSpec& spec = {});
// Specialized renewal routes: a fully closed interior kernel for F = 1, and
// an independent derivation (fading integrated in the plane rather than
// through the two-fade transform) for Rayleigh fading.
double lt_renewal_mean_nofading(const Scenario& sc, double xi,
                                const numerics::QuadSpec& spec = {});
double lt_renewal_mean_rayleigh(const Scenario& sc, double xi,
                                const numerics::QuadSpec& spec = {});

// Coverage probability P(SINR >= T) for Rayleigh fading: closed form for
// slotted and rain access, quadrature-backed transform for renewal access.
double coverage_rayleigh(const Scenario& sc);
double coverage_rayleigh_renewal(const Scenario& sc,
                                 const numerics::QuadSpec& spec = {});

// Coverage for F = 1 via numerical inversion of the interference CDF.
double coverage_nofading(const Scenario& sc, const numerics::QuadSpec& spec = {},
                         const numerics::InversionSpec& inv = {});

// Dispatch: rayleigh -> closed/quadrature coverage, deterministic ->
// inversion; other fading laws have no analytic coverage here.
double coverage_probability(const Scenario& sc, const numerics::QuadSpec& spec = {},
                            const numerics::InversionSpec& inv = {});

// lambda * tau * coverage: successful transmissions per unit area and time.
double spatial_throughput(const Scenario& sc, const numerics::QuadSpec& spec = {},
                          const numerics::InversionSpec& inv = {});

}  // namespace aloha::analytic
