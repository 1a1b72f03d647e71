#pragma once
// Experiment description: path loss, fading law, MAC variant, and the full
// scenario, plus the fading functionals the transform formulas consume.

#include "aloha/numerics.hpp"
#include "aloha/rng.hpp"

namespace aloha {

struct PathLoss {
  double A = 1.0;     // inverse-distance scale
  double beta = 4.0;  // attenuation exponent; > 2 or none of the integrals converge
  // l(u) = (A u)^beta
  double operator()(double u) const;
  void validate() const;
};

enum class Fading { deterministic, rayleigh, lognormal, nakagami };

// Mark distribution of the per-transmission fading F. Parametrizations keep
// E[F] = 1 at the defaults: Rayleigh power fading is Exp(mu) with mean 1/mu
// (mu = 1 throughout), LogNormal is exp(-sigma^2/2 + sigma Z), Nakagami power
// is Gamma(k, 1/k).
struct FadingModel {
  Fading kind = Fading::rayleigh;
  double param = 1.0;  // rayleigh: rate mu; lognormal: sigma; nakagami: shape k

  static FadingModel deterministic() { return {Fading::deterministic, 1.0}; }
  static FadingModel rayleigh(double mu = 1.0) { return {Fading::rayleigh, mu}; }
  static FadingModel lognormal(double sigma) { return {Fading::lognormal, sigma}; }
  static FadingModel nakagami(double k) { return {Fading::nakagami, k}; }
  void validate() const;
  double mean() const;
};

// E[F^(2/beta)]
double frac_moment(const FadingModel& f, double beta);

// E[exp(-s F)]
double laplace_f(const FadingModel& f, double s);

// E[F'^(2/beta) * laplace_f(eta / F')] / E[F^(2/beta)], with F' an
// independent copy of the fading. Equals exp(-eta) for deterministic fading
// and 1 at eta = 0 for every law.
double tilde_laplace(const FadingModel& f, double eta, double beta,
                     const numerics::QuadSpec& spec = {});

// E[1 - exp(-s F)]; equals 1 - laplace_f but keeps full relative accuracy as
// s -> 0, where the direct difference cancels to roundoff.
double one_minus_laplace_f(const FadingModel& f, double s);

// E[F'^(2/beta) * (1 - laplace_f(eta / F'))] / E[F^(2/beta)], the stable
// complement of tilde_laplace: O(eta) as eta -> 0 with bounded relative
// error, where 1 - tilde_laplace loses every digit.
double tilde_one_minus(const FadingModel& f, double eta, double beta,
                       const numerics::QuadSpec& spec = {});

// Draw one fading mark.
double sample(const FadingModel& f, RngStream& rng);

enum class Mac { slotted, renewal, rain };

struct MacModel {
  Mac kind = Mac::slotted;
  double p = 0.05;        // slotted: per-slot transmit probability
  double B = 1.0;         // renewal/rain: packet duration
  double epsilon = 0.0;   // renewal: back-off rate (idle time ~ Exp(epsilon))
  double tau_rain = 0.0;  // rain: channel-occupation fraction

  static MacModel slotted(double p);
  static MacModel renewal(double B, double epsilon);
  static MacModel rain(double tau, double B = 1.0);
  // Fraction of time (or slots) a node spends transmitting:
  // p / (eps*B)/(1+eps*B) / tau.
  double access_fraction() const;
  void validate() const;
};

struct Scenario {
  double lambda = 1.0;  // transmitter density
  double r = 1.0;       // transmitter-receiver distance
  double T = 10.0;      // SINR threshold, linear scale
  double noise_w = 0.0; // constant noise power W
  FadingModel fading = FadingModel::rayleigh();
  PathLoss pathloss{};
  MacModel mac = MacModel::slotted(0.05);
  void validate() const;
};

}  // namespace aloha
