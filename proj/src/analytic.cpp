#include "aloha/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace aloha::analytic {

namespace {

constexpr double kPi = std::numbers::pi;

// Interior-kernel integrands have boundary layers of width 1/x and 1/eta;
// panels are split where a layer has decayed to ~e^-5 and ~e^-40 so the
// adaptive rule never has to discover a layer on its own.
constexpr double kLayerNear = 5.0;
constexpr double kLayerFar = 40.0;

void require_beta(double beta) {
  if (!(beta > 2.0)) throw std::domain_error("beta must exceed 2");
}

std::vector<double> make_breaks(double lo, double hi,
                                std::initializer_list<double> pts) {
  const double span = hi - lo;
  std::vector<double> mid;
  for (double p : pts)
    if (std::isfinite(p) && p > lo + 1e-13 * span && p < hi - 1e-13 * span)
      mid.push_back(p);
  std::sort(mid.begin(), mid.end());
  std::vector<double> out{lo};
  for (double v : mid)
    if (v - out.back() > 1e-13 * span) out.push_back(v);
  out.push_back(hi);
  return out;
}

// (exp(-x*w) - exp(-eta*w)) / (eta - x), continuous at eta == x where the
// value is w*exp(-x*w). The expm1 branch handles the cancellation region,
// the direct branch avoids overflow when the exponents are far apart.
double dexp_ratio(double w, double x, double eta) {
  const double dd = (eta - x) * w;
  if (std::fabs(dd) < 1.0) {
    const double ratio = (dd == 0.0) ? 1.0 : -std::expm1(-dd) / dd;
    return w * std::exp(-x * w) * ratio;
  }
  return (std::exp(-x * w) - std::exp(-eta * w)) / (eta - x);
}

// (exp(-x) - exp(-eta)*(1 - (x - eta))) / (x - eta)^2, the doubly-collided
// remainder of the closed F = 1 kernel; limit at eta == x is exp(-eta)/2.
double qf(double eta, double x) {
  const double d = x - eta;
  if (std::fabs(d) < 1e-2) {
    const double p =
        0.5 +
        d * (-1.0 / 6 +
             d * (1.0 / 24 + d * (-1.0 / 120 + d * (1.0 / 720 - d / 5040))));
    return std::exp(-eta) * p;
  }
  if (std::fabs(d) < 1.0)
    return std::exp(-eta) * (std::expm1(-d) + d) / (d * d);
  return (std::exp(-x) - std::exp(-eta) * (1.0 - d)) / (d * d);
}

// Closed interior kernel for F = 1: probability-weighted mix of the
// ON-at-birth and OFF-at-birth interference contributions of one node.
// Vanishes at eta = 0 exactly and tends to 1 - (1-tau)*exp(-x) as eta grows.
double interior_closed(double eta, double x, double tau) {
  const double e1 = dexp_ratio(1.0, eta, x);
  const double f1 = x * qf(eta, x) + e1;
  const double f2 = x * e1 + std::exp(-x);
  return 1.0 - tau * f1 - (1.0 - tau) * f2;
}

struct KernelSpecs {
  numerics::QuadSpec mid;    // own one-dimensional integrals
  numerics::QuadSpec tight;  // integrals nested one level deeper
};

// Every interior kernel G(eta) = 1 - tau*f1(eta) - (1-tau)*f2(eta) vanishes
// linearly at eta = 0, so the direct form computes it there as a roundoff
// residue of O(1) terms. The low shape piece divides by eta^alpha on top,
// which turns that absolute noise floor into an unbounded relative error and
// stalls (or blows up) the adaptive rule. Each kernel therefore also carries
// a complement form G = tau*(1 - f1) + (1-tau)*(1 - f2), valid for
// eta <= 1, whose integrands are nonnegative and O(eta) termwise.

// Nested quadratures must run tighter than the level above, or the noise of
// the inner estimate stalls the outer refinement.
KernelSpecs nested_specs(const numerics::QuadSpec& outer) {
  KernelSpecs ks;
  ks.mid.rel_tol = std::max(1e-13, 0.1 * outer.rel_tol);
  ks.mid.abs_tol = 1e-13;
  ks.mid.max_subdivisions = outer.max_subdivisions;
  ks.tight.rel_tol = std::max(1e-13, 0.01 * outer.rel_tol);
  ks.tight.abs_tol = 1e-15;
  ks.tight.max_subdivisions = outer.max_subdivisions;
  return ks;
}

// Complement of the closed F = 1 kernel for eta <= 1. Both 1 - f2 and
// 1 - f1 are probability mixtures of 1 - exp(-eta * overlap) >= 0, obtained
// by absorbing the leading 1 into the mixing measure: 1 - e^-x =
// x int_0^1 e^{-xs} ds for the OFF branch, and for the ON branch
// 1 = x int_0^1 (1-v) e^{-xv} dv + int_0^1 e^{-x(1-u)} du.
struct NoFadeSmallKernel {
  double x = 0, tau = 0;
  KernelSpecs ks;

  double operator()(double eta) const {
    if (eta == 0.0 || x == 0.0) return 0.0;
    const auto b0 = make_breaks(0.0, 1.0, {kLayerNear / x, kLayerFar / x});
    const auto b1 =
        make_breaks(0.0, 1.0, {1.0 - kLayerFar / x, 1.0 - kLayerNear / x});
    auto off_i = [&](double s) {
      return std::exp(-x * s) * (-std::expm1(-eta * (1.0 - s)));
    };
    const double off = x * numerics::integrate_panels(off_i, b0, ks.mid);
    auto on_tail = [&](double v) {
      return -std::expm1(-eta * (1.0 - v)) * (1.0 - v) * std::exp(-x * v);
    };
    auto on_head = [&](double u) {
      return -std::expm1(-eta * u) * std::exp(-x * (1.0 - u));
    };
    const double on = x * numerics::integrate_panels(on_tail, b0, ks.mid) +
                      numerics::integrate_panels(on_head, b1, ks.mid);
    return tau * on + (1.0 - tau) * off;
  }
};

// Interior kernel for arbitrary fading, averaging over the fades of both the
// tagged and the interfering transmission through the normalized two-fade
// transform tilde_laplace.
struct TwoFadeKernel {
  double x = 0, tau = 0, beta = 4;
  FadingModel fading;
  KernelSpecs ks;

  double tilde(double eta) const {
    return tilde_laplace(fading, eta, beta, ks.tight);
  }

  double tilde_c(double eta) const {
    return tilde_one_minus(fading, eta, beta, ks.tight);
  }

  double operator()(double eta) const {
    if (eta == 0.0) return 0.0;
    auto f2i = [&](double s) { return std::exp(-x * s) * tilde(eta * (1.0 - s)); };
    const auto b2 = make_breaks(0.0, 1.0,
                                {kLayerNear / x, kLayerFar / x,
                                 1.0 - kLayerFar / eta, 1.0 - kLayerNear / eta});
    const double f2 = x * numerics::integrate_panels(f2i, b2, ks.mid) + std::exp(-x);

    auto f1i = [&](double t) { return dexp_ratio(1.0 - t, x, eta) * tilde(eta * t); };
    const auto b1 = make_breaks(0.0, 1.0,
                                {1.0 - kLayerFar / x, 1.0 - kLayerNear / x,
                                 1.0 - kLayerFar / eta, 1.0 - kLayerNear / eta,
                                 kLayerNear / eta, kLayerFar / eta});
    const double f1 =
        x * numerics::integrate_panels(f1i, b1, ks.mid) + dexp_ratio(1.0, eta, x);
    return 1.0 - tau * f1 - (1.0 - tau) * f2;
  }

  // Complement form for eta <= 1. The OFF branch mirrors NoFadeSmallKernel
  // with tilde_one_minus in place of 1 - e^-eta(..). The ON branch splits
  // the unit mass as 1 = x int_0^1 d0(1-t) dt + int_0^1 e^{-x(1-u)} du with
  // d0(w) = (1 - e^{-xw})/x, and pairs it with f1's integrand through
  //   d0 - d_eta * tilde = d0 * (1 - tilde) + (d0 - d_eta) * tilde,
  // where d_eta(w) = dexp_ratio(w, x, eta) and
  // d0(w) - d_eta(w) = int_0^w e^{-xv} (1 - e^{-eta(w-v)}) dv >= 0.
  double small(double eta) const {
    if (eta == 0.0 || x == 0.0) return 0.0;
    const auto b0 = make_breaks(0.0, 1.0, {kLayerNear / x, kLayerFar / x});
    const auto b1 =
        make_breaks(0.0, 1.0, {1.0 - kLayerFar / x, 1.0 - kLayerNear / x});
    auto f2i = [&](double s) {
      return std::exp(-x * s) * tilde_c(eta * (1.0 - s));
    };
    const double off = x * numerics::integrate_panels(f2i, b0, ks.mid);

    auto head = [&](double u) {
      return -std::expm1(-eta * u) * std::exp(-x * (1.0 - u));
    };
    auto gap = [&](double w) {
      auto vi = [&](double v) {
        return std::exp(-x * v) * (-std::expm1(-eta * (w - v)));
      };
      return numerics::integrate_panels(
          vi, make_breaks(0.0, w, {kLayerNear / x, kLayerFar / x}), ks.tight);
    };
    auto body = [&](double t) {
      const double w = 1.0 - t;
      return (-std::expm1(-x * w) / x) * tilde_c(eta * t) +
             tilde(eta * t) * gap(w);
    };
    const double on = numerics::integrate_panels(head, b1, ks.mid) +
                      x * numerics::integrate_panels(body, b1, ks.mid);
    return tau * on + (1.0 - tau) * off;
  }
};

// Interior kernel for Rayleigh fading with the fading integrated directly in
// the plane (unit-rate fades; the rate enters through the argument scaling of
// the final transform). Independent of the two-fade route, which makes the
// agreement of the two a real cross-check.
struct PlanarRayleighKernel {
  double x = 0, tau = 0;
  KernelSpecs ks;

  double operator()(double w) const {
    if (w == 0.0) return 0.0;
    auto off_i = [&](double s) { return std::exp(-x * s) / (1.0 + (1.0 - s) * w); };
    const auto boff = make_breaks(0.0, 1.0,
                                  {kLayerNear / x, kLayerFar / x,
                                   1.0 - kLayerFar / w, 1.0 - kLayerNear / w});
    const double p_off =
        x * numerics::integrate_panels(off_i, boff, ks.mid) + std::exp(-x);

    auto on_outer = [&](double u) {
      auto on_i = [&](double sig) {
        return std::exp(-x * sig) / (1.0 + (u - sig) * w);
      };
      const auto bu = make_breaks(0.0, u,
                                  {kLayerNear / x, kLayerFar / x,
                                   u - kLayerFar / w, u - kLayerNear / w});
      const double seen =
          x * numerics::integrate_panels(on_i, bu, ks.tight) + std::exp(-x * u);
      return seen / (1.0 + (1.0 - u) * w);
    };
    const auto bon = make_breaks(0.0, 1.0,
                                 {kLayerNear / x, kLayerFar / x,
                                  1.0 - kLayerFar / w, 1.0 - kLayerNear / w});
    const double p_on = numerics::integrate_panels(on_outer, bon, ks.mid);
    return 1.0 - (1.0 - tau) * p_off - tau * p_on;
  }

  // Complement form for w <= 1: subtracting each resolvent from the matching
  // exponential mass turns 1/(1 + g) into g/(1 + g) termwise, so every
  // integrand below is nonnegative and O(w).
  double small(double w) const {
    if (w == 0.0 || x == 0.0) return 0.0;
    const auto b0 = make_breaks(0.0, 1.0, {kLayerNear / x, kLayerFar / x});
    auto off_i = [&](double s) {
      const double g = (1.0 - s) * w;
      return std::exp(-x * s) * g / (1.0 + g);
    };
    const double q_off = x * numerics::integrate_panels(off_i, b0, ks.mid);

    auto on_outer = [&](double u) {
      auto on_i = [&](double sig) {
        const double g = (u - sig) * w;
        return std::exp(-x * sig) * g / (1.0 + g);
      };
      const double miss = x * numerics::integrate_panels(
          on_i, make_breaks(0.0, u, {kLayerNear / x, kLayerFar / x}), ks.tight);
      return ((1.0 - u) * w + miss) / (1.0 + (1.0 - u) * w);
    };
    const double q_on = numerics::integrate_panels(on_outer, b0, ks.mid);
    return (1.0 - tau) * q_off + tau * q_on;
  }
};

// J(G) = int_0^inf G(eta) * eta^(-1-alpha) deta for a kernel with G(0) = 0,
// G(inf) = c_inf and G - c_inf = O(1/eta). Split at eta = 1, smooth both
// pieces with eta = y^2 (resp. 1/y^2), and integrate the constant tail
// exactly. g_small evaluates the kernel's complement form on eta <= 1, where
// the division by eta^alpha would otherwise amplify the direct form's
// cancellation noise without bound; g_large is the direct form, whose noise
// the bounded y^(2 alpha - 1) weight keeps below the absolute tolerance.
// x_scale hints where the kernel changes character so a breakpoint lands
// there.
double shape_integral(const std::function<double(double)>& g_small,
                      const std::function<double(double)>& g_large,
                      double alpha, double c_inf, double x_scale,
                      const numerics::QuadSpec& outer) {
  numerics::QuadSpec piece = outer;
  piece.abs_tol = outer.abs_tol / 3.0;
  auto f_low = [&](double y) {
    return 2.0 * g_small(y * y) * std::pow(y, -1.0 - 2.0 * alpha);
  };
  auto f_high = [&](double y) {
    return 2.0 * (g_large(1.0 / (y * y)) - c_inf) * std::pow(y, 2.0 * alpha - 1.0);
  };
  std::vector<double> b_low{0.0, 1.0};
  std::vector<double> b_high{0.0, 1.0};
  if (x_scale > 0.0 && x_scale < 1.0)
    b_low = make_breaks(0.0, 1.0, {std::sqrt(x_scale)});
  if (x_scale > 1.0) b_high = make_breaks(0.0, 1.0, {1.0 / std::sqrt(x_scale)});
  return numerics::integrate_panels(f_low, b_low, piece) +
         numerics::integrate_panels(f_high, b_high, piece) + c_inf / alpha;
}

double renewal_tail_constant(double x, double tau) {
  return 1.0 - (1.0 - tau) * std::exp(-x);
}

void require_mac(const Scenario& sc, Mac kind, const char* what) {
  if (sc.mac.kind != kind) throw std::invalid_argument(what);
}

void require_fading(const Scenario& sc, Fading kind, const char* what) {
  if (sc.fading.kind != kind) throw std::invalid_argument(what);
}

}  // namespace

double zeta_factor(double beta) {
  require_beta(beta);
  return 2.0 * beta / (2.0 + beta);
}

double kappa(double beta, Mac mac) {
  require_beta(beta);
  const double base = kPi * numerics::gamma_fn(1.0 - 2.0 / beta);
  switch (mac) {
    case Mac::slotted:
      return base;
    case Mac::rain:
      return zeta_factor(beta) * base;
    default:
      throw std::invalid_argument(
          "kappa is defined for slotted and rain access only");
  }
}

double kappa_coverage(double beta, Mac mac) {
  require_beta(beta);
  const double alpha = 2.0 / beta;
  const double base =
      kPi * numerics::gamma_fn(1.0 - alpha) * numerics::gamma_fn(1.0 + alpha);
  switch (mac) {
    case Mac::slotted:
      return base;
    case Mac::rain:
      return zeta_factor(beta) * base;
    default:
      throw std::invalid_argument(
          "kappa_coverage is defined for slotted and rain access only");
  }
}

double InterferenceLT::operator()(double xi) const {
  if (!(xi >= 0.0)) throw std::invalid_argument("transform argument must be >= 0");
  if (xi == 0.0) return 1.0;
  return std::exp(-coef * std::pow(xi, alpha));
}

std::complex<double> InterferenceLT::operator()(std::complex<double> s) const {
  if (s == std::complex<double>(0.0, 0.0)) return {1.0, 0.0};
  return std::exp(-coef * std::pow(s, alpha));
}

InterferenceLT InterferenceLT::slotted(const Scenario& sc) {
  sc.validate();
  require_mac(sc, Mac::slotted, "slotted transform requires a slotted MAC");
  InterferenceLT lt;
  const double beta = sc.pathloss.beta;
  lt.alpha = 2.0 / beta;
  lt.coef = sc.lambda * sc.mac.p * kPi * numerics::gamma_fn(1.0 - lt.alpha) *
            frac_moment(sc.fading, beta) / (sc.pathloss.A * sc.pathloss.A);
  return lt;
}

InterferenceLT InterferenceLT::rain_mean(const Scenario& sc) {
  sc.validate();
  require_mac(sc, Mac::rain, "rain transform requires a rain MAC");
  InterferenceLT lt;
  const double beta = sc.pathloss.beta;
  lt.alpha = 2.0 / beta;
  lt.coef = sc.lambda * sc.mac.tau_rain * zeta_factor(beta) * kPi *
            numerics::gamma_fn(1.0 - lt.alpha) * frac_moment(sc.fading, beta) /
            (sc.pathloss.A * sc.pathloss.A);
  return lt;
}

InterferenceLT InterferenceLT::renewal_mean_general(const Scenario& sc,
                                                    const numerics::QuadSpec& spec) {
  sc.validate();
  require_mac(sc, Mac::renewal, "renewal transform requires a renewal MAC");
  InterferenceLT lt;
  const double beta = sc.pathloss.beta;
  lt.alpha = 2.0 / beta;
  const double x = sc.mac.epsilon * sc.mac.B;
  const double tau = sc.mac.access_fraction();
  TwoFadeKernel kern{x, tau, beta, sc.fading, nested_specs(spec)};
  const double j = shape_integral([&](double eta) { return kern.small(eta); },
                                  [&](double eta) { return kern(eta); }, lt.alpha,
                                  renewal_tail_constant(x, tau), x, spec);
  lt.coef = sc.lambda * (2.0 * kPi / (sc.pathloss.A * sc.pathloss.A * beta)) *
            frac_moment(sc.fading, beta) * j;
  return lt;
}

InterferenceLT InterferenceLT::renewal_mean_nofading(const Scenario& sc,
                                                     const numerics::QuadSpec& spec) {
  sc.validate();
  require_mac(sc, Mac::renewal, "renewal transform requires a renewal MAC");
  require_fading(sc, Fading::deterministic,
                 "the closed renewal kernel requires deterministic fading");
  InterferenceLT lt;
  const double beta = sc.pathloss.beta;
  lt.alpha = 2.0 / beta;
  const double x = sc.mac.epsilon * sc.mac.B;
  const double tau = sc.mac.access_fraction();
  NoFadeSmallKernel small{x, tau, nested_specs(spec)};
  const double j =
      shape_integral([&](double eta) { return small(eta); },
                     [&](double eta) { return interior_closed(eta, x, tau); },
                     lt.alpha, renewal_tail_constant(x, tau), x, spec);
  lt.coef =
      sc.lambda * (2.0 * kPi / (sc.pathloss.A * sc.pathloss.A * beta)) * j;
  return lt;
}

InterferenceLT InterferenceLT::renewal_mean_rayleigh(const Scenario& sc,
                                                     const numerics::QuadSpec& spec) {
  sc.validate();
  require_mac(sc, Mac::renewal, "renewal transform requires a renewal MAC");
  require_fading(sc, Fading::rayleigh,
                 "the planar renewal kernel requires Rayleigh fading");
  InterferenceLT lt;
  const double beta = sc.pathloss.beta;
  lt.alpha = 2.0 / beta;
  const double x = sc.mac.epsilon * sc.mac.B;
  const double tau = sc.mac.access_fraction();
  PlanarRayleighKernel kern{x, tau, nested_specs(spec)};
  const double j = shape_integral([&](double w) { return kern.small(w); },
                                  [&](double w) { return kern(w); }, lt.alpha,
                                  renewal_tail_constant(x, tau), x, spec);
  lt.coef = sc.lambda * (2.0 * kPi / (sc.pathloss.A * sc.pathloss.A * beta)) *
            j / std::pow(sc.fading.param, lt.alpha);
  return lt;
}

InterferenceLT InterferenceLT::for_scenario(const Scenario& sc,
                                            const numerics::QuadSpec& spec) {
  switch (sc.mac.kind) {
    case Mac::slotted:
      return slotted(sc);
    case Mac::rain:
      return rain_mean(sc);
    case Mac::renewal:
      if (sc.fading.kind == Fading::deterministic)
        return renewal_mean_nofading(sc, spec);
      if (sc.fading.kind == Fading::rayleigh)
        return renewal_mean_rayleigh(sc, spec);
      return renewal_mean_general(sc, spec);
  }
  throw std::invalid_argument("unknown MAC");
}

double lt_slotted(const Scenario& sc, double xi) {
  return InterferenceLT::slotted(sc)(xi);
}

double lt_rain_mean(const Scenario& sc, double xi) {
  return InterferenceLT::rain_mean(sc)(xi);
}

double lt_renewal_mean_general(const Scenario& sc, double xi,
                               const numerics::QuadSpec& spec) {
  return InterferenceLT::renewal_mean_general(sc, spec)(xi);
}

double lt_renewal_mean_nofading(const Scenario& sc, double xi,
                                const numerics::QuadSpec& spec) {
  return InterferenceLT::renewal_mean_nofading(sc, spec)(xi);
}

double lt_renewal_mean_rayleigh(const Scenario& sc, double xi,
                                const numerics::QuadSpec& spec) {
  return InterferenceLT::renewal_mean_rayleigh(sc, spec)(xi);
}

double coverage_rayleigh(const Scenario& sc) {
  sc.validate();
  require_fading(sc, Fading::rayleigh, "closed coverage requires Rayleigh fading");
  if (sc.mac.kind == Mac::renewal)
    throw std::invalid_argument(
        "use coverage_rayleigh_renewal for the renewal MAC");
  const double beta = sc.pathloss.beta;
  const double alpha = 2.0 / beta;
  const double lr = sc.pathloss(sc.r);
  const double noise = std::exp(-sc.fading.param * sc.noise_w * sc.T * lr);
  const double load = sc.lambda * sc.mac.access_fraction() * sc.r * sc.r *
                      std::pow(sc.T, alpha);
  return noise * std::exp(-load * kappa_coverage(beta, sc.mac.kind));
}

double coverage_rayleigh_renewal(const Scenario& sc,
                                 const numerics::QuadSpec& spec) {
  sc.validate();
  require_mac(sc, Mac::renewal, "renewal coverage requires a renewal MAC");
  require_fading(sc, Fading::rayleigh, "renewal coverage requires Rayleigh fading");
  const auto lt = InterferenceLT::renewal_mean_rayleigh(sc, spec);
  const double xi = sc.fading.param * sc.T * sc.pathloss(sc.r);
  return std::exp(-sc.fading.param * sc.noise_w * sc.T * sc.pathloss(sc.r)) *
         lt(xi);
}

double coverage_nofading(const Scenario& sc, const numerics::QuadSpec& spec,
                         const numerics::InversionSpec& inv) {
  sc.validate();
  require_fading(sc, Fading::deterministic,
                 "inversion coverage requires deterministic fading");
  const double lr = sc.pathloss(sc.r);
  const double tstar = 1.0 / (sc.T * lr) - sc.noise_w;
  if (tstar <= 0.0) return 0.0;
  const auto lt = InterferenceLT::for_scenario(sc, spec);
  return numerics::invert_laplace_cdf(
      [&](std::complex<double> s) { return lt(s); }, tstar, inv);
}

double coverage_probability(const Scenario& sc, const numerics::QuadSpec& spec,
                            const numerics::InversionSpec& inv) {
  switch (sc.fading.kind) {
    case Fading::rayleigh:
      return sc.mac.kind == Mac::renewal ? coverage_rayleigh_renewal(sc, spec)
                                         : coverage_rayleigh(sc);
    case Fading::deterministic:
      return coverage_nofading(sc, spec, inv);
    default:
      throw std::invalid_argument(
          "analytic coverage requires Rayleigh or deterministic fading");
  }
}

double spatial_throughput(const Scenario& sc, const numerics::QuadSpec& spec,
                          const numerics::InversionSpec& inv) {
  return sc.lambda * sc.mac.access_fraction() *
         coverage_probability(sc, spec, inv);
}

}  // namespace aloha::analytic
