#include "aloha/model.hpp"

#include <cmath>

namespace aloha {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_beta(double beta) {
  if (!(beta > 2.0)) throw std::domain_error("beta must exceed 2");
}

// Integration window for standard-normal expectations; the tail mass beyond
// |z| = 8.5 is ~2e-17, below every tolerance used here.
constexpr double kNormalCut = 8.5;

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / 2.5066282746310005024;  // sqrt(2 pi)
}

const numerics::QuadSpec kInnerQuad{1e-10, 1e-14, 2000};

}  // namespace

double PathLoss::operator()(double u) const { return std::pow(A * u, beta); }

void PathLoss::validate() const {
  require(A > 0.0 && std::isfinite(A), "path-loss scale A must be positive");
  if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
  require_beta(beta);
}

void FadingModel::validate() const {
  require(std::isfinite(param), "fading parameter must be finite");
  switch (kind) {
    case Fading::deterministic:
      break;
    case Fading::rayleigh:
      require(param > 0.0, "rayleigh rate mu must be positive");
      break;
    case Fading::lognormal:
      require(param > 0.0, "lognormal sigma must be positive");
      break;
    case Fading::nakagami:
      require(param > 0.0, "nakagami shape k must be positive");
      break;
  }
}

double FadingModel::mean() const {
  switch (kind) {
    case Fading::rayleigh:
      return 1.0 / param;
    default:
      return 1.0;  // the other laws are parametrized to unit mean
  }
}

double frac_moment(const FadingModel& f, double beta) {
  f.validate();
  require_beta(beta);
  const double alpha = 2.0 / beta;
  double v = 0.0;
  switch (f.kind) {
    case Fading::deterministic:
      return 1.0;
    case Fading::rayleigh:
      v = numerics::gamma_fn(1.0 + alpha) / std::pow(f.param, alpha);
      break;
    case Fading::lognormal: {
      const double s2 = f.param * f.param;
      v = std::exp(s2 * (2.0 - beta) / (beta * beta));
      break;
    }
    case Fading::nakagami: {
      const double k = f.param;
      v = numerics::gamma_fn(k + alpha) /
          (numerics::gamma_fn(k) * std::pow(k, alpha));
      break;
    }
  }
  if (!std::isfinite(v) || v <= 0.0)
    throw std::invalid_argument("frac_moment: parameters give a non-finite moment");
  return v;
}

double laplace_f(const FadingModel& f, double s) {
  f.validate();
  require(s >= 0.0, "laplace_f: requires s >= 0");
  switch (f.kind) {
    case Fading::deterministic:
      return std::exp(-s);
    case Fading::rayleigh:
      return f.param / (f.param + s);
    case Fading::nakagami:
      return std::pow(1.0 + s / f.param, -f.param);
    case Fading::lognormal: {
      const double sigma = f.param;
      auto integrand = [s, sigma](double z) {
        return std::exp(-s * std::exp(-0.5 * sigma * sigma + sigma * z)) * normal_pdf(z);
      };
      return numerics::integrate(integrand, -kNormalCut, kNormalCut, kInnerQuad);
    }
  }
  throw std::logic_error("laplace_f: unhandled fading kind");
}

double tilde_laplace(const FadingModel& f, double eta, double beta,
                     const numerics::QuadSpec& spec) {
  f.validate();
  require_beta(beta);
  require(eta >= 0.0, "tilde_laplace: requires eta >= 0");
  if (f.kind == Fading::deterministic) return std::exp(-eta);
  if (eta == 0.0) return 1.0;
  const double alpha = 2.0 / beta;
  double raw = 0.0;
  switch (f.kind) {
    case Fading::rayleigh: {
      const double mu = f.param;
      auto integrand = [=](double fp) {
        // pow(fp, alpha) * L_F(eta/fp) * density(fp); the transform factor is
        // written as mu*fp/(mu*fp + eta) to stay finite at fp -> 0.
        return std::pow(fp, alpha) * (mu * fp / (mu * fp + eta)) * mu *
               std::exp(-mu * fp);
      };
      raw = numerics::integrate(integrand, 0.0,
                                std::numeric_limits<double>::infinity(), spec);
      break;
    }
    case Fading::nakagami: {
      const double k = f.param;
      const double norm = std::pow(k, k) / numerics::gamma_fn(k);
      auto integrand = [=](double fp) {
        return std::pow(fp, alpha) * std::pow(1.0 + eta / (fp * k), -k) * norm *
               std::pow(fp, k - 1.0) * std::exp(-k * fp);
      };
      raw = numerics::integrate(integrand, 0.0,
                                std::numeric_limits<double>::infinity(), spec);
      break;
    }
    case Fading::lognormal: {
      const double sigma = f.param;
      auto integrand = [=, &f](double z) {
        const double fp = std::exp(-0.5 * sigma * sigma + sigma * z);
        return std::pow(fp, alpha) * laplace_f(f, eta / fp) * normal_pdf(z);
      };
      raw = numerics::integrate(integrand, -kNormalCut, kNormalCut, spec);
      break;
    }
    default:
      throw std::logic_error("tilde_laplace: unhandled fading kind");
  }
  return raw / frac_moment(f, beta);
}

double one_minus_laplace_f(const FadingModel& f, double s) {
  f.validate();
  require(s >= 0.0, "one_minus_laplace_f: requires s >= 0");
  switch (f.kind) {
    case Fading::deterministic:
      return -std::expm1(-s);
    case Fading::rayleigh:
      return s / (f.param + s);
    case Fading::nakagami:
      return -std::expm1(-f.param * std::log1p(s / f.param));
    case Fading::lognormal: {
      const double sigma = f.param;
      auto integrand = [s, sigma](double z) {
        return -std::expm1(-s * std::exp(-0.5 * sigma * sigma + sigma * z)) *
               normal_pdf(z);
      };
      return numerics::integrate(integrand, -kNormalCut, kNormalCut, kInnerQuad);
    }
  }
  throw std::logic_error("one_minus_laplace_f: unhandled fading kind");
}

double tilde_one_minus(const FadingModel& f, double eta, double beta,
                       const numerics::QuadSpec& spec) {
  f.validate();
  require_beta(beta);
  require(eta >= 0.0, "tilde_one_minus: requires eta >= 0");
  if (f.kind == Fading::deterministic) return -std::expm1(-eta);
  if (eta == 0.0) return 0.0;
  const double alpha = 2.0 / beta;
  double raw = 0.0;
  switch (f.kind) {
    case Fading::rayleigh: {
      const double mu = f.param;
      auto integrand = [=](double fp) {
        // 1 - L_F(eta/fp) = eta / (mu*fp + eta), already cancellation-free.
        return std::pow(fp, alpha) * (eta / (mu * fp + eta)) * mu *
               std::exp(-mu * fp);
      };
      raw = numerics::integrate(integrand, 0.0,
                                std::numeric_limits<double>::infinity(), spec);
      break;
    }
    case Fading::nakagami: {
      const double k = f.param;
      const double norm = std::pow(k, k) / numerics::gamma_fn(k);
      auto integrand = [=](double fp) {
        return std::pow(fp, alpha) *
               (-std::expm1(-k * std::log1p(eta / (fp * k)))) * norm *
               std::pow(fp, k - 1.0) * std::exp(-k * fp);
      };
      raw = numerics::integrate(integrand, 0.0,
                                std::numeric_limits<double>::infinity(), spec);
      break;
    }
    case Fading::lognormal: {
      const double sigma = f.param;
      auto integrand = [=, &f](double z) {
        const double fp = std::exp(-0.5 * sigma * sigma + sigma * z);
        return std::pow(fp, alpha) * one_minus_laplace_f(f, eta / fp) *
               normal_pdf(z);
      };
      raw = numerics::integrate(integrand, -kNormalCut, kNormalCut, spec);
      break;
    }
    default:
      throw std::logic_error("tilde_one_minus: unhandled fading kind");
  }
  return raw / frac_moment(f, beta);
}

double sample(const FadingModel& f, RngStream& rng) {
  switch (f.kind) {
    case Fading::deterministic:
      return 1.0;
    case Fading::rayleigh:
      return rng.exponential(f.param);
    case Fading::lognormal:
      return std::exp(-0.5 * f.param * f.param + f.param * rng.normal());
    case Fading::nakagami:
      return rng.gamma(f.param) / f.param;
  }
  throw std::logic_error("sample: unhandled fading kind");
}

MacModel MacModel::slotted(double p) {
  MacModel m;
  m.kind = Mac::slotted;
  m.p = p;
  return m;
}

MacModel MacModel::renewal(double B, double epsilon) {
  MacModel m;
  m.kind = Mac::renewal;
  m.B = B;
  m.epsilon = epsilon;
  return m;
}

MacModel MacModel::rain(double tau, double B) {
  MacModel m;
  m.kind = Mac::rain;
  m.tau_rain = tau;
  m.B = B;
  return m;
}

double MacModel::access_fraction() const {
  switch (kind) {
    case Mac::slotted:
      return p;
    case Mac::renewal: {
      const double x = epsilon * B;
      return x / (1.0 + x);
    }
    case Mac::rain:
      return tau_rain;
  }
  throw std::logic_error("access_fraction: unhandled MAC kind");
}

void MacModel::validate() const {
  switch (kind) {
    case Mac::slotted:
      require(p >= 0.0 && p <= 1.0, "slotted access probability p must lie in [0,1]");
      break;
    case Mac::renewal:
      require(B > 0.0 && std::isfinite(B), "packet duration B must be positive");
      require(epsilon >= 0.0 && std::isfinite(epsilon),
              "back-off rate epsilon must be nonnegative");
      break;
    case Mac::rain:
      require(B > 0.0 && std::isfinite(B), "packet duration B must be positive");
      require(tau_rain >= 0.0 && tau_rain <= 1.0,
              "rain occupation fraction tau must lie in [0,1]");
      break;
  }
}

void Scenario::validate() const {
  require(lambda > 0.0 && std::isfinite(lambda), "node density lambda must be positive");
  require(r > 0.0 && std::isfinite(r), "link distance r must be positive");
  require(T > 0.0 && std::isfinite(T), "SINR threshold T must be positive");
  require(noise_w >= 0.0 && std::isfinite(noise_w), "noise W must be nonnegative");
  fading.validate();
  pathloss.validate();
  mac.validate();
}

}  // namespace aloha
