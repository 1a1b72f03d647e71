#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "aloha/model.hpp"
#include "doctest.h"

using namespace aloha;

TEST_CASE("path loss evaluates (A u)^beta and validates its domain") {
  PathLoss pl{2.0, 4.0};
  CHECK(pl(3.0) == doctest::Approx(1296.0).epsilon(1e-14));
  CHECK_THROWS_AS((PathLoss{1.0, 2.0}.validate()), std::domain_error);
  CHECK_THROWS_AS((PathLoss{0.0, 4.0}.validate()), std::invalid_argument);
}

TEST_CASE("fractional moments match closed forms") {
  const double b = 4.0;
  CHECK(frac_moment(FadingModel::deterministic(), b) == 1.0);
  CHECK(std::fabs(frac_moment(FadingModel::rayleigh(), b) - 0.88622692545275801365) <=
        1e-13);
  CHECK(std::fabs(frac_moment(FadingModel::lognormal(1.0), b) -
                  0.88249690258459540455) <= 1e-13);
  // Nakagami with k = 1 is exponential fading.
  CHECK(std::fabs(frac_moment(FadingModel::nakagami(1.0), b) -
                  frac_moment(FadingModel::rayleigh(), b)) <= 1e-13);
  CHECK_THROWS_AS(frac_moment(FadingModel::rayleigh(), 2.0), std::domain_error);
}

TEST_CASE("fractional moments agree with direct quadrature of the density") {
  const double beta = 3.0, alpha = 2.0 / beta, k = 2.5;
  auto density_moment = numerics::integrate(
      [=](double f) {
        return std::pow(f, alpha) * std::pow(k, k) / numerics::gamma_fn(k) *
               std::pow(f, k - 1.0) * std::exp(-k * f);
      },
      0.0, std::numeric_limits<double>::infinity());
  CHECK(std::fabs(frac_moment(FadingModel::nakagami(k), beta) - density_moment) <= 1e-9);
}

TEST_CASE("fractional moments tend to 1 as beta grows for every unit-mean law") {
  const FadingModel laws[] = {FadingModel::deterministic(), FadingModel::rayleigh(),
                              FadingModel::lognormal(1.0), FadingModel::nakagami(3.0)};
  for (const auto& f : laws) CHECK(std::fabs(frac_moment(f, 1e6) - 1.0) <= 1e-3);
}

TEST_CASE("fading Laplace transforms") {
  CHECK(laplace_f(FadingModel::rayleigh(), 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(laplace_f(FadingModel::deterministic(), 0.0) == 1.0);
  CHECK(std::fabs(laplace_f(FadingModel::nakagami(2.0), 1.0) - 4.0 / 9.0) <= 1e-14);
  // Lognormal has no closed form; cross-check the quadrature with Monte Carlo.
  const FadingModel ln = FadingModel::lognormal(0.5);
  RngStream rng(2024);
  double acc = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) acc += std::exp(-sample(ln, rng));
  CHECK(std::fabs(laplace_f(ln, 1.0) - acc / n) <= 3e-3);
  // Monotone decreasing in s, values in (0,1].
  double prev = 1.0;
  for (double s : {0.0, 0.3, 1.0, 4.0, 20.0}) {
    const double v = laplace_f(ln, s);
    CHECK(v <= prev);
    CHECK(v > 0.0);
    prev = v;
  }
}

TEST_CASE("two-fade transform: closed cases and frozen value") {
  CHECK(std::fabs(tilde_laplace(FadingModel::deterministic(), 0.7, 4.0) -
                  std::exp(-0.7)) <= 1e-14);
  CHECK(tilde_laplace(FadingModel::rayleigh(), 0.0, 4.0) == 1.0);
  CHECK(tilde_laplace(FadingModel::nakagami(2.0), 0.0, 3.0) == 1.0);
  // Independently validated by nested quadrature and a 2e7-draw Monte Carlo
  // before being frozen here.
  CHECK(std::fabs(tilde_laplace(FadingModel::rayleigh(), 1.0, 4.0) - 0.5157443122) <=
        1e-6);
  CHECK(std::fabs(tilde_laplace(FadingModel::nakagami(1.0), 1.0, 4.0) -
                  tilde_laplace(FadingModel::rayleigh(), 1.0, 4.0)) <= 1e-8);
}

TEST_CASE("two-fade transform agrees with Monte Carlo over fading pairs") {
  const double eta = 1.0, beta = 4.0, alpha = 0.5;
  RngStream rng(77);
  const FadingModel f = FadingModel::rayleigh();
  double acc = 0.0;
  const int n = 2000000;
  for (int i = 0; i < n; ++i) {
    const double fp = sample(f, rng);
    const double fa = sample(f, rng);
    acc += std::pow(fp, alpha) * std::exp(-eta * fa / fp);
  }
  const double mc = acc / n / frac_moment(f, beta);
  CHECK(std::fabs(tilde_laplace(f, eta, beta) - mc) <= 1.5e-3);
}

TEST_CASE("fading samplers have the right moments") {
  RngStream rng(5);
  const FadingModel det = FadingModel::deterministic();
  for (int i = 0; i < 10; ++i) CHECK(sample(det, rng) == 1.0);

  const int n = 1000000;
  double mean_ray = 0.0;
  for (int i = 0; i < n; ++i) mean_ray += sample(FadingModel::rayleigh(), rng);
  CHECK(std::fabs(mean_ray / n - 1.0) <= 0.01);

  double m1 = 0.0, m2 = 0.0;
  const FadingModel nk = FadingModel::nakagami(3.0);
  for (int i = 0; i < n; ++i) {
    const double v = sample(nk, rng);
    m1 += v;
    m2 += v * v;
  }
  m1 /= n;
  m2 /= n;
  const double var = m2 - m1 * m1;  // Gamma(k, 1/k) variance = 1/k
  CHECK(std::fabs(var - 1.0 / 3.0) <= 0.05 / 3.0);

  double mean_ln = 0.0;
  for (int i = 0; i < n; ++i) mean_ln += sample(FadingModel::lognormal(1.0), rng);
  CHECK(std::fabs(mean_ln / n - 1.0) <= 0.01);
}

TEST_CASE("poisson sampler moments across both regimes") {
  RngStream rng(11);
  for (double mean : {2.5, 15.0, 9000.0}) {
    const int n = mean > 100 ? 20000 : 200000;
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = static_cast<double>(rng.poisson(mean));
      m1 += v;
      m2 += v * v;
    }
    m1 /= n;
    m2 /= n;
    const double var = m2 - m1 * m1;
    CHECK(std::fabs(m1 - mean) <= 5.0 * std::sqrt(mean / n));
    CHECK(std::fabs(var / mean - 1.0) <= 0.06);
  }
}

TEST_CASE("MAC access fractions") {
  CHECK(MacModel::slotted(0.05).access_fraction() == 0.05);
  CHECK(MacModel::renewal(1.0, 1.0).access_fraction() == doctest::Approx(0.5));
  CHECK(MacModel::renewal(2.0, 0.05).access_fraction() ==
        doctest::Approx(0.1 / 1.1).epsilon(1e-14));
  CHECK(MacModel::rain(0.07).access_fraction() == 0.07);
  // Time rescaling (B, 1/eps) -> (cB, c/eps) leaves the fraction unchanged.
  CHECK(MacModel::renewal(3.0, 0.2).access_fraction() ==
        doctest::Approx(MacModel::renewal(6.0, 0.1).access_fraction()).epsilon(1e-14));
}

TEST_CASE("scenario validation rejects out-of-domain parameters") {
  Scenario sc;
  CHECK_NOTHROW(sc.validate());
  sc.lambda = 0.0;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  sc.lambda = 1.0;
  sc.pathloss.beta = 1.5;
  CHECK_THROWS_AS(sc.validate(), std::domain_error);
  sc.pathloss.beta = 4.0;
  sc.mac = MacModel::slotted(1.5);
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
}
