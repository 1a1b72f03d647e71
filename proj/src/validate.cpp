#include "aloha/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numbers>

#include "aloha/analytic.hpp"
#include "aloha/optimize.hpp"
#include "aloha/sim.hpp"

namespace aloha::validate {

namespace {

std::string strf(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

template <typename F>
CheckResult timed(const char* name, const F& body) {
  CheckResult r;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return r;
}

Scenario canonical(Mac kind, double access, Fading fading = Fading::rayleigh) {
  Scenario sc;
  sc.lambda = 1.0;
  sc.r = 1.0;
  sc.T = 10.0;
  sc.noise_w = 0.0;
  sc.fading = fading == Fading::rayleigh ? FadingModel::rayleigh()
                                         : FadingModel::deterministic();
  switch (kind) {
    case Mac::slotted:
      sc.mac = MacModel::slotted(access);
      break;
    case Mac::rain:
      sc.mac = MacModel::rain(access);
      break;
    case Mac::renewal:
      sc.mac = MacModel::renewal(1.0, access / (1.0 - access));
      break;
  }
  return sc;
}

std::size_t reps_or(const ValidateOptions& opt, std::size_t def) {
  return opt.replications > 0 ? opt.replications : def;
}

numerics::QuadSpec quad_of(const ValidateOptions& opt) {
  numerics::QuadSpec spec;
  spec.rel_tol = opt.quad_rel_tol;
  return spec;
}

sim::SimConfig sim_cfg(double side, std::size_t reps, std::uint64_t seed) {
  sim::SimConfig cfg;
  cfg.window_side = side;
  cfg.replications = reps;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

CheckResult check_zeta() {
  return timed("zeta_closed_form", [](CheckResult& r) {
    const struct {
      double beta, want;
    } exact[] = {{3.0, 1.2}, {4.0, 4.0 / 3.0}, {6.0, 1.5}, {8.0, 1.6}};
    double worst = 0.0;
    for (const auto& e : exact)
      worst = std::max(worst, std::fabs(optimize::zeta(e.beta) - e.want));
    const double lo = std::fabs(optimize::zeta(2.0 + 1e-6) - 1.0);
    const double hi = std::fabs(optimize::zeta(1e6) - 2.0);
    r.passed = worst <= 1e-12 && lo <= 1e-5 && hi <= 1e-5;
    r.detail = strf("max |zeta-exact| %.1e, edge errors %.1e / %.1e",
                    worst, lo, hi);
  });
}

CheckResult check_kappa_zeta_consistency(const ValidateOptions& opt) {
  return timed("kappa_zeta_consistency", [&](CheckResult& r) {
    double worst = 0.0;
    for (double beta : {2.5, 3.0, 4.0, 5.0, 8.0}) {
      const double ratio =
          analytic::kappa(beta, Mac::rain) /
          (analytic::kappa(beta, Mac::slotted) * opt.kappa_perturbation);
      worst = std::max(worst, std::fabs(ratio - optimize::zeta(beta)));
    }
    r.passed = worst <= 1e-12;
    r.detail = strf("max |kappa_rain/kappa_slotted - zeta| %.2e", worst);
  });
}

CheckResult check_coverage_closed(const ValidateOptions& opt) {
  (void)opt;
  return timed("coverage_closed_forms", [](CheckResult& r) {
    const Scenario sl = canonical(Mac::slotted, 0.05);
    const Scenario rn = canonical(Mac::rain, 0.05);
    const double cs = analytic::coverage_rayleigh(sl);
    const double cr = analytic::coverage_rayleigh(rn);
    const bool four_digits =
        std::fabs(cs - 0.4583) <= 5e-5 && std::fabs(cr - 0.3533) <= 5e-5;

    double worst_rel = 0.0;
    for (const Scenario* sc : {&sl, &rn}) {
      const auto lt = analytic::InterferenceLT::for_scenario(*sc);
      const double lr = sc->pathloss(sc->r);
      const double via_lt =
          std::exp(-sc->fading.param * sc->noise_w * sc->T * lr) *
          lt(sc->fading.param * sc->T * lr);
      const double cov = analytic::coverage_rayleigh(*sc);
      worst_rel = std::max(worst_rel, std::fabs(cov - via_lt) / cov);
    }
    r.passed = four_digits && worst_rel <= 1e-12;
    r.detail = strf("slotted %.6f rain %.6f, transform-route identity %.1e",
                    cs, cr, worst_rel);
  });
}

CheckResult check_specialization(const ValidateOptions& opt) {
  return timed("transform_specializations", [&](CheckResult& r) {
    const numerics::QuadSpec spec = quad_of(opt);
    const double xis[] = {0.1, 0.5, 1.0, 2.0, 5.0};
    const double taus[] = {0.05, 0.2, 0.5};
    const double betas[] = {3.0, 4.0, 5.0};
    double worst = 0.0;
    for (double beta : betas) {
      for (double tau : taus) {
        Scenario det = canonical(Mac::renewal, tau, Fading::deterministic);
        det.pathloss.beta = beta;
        Scenario ray = canonical(Mac::renewal, tau);
        ray.pathloss.beta = beta;
        const auto gen_det =
            analytic::InterferenceLT::renewal_mean_general(det, spec);
        const auto closed_det =
            analytic::InterferenceLT::renewal_mean_nofading(det, spec);
        const auto gen_ray =
            analytic::InterferenceLT::renewal_mean_general(ray, spec);
        const auto planar_ray =
            analytic::InterferenceLT::renewal_mean_rayleigh(ray, spec);
        for (double xi : xis) {
          worst = std::max(worst, std::fabs(gen_det(xi) - closed_det(xi)));
          worst = std::max(worst, std::fabs(gen_ray(xi) - planar_ray(xi)));
        }
      }
    }
    r.passed = worst <= 1e-5;
    r.detail = strf("max |general - specialized| %.2e over 45-point grid "
                    "(both fading laws)",
                    worst);
  });
}

CheckResult check_sim_coverage(const ValidateOptions& opt) {
  return timed("sim_vs_transform_coverage", [&](CheckResult& r) {
    const numerics::QuadSpec spec = quad_of(opt);
    const std::size_t reps = reps_or(opt, 20000);
    const double taus[] = {0.02, 0.05, 0.10, 0.15};
    double worst_z = 0.0;
    bool ok = true;
    int k = 0;
    for (double tau : taus) {
      const Scenario ren = canonical(Mac::renewal, tau);
      const double exact_ren = analytic::coverage_rayleigh_renewal(ren, spec);
      const auto res =
          sim::simulate_renewal(ren, sim_cfg(150.0, reps, opt.seed + 7919 * k++));
      ok &= res.coverage_mean.contains(exact_ren);
      if (res.coverage_mean.std_error > 0)
        worst_z = std::max(worst_z,
                           std::fabs(res.coverage_mean.mean - exact_ren) /
                               res.coverage_mean.std_error);

      const Scenario rn = canonical(Mac::rain, tau);
      const double exact_rain = analytic::coverage_rayleigh(rn);
      const auto res2 =
          sim::simulate_rain(rn, sim_cfg(150.0, reps, opt.seed + 7919 * k++));
      ok &= res2.coverage.contains(exact_rain);
      if (res2.coverage.std_error > 0)
        worst_z = std::max(worst_z, std::fabs(res2.coverage.mean - exact_rain) /
                                        res2.coverage.std_error);
    }
    r.passed = ok;
    r.detail = strf("worst |z| %.2f over 8 intervals at %zu replications",
                    worst_z, reps);
  });
}

CheckResult check_renewal_rain_convergence(const ValidateOptions& opt) {
  return timed("renewal_rain_convergence", [&](CheckResult& r) {
    const numerics::QuadSpec spec = quad_of(opt);
    const double load[] = {0.01, 0.05, 0.1, 0.2};  // space-time density
    double worst_dense = 0.0;
    double min_gap = std::numeric_limits<double>::infinity();
    double max_gap = 0.0;
    for (double a : load) {
      Scenario rain = canonical(Mac::rain, a, Fading::deterministic);
      const double thpt_rain =
          a * analytic::coverage_nofading(rain, spec);

      auto renewal_thpt = [&](double lambda) {
        const double tau = a / lambda;
        Scenario ren = canonical(Mac::renewal, tau, Fading::deterministic);
        ren.lambda = lambda;
        return a * analytic::coverage_nofading(ren, spec);
      };
      const double gap_dense = renewal_thpt(100.0) / thpt_rain - 1.0;
      worst_dense = std::max(worst_dense, std::fabs(gap_dense));
      const double gap_sparse = renewal_thpt(1.0) / thpt_rain - 1.0;
      min_gap = std::min(min_gap, gap_sparse);
      max_gap = std::max(max_gap, gap_sparse);
    }
    r.passed = worst_dense <= 0.03 && min_gap > 0.0 && max_gap >= 0.02;
    r.detail = strf("lambda=100: max |gap| %.4f (<= 3%%); lambda=1: gap in "
                    "[%.4f, %.4f], positive and visible",
                    worst_dense, min_gap, max_gap);
  });
}

CheckResult check_optima() {
  return timed("optimal_access_closed_form", [](CheckResult& r) {
    const double pi = std::numbers::pi;
    bool ok = true;
    double worst_tau = 0.0, worst_pc = 0.0, worst_grid = 0.0;
    for (Mac mac : {Mac::slotted, Mac::rain}) {
      // Independent constant: pi Gamma(1/2) Gamma(3/2) = pi^2/2, inflated by
      // 2*4/(2+4) for rain.
      double kc = pi * std::tgamma(0.5) * std::tgamma(1.5);
      if (mac == Mac::rain) kc *= 2.0 * 4.0 / 6.0;
      const double want_tau = 1.0 / (std::sqrt(10.0) * kc);

      const auto rep = optimize::optimal_tau(canonical(Mac::slotted, 0.05), mac);
      worst_tau = std::max(worst_tau, std::fabs(rep.tau_max - want_tau));
      worst_pc = std::max(worst_pc, std::fabs(rep.p_c_at_opt - std::exp(-1.0)));
      ok &= std::fabs(rep.tau_max - want_tau) <= 1e-10;
      ok &= std::fabs(rep.p_c_at_opt - std::exp(-1.0)) <= 1e-12;
      ok &= std::fabs(rep.d_max - want_tau * std::exp(-1.0)) <= 1e-10;

      Scenario base = canonical(mac == Mac::slotted ? Mac::slotted : Mac::rain,
                                0.05);
      std::vector<double> grid;
      for (double t = 0.002; t < 0.2001; t += 0.002) grid.push_back(t);
      const auto rows = optimize::sweep(base, optimize::SweepAxis::tau, grid,
                                        optimize::SweepQuantity::throughput);
      double best_x = 0.0, best_v = -1.0;
      for (const auto& row : rows) {
        ok &= row.ok;
        if (row.ok && row.value > best_v) {
          best_v = row.value;
          best_x = row.x;
        }
      }
      worst_grid = std::max(worst_grid, std::fabs(best_x - rep.tau_max));
      ok &= std::fabs(best_x - rep.tau_max) <= 0.002 + 1e-12;
    }
    r.passed = ok;
    r.detail = strf("|tau_max err| %.1e, |p_c - 1/e| %.1e, grid offset %.4f",
                    worst_tau, worst_pc, worst_grid);
  });
}

CheckResult check_throughput_ratio() {
  return timed("sync_throughput_ratio", [](CheckResult& r) {
    bool ok = optimize::throughput_ratio(4.0) == 0.75;
    double prev = std::numeric_limits<double>::infinity();
    for (double beta : {2.05, 2.2, 2.5, 3.0, 4.0, 6.0, 10.0, 50.0, 1000.0}) {
      const double v = optimize::throughput_ratio(beta);
      ok &= v < prev;
      prev = v;
    }
    const double lo = std::fabs(optimize::throughput_ratio(2.0 + 1e-6) - 1.0);
    const double hi = std::fabs(optimize::throughput_ratio(1e6) - 0.5);
    ok &= lo <= 1e-5 && hi <= 1e-5;
    r.passed = ok;
    r.detail = strf("ratio(4) = %.2f exactly, decreasing, edge errors %.1e / "
                    "%.1e",
                    optimize::throughput_ratio(4.0), lo, hi);
  });
}

CheckResult check_nofading_sim(const ValidateOptions& opt) {
  return timed("nofading_coverage_inversion", [&](CheckResult& r) {
    const numerics::QuadSpec spec = quad_of(opt);
    const std::size_t reps = reps_or(opt, 100000);
    const Scenario det = canonical(Mac::slotted, 0.05, Fading::deterministic);
    const double analytic_cov = analytic::coverage_nofading(det, spec);
    const auto res =
        sim::simulate_slotted(det, sim_cfg(300.0, reps, opt.seed + 17));
    const double diff = std::fabs(analytic_cov - res.coverage.mean);
    r.passed = diff <= 0.005;
    r.detail = strf("inversion %.6f vs sim %.6f, |diff| %.5f at %zu reps",
                    analytic_cov, res.coverage.mean, diff, reps);
  });
}

CheckResult check_mean_vs_max(const ValidateOptions& opt) {
  return timed("mean_vs_max_constraint", [&](CheckResult& r) {
    const std::size_t reps = reps_or(opt, 10000);
    const double xs[] = {0.01, 0.0225, 0.033, 0.045, 0.066, 0.09, 0.15, 0.25};
    const std::size_t n = std::size(xs);
    std::vector<double> thpt_mean(n), thpt_max(n);
    bool below_everywhere = true;
    double worst_gap = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double tau = xs[i] / (1.0 + xs[i]);
      Scenario ren;
      ren.lambda = 1.0;
      ren.r = 1.0;
      ren.T = 10.0;
      ren.fading = FadingModel::rayleigh();
      ren.mac = MacModel::renewal(1.0, xs[i]);
      const auto res = sim::simulate_renewal(
          ren, sim_cfg(100.0, reps, opt.seed + 7919 * i));
      thpt_mean[i] = tau * res.coverage_mean.mean;
      thpt_max[i] = tau * res.coverage_max.mean;
      below_everywhere &= thpt_max[i] < thpt_mean[i];
      if (thpt_mean[i] > 0)
        worst_gap =
            std::max(worst_gap, (thpt_mean[i] - thpt_max[i]) / thpt_mean[i]);
    }
    const auto arg_best = [&](const std::vector<double>& v) {
      return xs[std::max_element(v.begin(), v.end()) - v.begin()];
    };
    const double best_mean = *std::max_element(thpt_mean.begin(), thpt_mean.end());
    const double best_max = *std::max_element(thpt_max.begin(), thpt_max.end());
    const double opt_gap = (best_mean - best_max) / best_mean;
    const double x_mean = arg_best(thpt_mean), x_max = arg_best(thpt_max);
    const bool opt_near = x_mean >= 0.0225 && x_mean <= 0.09 &&
                          x_max >= 0.0225 && x_max <= 0.09;
    r.passed = below_everywhere && worst_gap >= 0.30 && opt_gap >= 0.15 &&
               opt_gap <= 0.40 && opt_near;
    r.detail = strf("max below mean everywhere: %s; worst gap %.0f%%; "
                    "optimized gap %.0f%%; optima at eps*B %.3f / %.3f",
                    below_everywhere ? "yes" : "no", 100 * worst_gap,
                    100 * opt_gap, x_mean, x_max);
  });
}

CheckResult check_lt_vs_sim(const ValidateOptions& opt) {
  return timed("sim_vs_transform_lt", [&](CheckResult& r) {
    const numerics::QuadSpec spec = quad_of(opt);
    const std::size_t reps = reps_or(opt, 100000);
    const double xi = 1.0;
    bool ok = true;
    double worst_z = 0.0;
    const auto score = [&](const sim::Estimate& emp, double exact) {
      ok &= emp.contains(exact);
      if (emp.std_error > 0)
        worst_z = std::max(worst_z, std::fabs(emp.mean - exact) / emp.std_error);
    };

    const Scenario sl = canonical(Mac::slotted, 0.05);
    score(sim::empirical_laplace(
              sim::simulate_slotted(sl, sim_cfg(150.0, reps, opt.seed + 101))
                  .interference,
              xi),
          analytic::lt_slotted(sl, xi));

    const Scenario ren = canonical(Mac::renewal, 0.05);
    score(sim::empirical_laplace(
              sim::simulate_renewal(ren, sim_cfg(150.0, reps, opt.seed + 102))
                  .interference_mean,
              xi),
          analytic::lt_renewal_mean_rayleigh(ren, xi, spec));

    const Scenario rn = canonical(Mac::rain, 0.05);
    score(sim::empirical_laplace(
              sim::simulate_rain(rn, sim_cfg(150.0, reps, opt.seed + 103))
                  .interference,
              xi),
          analytic::lt_rain_mean(rn, xi));

    r.passed = ok;
    r.detail = strf("worst |z| %.2f across three MAC models at %zu reps",
                    worst_z, reps);
  });
}

std::vector<CheckResult> run_fast(const ValidateOptions& opt) {
  return {check_zeta(),
          check_kappa_zeta_consistency(opt),
          check_coverage_closed(opt),
          check_renewal_rain_convergence(opt),
          check_optima(),
          check_throughput_ratio()};
}

std::vector<CheckResult> run_full(const ValidateOptions& opt) {
  std::vector<CheckResult> all = run_fast(opt);
  all.push_back(check_specialization(opt));
  all.push_back(check_sim_coverage(opt));
  all.push_back(check_nofading_sim(opt));
  all.push_back(check_mean_vs_max(opt));
  all.push_back(check_lt_vs_sim(opt));
  return all;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.passed; });
}

}  // namespace aloha::validate
