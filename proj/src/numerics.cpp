#include "aloha/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aloha::numerics {

double gamma_fn(double x) {
  if (x <= 0.0 && x == std::floor(x))
    throw std::domain_error("gamma_fn: pole at nonpositive integer argument");
  return std::tgamma(x);
}

namespace {

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 nodes and weights).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double integral;
  double err;
  long order;  // insertion order, breaks error ties deterministically
};

struct PanelLess {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.err != y.err) return x.err < y.err;
    return x.order < y.order;
  }
};

Panel gk15(const std::function<double(double)>& f, double a, double b, long order) {
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double eps = std::numeric_limits<double>::epsilon();
  const double uflow = std::numeric_limits<double>::min();

  double fv1[8], fv2[8];
  const double fc = f(centr);
  double resg = kWg[3] * fc;
  double resk = kWgk[7] * fc;
  double resabs = std::fabs(resk);
  fv1[7] = fv2[7] = fc;
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * kXgk[jtw];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::fabs(f1) + std::fabs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * kXgk[jtwm1];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::fabs(f1) + std::fabs(f2));
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));

  const double result = resk * hlgth;
  resabs *= std::fabs(hlgth);
  resasc *= std::fabs(hlgth);
  double abserr = std::fabs((resk - resg) * hlgth);
  if (resasc != 0.0 && abserr != 0.0)
    abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
  if (resabs > uflow / (50.0 * eps)) abserr = std::max(eps * 50.0 * resabs, abserr);
  return Panel{a, b, result, abserr, order};
}

double adaptive_finite(const std::function<double(double)>& f, double a, double b,
                       const QuadSpec& spec) {
  std::vector<Panel> heap;
  long order = 0;
  heap.push_back(gk15(f, a, b, order++));
  double total = heap[0].integral;
  double toterr = heap[0].err;
  int subdivisions = 0;
  const PanelLess less{};
  while (toterr > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) {
    if (subdivisions >= spec.max_subdivisions || !std::isfinite(toterr)) {
      // Re-sum by position for a scheduling-independent best value.
      std::sort(heap.begin(), heap.end(),
                [](const Panel& x, const Panel& y) { return x.a < y.a; });
      double best = 0.0, err = 0.0;
      for (const Panel& p : heap) {
        best += p.integral;
        err += p.err;
      }
      throw NumericFailure("integrate: subdivision budget exhausted", best, err);
    }
    std::pop_heap(heap.begin(), heap.end(), less);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = gk15(f, worst.a, mid, order++);
    Panel right = gk15(f, mid, worst.b, order++);
    total += left.integral + right.integral - worst.integral;
    toterr += left.err + right.err - worst.err;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), less);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), less);
    ++subdivisions;
  }
  // Final pass: sum panels left-to-right so the value is independent of the
  // heap's refinement schedule.
  std::sort(heap.begin(), heap.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  double result = 0.0;
  for (const Panel& p : heap) result += p.integral;
  return result;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadSpec& spec) {
  if (std::isinf(b)) {
    // x = a + u/(1-u) maps [0,1) onto [a,inf); dx = du/(1-u)^2.
    auto g = [&f, a](double u) {
      const double w = 1.0 - u;
      return f(a + u / w) / (w * w);
    };
    return adaptive_finite(g, 0.0, 1.0, spec);
  }
  if (!(a < b)) {
    if (a == b) return 0.0;
    throw std::invalid_argument("integrate: requires a <= b");
  }
  return adaptive_finite(f, a, b, spec);
}

double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& breakpoints, const QuadSpec& spec) {
  if (breakpoints.size() < 2)
    throw std::invalid_argument("integrate_panels: need at least two breakpoints");
  const int n = static_cast<int>(breakpoints.size()) - 1;
  QuadSpec per = spec;
  per.abs_tol = spec.abs_tol / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw std::invalid_argument("integrate_panels: breakpoints must be increasing");
    sum += integrate(f, breakpoints[i], breakpoints[i + 1], per);
  }
  return sum;
}

namespace {

double euler_level(const std::function<std::complex<double>(std::complex<double>)>& lt,
                   double t, double delta, int n, int m) {
  const double pi = 3.14159265358979323846;
  const double h = pi / t;
  const std::complex<double> s0(delta, 0.0);
  double partial = 0.5 * (lt(s0) / s0).real();
  // Binomial weights C(m,j)/2^m by recurrence.
  std::vector<double> w(m + 1);
  w[0] = std::ldexp(1.0, -m);
  for (int j = 0; j < m; ++j) w[j + 1] = w[j] * static_cast<double>(m - j) / (j + 1);
  double euler = 0.0;
  double sign = -1.0;
  for (int k = 1; k <= n + m; ++k) {
    const std::complex<double> s(delta, k * h);
    partial += sign * (lt(s) / s).real();
    sign = -sign;
    if (k >= n) euler += w[k - n] * partial;
  }
  return std::exp(delta * t) / t * euler;
}

}  // namespace

double invert_laplace_cdf(
    const std::function<std::complex<double>(std::complex<double>)>& lt, double t,
    const InversionSpec& spec) {
  if (!(t > 0.0)) throw std::invalid_argument("invert_laplace_cdf: requires t > 0");
  if (spec.trapezoid_points < 1 || spec.euler_terms < 1 || spec.euler_terms > 63 ||
      !(spec.discretization_error > 0.0 && spec.discretization_error < 1.0))
    throw std::invalid_argument("invert_laplace_cdf: invalid InversionSpec");
  // Damping for the Bromwich trapezoid: step pi/t aliases the target with
  // period 2t, so exp(-2 delta t) geometric tail mass equal to the requested
  // discretization error calls for half the naive rate.
  const double delta = std::log(1.0 / spec.discretization_error + 1.0) / (2.0 * t);
  auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };

  int n = spec.trapezoid_points;
  int m = spec.euler_terms;
  double prev = std::numeric_limits<double>::quiet_NaN();
  double diff = std::numeric_limits<double>::infinity();
  int level = 0;
  while (n <= spec.max_trapezoid_points) {
    const double v = euler_level(lt, t, delta, n, m);
    if (level > 0) {
      diff = std::fabs(v - prev);
      if (diff <= spec.stabilization_tol) return clamp01(v);
    }
    prev = v;
    n *= 2;
    m = std::min(63, m + (level == 0 ? 8 : 16));
    ++level;
  }
  throw NumericFailure("invert_laplace_cdf: escalation cap reached without stabilizing",
                       clamp01(prev), diff);
}

}  // namespace aloha::numerics
