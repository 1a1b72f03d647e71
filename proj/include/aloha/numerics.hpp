#pragma once
// Scalar special functions, adaptive Gauss-Kronrod quadrature, and numerical
// Laplace-transform inversion to CDF values (Abate-Whitt Euler summation).

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aloha::numerics {

// An iterative scheme ran out of budget before reaching its tolerance.
// Carries the best value seen and the error estimate actually achieved, so
// callers can decide whether the partial result is still usable.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, double best, double err)
      : std::runtime_error(what), best_value(best), error_estimate(err) {}
  double best_value;
  double error_estimate;
};

struct QuadSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
};

// Gamma function; poles (0, -1, -2, ...) raise std::domain_error.
double gamma_fn(double x);

// Adaptive Gauss-Kronrod 7-15 on [a,b]; b may be +infinity (mapped through
// x = a + u/(1-u)). Stops when the summed error estimate meets
// max(abs_tol, rel_tol*|integral|); exhausting max_subdivisions first raises
// NumericFailure with the best value and its error estimate.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadSpec& spec = {});

// Same integrator with caller-supplied interior breakpoints (for integrands
// with known boundary layers). Each panel is refined independently with a
// per-panel share of the tolerance and results are summed in panel order, so
// the value does not depend on refinement scheduling.
double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& breakpoints,
                        const QuadSpec& spec = {});

struct InversionSpec {
  // Aliasing-error target of the Bromwich trapezoid; the contour abscissa is
  // delta = log(1/discretization_error + 1)/t, which bounds the wrap-around
  // contribution of a CDF (values in [0,1]) by discretization_error.
  double discretization_error = 1e-8;
  int trapezoid_points = 50;       // base partial-sum count before averaging
  int euler_terms = 11;            // binomial-averaging width
  double stabilization_tol = 1e-6; // agreement required between escalations
  int max_trapezoid_points = 800;
};

// P(X <= t) for a nonnegative random variable given its Laplace transform,
// by Euler-accelerated trapezoid inversion of lt(s)/s. Transforms with slowly
// rotating phase (point masses) defeat plain Euler averaging, so the rule is
// escalated (points doubled, averaging widened) until two consecutive levels
// agree within stabilization_tol; cap exhaustion raises NumericFailure.
// The result is clamped to [0,1]. Requires t > 0.
double invert_laplace_cdf(
    const std::function<std::complex<double>(std::complex<double>)>& lt,
    double t, const InversionSpec& spec = {});

}  // namespace aloha::numerics
