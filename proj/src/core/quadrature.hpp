#pragma once

#include <functional>
#include <vector>

namespace flevy::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  // Refinement limit reached before the requested tolerance.
  bool capped = false;

  Result& operator+=(const Result& o) {
    value += o.value;
    error += o.error;
    capped = capped || o.capped;
    return *this;
  }
};

using Integrand = std::function<double(double)>;

inline constexpr double kDefaultRelTol = 1e-6;

// Double-exponential (tanh-sinh) rule on [a, b]. Tolerates integrable
// singularities at either endpoint; a == b gives zero.
Result integrate(const Integrand& f, double a, double b, double rel_tol = kDefaultRelTol);

// Splits [a, b] at the given interior points before integrating; use it for
// integrands with jumps or kinks at known locations.
Result integrate_piecewise(const Integrand& f, double a, double b, std::vector<double> breaks,
                           double rel_tol = kDefaultRelTol);

// Integral over [a, inf). For a > 0 uses u = a / v on (0, 1]; for a == 0
// splits at 1 first.
Result integrate_to_infinity(const Integrand& f, double a, double rel_tol = kDefaultRelTol);

// Adaptive Gauss-Kronrod (G7/K15). Independent second rule for
// cross-checks; b may be +inf.
Result integrate_gauss_kronrod(const Integrand& f, double a, double b,
                               double rel_tol = kDefaultRelTol);

}  // namespace flevy::quad
