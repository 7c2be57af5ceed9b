#include "core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace flevy::quad {

namespace {

constexpr std::size_t kMaxRefinements = 15;
constexpr unsigned kMaxGkDepth = 15;

bool exceeded(double err, double l1, double tol) {
  return err > 10.0 * tol * std::max(l1, std::numeric_limits<double>::min()) && err > 1e-300;
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, double rel_tol) {
  if (a == b) return {};
  if (a > b) {
    Result r = integrate(f, b, a, rel_tol);
    r.value = -r.value;
    return r;
  }
  if (b - a <= 64 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b))) {
    const double m = 0.5 * (a + b);
    return {f(m) * (b - a), 0.0, false};
  }
  // The rule grows its tables lazily, so nested integrals each get their own.
  using Rule = boost::math::quadrature::tanh_sinh<double>;
  thread_local std::vector<std::unique_ptr<Rule>> rules;
  thread_local std::size_t depth = 0;
  if (rules.size() <= depth) rules.push_back(std::make_unique<Rule>(kMaxRefinements));
  Rule& rule = *rules[depth];
  struct Nest {
    std::size_t& d;
    explicit Nest(std::size_t& x) : d(x) { ++d; }
    ~Nest() { --d; }
  } nest(depth);
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  auto g = [&f](double x) { return f(x); };
  const double v = rule.integrate(g, a, b, rel_tol, &err, &l1, &levels);
  return {v, err, exceeded(err, l1, rel_tol)};
}

Result integrate_piecewise(const Integrand& f, double a, double b, std::vector<double> breaks,
                           double rel_tol) {
  const double margin = 1e-12 * (b - a);
  std::erase_if(breaks, [&](double x) { return !(x > a + margin && x < b - margin); });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  Result total;
  double lo = a;
  for (double x : breaks) {
    total += integrate(f, lo, x, rel_tol);
    lo = x;
  }
  total += integrate(f, lo, b, rel_tol);
  return total;
}

Result integrate_to_infinity(const Integrand& f, double a, double rel_tol) {
  if (a <= 0.0) {
    Result head = integrate(f, a, 1.0, rel_tol);
    head += integrate_to_infinity(f, 1.0, rel_tol);
    return head;
  }
  auto mapped = [&](double v) {
    if (v <= 0.0) return 0.0;
    const double u = a / v;
    const double fu = f(u);
    return fu == 0.0 ? 0.0 : fu * (a / v) / v;
  };
  return integrate(mapped, 0.0, 1.0, rel_tol);
}

Result integrate_gauss_kronrod(const Integrand& f, double a, double b, double rel_tol) {
  double err = 0.0;
  double l1 = 0.0;
  auto g = [&f](double x) { return f(x); };
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      g, a, b, kMaxGkDepth, rel_tol, &err, &l1);
  return {v, err, exceeded(err, l1, rel_tol)};
}

}  // namespace flevy::quad
