#include "idbounds/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "core/error.hpp"
#include "core/json_util.hpp"
#include "core/quadrature.hpp"
#include "criterion/fv_criterion.hpp"

namespace flevy::idbounds {

using levy::kInf;

namespace {

double below(double x) { return std::nextafter(x, 0.0); }

// Integral of x^p over 0 < x < X, positive side.
double moment_below(const levy::JumpFamily& f, double p, double X) {
  return X > 0.0 ? levy::positive_moment(f, p, 0.0, below(X)) : 0.0;
}

// nu([x, inf)) kept finite where the argument underflows; the inner
// integrands are integrable there, so the clamp only touches null sets.
double tail_at(const levy::JumpFamily& f, double x) {
  constexpr double kHuge = 1e300;
  if (!(x > 0.0)) return levy::has_jumps(f) ? std::min(levy::positive_tail(f, 1e-300), kHuge) : 0.0;
  return std::min(levy::positive_tail(f, x), kHuge);
}

void check_rd(double d, double r) {
  criterion::require_memory_parameter(d);
  require(r < 0.0 && std::isfinite(r), ErrorCode::InvalidParameter, "r must be negative");
}

// Root of k(s) = level on (0, hi) for the decreasing kernel factor.
double kernel_root(double d, double t, double level, double hi) {
  auto g = [&](double s) { return kernel_factor(d, t, s) - level; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  auto [lo, up] = boost::math::tools::toms748_solve(g, 0.0, hi, g(0.0), g(hi), tol, iters);
  return 0.5 * (lo + up);
}



}  // namespace

double mean_abs_bound(const levy::LevyModel& m, double eps) {
  require(eps > 0.0 && std::isfinite(eps), ErrorCode::InvalidParameter, "eps must be positive");
  require(m.sigma() == 0.0 && m.is_symmetric(), ErrorCode::PreconditionViolation,
          "the mean-absolute bound needs a symmetric driver without Gaussian part");
  const auto& f = m.jumps();
  return eps + 2.0 / eps * levy::positive_clipped_square(f, eps) + 2.0 * levy::positive_excess(f, eps);
}

double kernel_factor(double d, double t, double s) {
  if (s <= 0.0) return std::pow(t, d - 1.0);
  return std::pow(s, d) * std::expm1(d * std::log1p(t / s)) / t;
}

double nu_rt_tail(const IntegralLevyMeasure& ilm, double u) {
  require(u > 0.0, ErrorCode::InvalidParameter, "nu_rt tail needs u > 0");
  require(ilm.t > 0.0, ErrorCode::InvalidParameter, "t must be positive");
  check_rd(ilm.d, ilm.r);
  const auto& f = ilm.model.jumps();
  const double R = -ilm.r;
  std::vector<double> breaks;
  for (double b : levy::positive_breakpoints(f)) {
    const double level = u / b;
    if (level < kernel_factor(ilm.d, ilm.t, 0.0) && level > kernel_factor(ilm.d, ilm.t, R))
      breaks.push_back(kernel_root(ilm.d, ilm.t, level, R));
  }
  auto g = [&](double s) { return tail_at(f, u / kernel_factor(ilm.d, ilm.t, s)); };
  return quad::integrate_piecewise(g, 0.0, R, breaks).value;
}

namespace {

quad::Result majorant_tail_q(const levy::JumpFamily& f, double d, double R, double u) {
  const double p = 1.0 / (1.0 - d);
  std::vector<double> breaks;
  for (double b : levy::positive_breakpoints(f)) breaks.push_back(std::pow(b * d / u, p));
  auto g = [&](double s) { return tail_at(f, u / d * std::pow(s, 1.0 - d)); };
  return quad::integrate_piecewise(g, 0.0, R, breaks);
}

}  // namespace

double majorant_tail(const levy::LevyModel& m, double d, double r, double u) {
  require(u > 0.0, ErrorCode::InvalidParameter, "majorant tail needs u > 0");
  check_rd(d, r);
  return majorant_tail_q(m.jumps(), d, -r, u).value;
}

double majorant_tail_closed(const levy::LevyModel& m, double d, double r, double u) {
  require(u > 0.0, ErrorCode::InvalidParameter, "majorant tail needs u > 0");
  check_rd(d, r);
  const double p = 1.0 / (1.0 - d), R = -r;
  const double X = u / d * std::pow(R, 1.0 - d);
  const double mom = moment_below(m.jumps(), p, X);
  return (mom > 0.0 ? std::pow(d / u, p) * mom : 0.0) + R * levy::positive_tail(m.jumps(), X);
}

double c2_rhs(const levy::LevyModel& m, double d, double r, double a) {
  check_rd(d, r);
  require(a > 0.0, ErrorCode::InvalidParameter, "a must be positive");
  const double p = 1.0 / (1.0 - d), R = -r;
  const double X = a / d * std::pow(R, 1.0 - d);
  const auto& f = m.jumps();
  const double mom = moment_below(f, p, X);
  return a * a * (1.0 - d) / (1.0 - 2.0 * d) *
         (R * levy::positive_tail(f, X) + (mom > 0.0 ? std::pow(d / a, p) * mom : 0.0));
}

double c3_rhs(const levy::LevyModel& m, double d, double r, double a) {
  check_rd(d, r);
  require(a > 0.0, ErrorCode::InvalidParameter, "a must be positive");
  const double p = 1.0 / (1.0 - d), R = -r;
  const double X = a / d * std::pow(R, 1.0 - d);
  const auto& f = m.jumps();
  const double mom = moment_below(f, p, X);
  const double upper = levy::positive_moment(f, 1.0, below(X), kInf);
  return std::pow(R, d) * upper +
         (mom > 0.0 ? (1.0 - d) * std::pow(d / a, d / (1.0 - d)) * mom : 0.0);
}

namespace {

// Both lefthand sides after exchanging the u integral with nu and ds:
//   int_0^a u nu_k([u,inf)) du = (1/2) int_0^R k^2 Q(a/k) ds,  Q(e) = int min(x, e)^2 nu
//   int_a^inf nu_k([u,inf)) du = int_0^R k E(a/k) ds,          E(e) = int (x - e)_+ nu
// for nu_k([u,inf)) = int_0^R nu([u/k(s), inf)) ds and a decreasing factor k.
// The s integral runs over s = w^q; q = 1/d flattens the majorant's s^(d-1).
template <class K>
BoundValue exchanged(const levy::LevyModel& m, double R, double a, K k, std::vector<double> breaks,
                     bool c2, double rhs, double q = 1.0) {
  BoundValue out;
  out.rhs = rhs;
  const auto& f = m.jumps();
  if (!levy::has_jumps(f)) return out;
  auto g = [&](double s) {
    const double ks = k(s);
    if (!(ks > 0.0) || !std::isfinite(ks)) return 0.0;
    const double e = a / ks;
    if (!(e > 0.0)) return 0.0;
    if (!c2) return ks * levy::positive_excess(f, e);
    const double q = levy::positive_clipped_square(f, e);
    return q > 0.0 ? 0.5 * a * a * (q / e) / e : 0.0;
  };
  for (double& b : breaks) b = std::pow(b, 1.0 / q);
  auto h = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double sw = std::pow(w, q);
    const double v = g(sw);
    return v == 0.0 ? 0.0 : v * q * sw / w;
  };
  const auto res = quad::integrate_piecewise(h, 0.0, std::pow(R, 1.0 / q), std::move(breaks));
  out.lhs = res.value;
  out.error = res.error;
  out.capped = res.capped && res.error > kCompareRelTol * std::max(rhs, res.value);
  return out;
}

BoundValue majorant_bound(const levy::LevyModel& m, double d, double r, double a, bool c2) {
  check_rd(d, r);
  require(a > 0.0, ErrorCode::InvalidParameter, "a must be positive");
  const double p = 1.0 / (1.0 - d);
  std::vector<double> breaks;
  for (double b : levy::positive_breakpoints(m.jumps())) breaks.push_back(std::pow(b * d / a, p));
  auto k = [d](double s) { return d * std::pow(s, d - 1.0); };
  return exchanged(m, -r, a, k, breaks, c2, c2 ? c2_rhs(m, d, r, a) : c3_rhs(m, d, r, a), 1.0 / d);
}

BoundValue exact_bound(const levy::LevyModel& m, double d, double r, double a, double t, bool c2) {
  check_rd(d, r);
  require(a > 0.0 && t > 0.0, ErrorCode::InvalidParameter, "a and t must be positive");
  const double R = -r;
  std::vector<double> breaks;
  for (double b : levy::positive_breakpoints(m.jumps())) {
    const double level = a / b;
    if (level < kernel_factor(d, t, 0.0) && level > kernel_factor(d, t, R))
      breaks.push_back(kernel_root(d, t, level, R));
  }
  auto k = [d, t](double s) { return kernel_factor(d, t, s); };
  return exchanged(m, R, a, k, breaks, c2, c2 ? c2_rhs(m, d, r, a) : c3_rhs(m, d, r, a));
}

}  // namespace

BoundValue bound_c2(const levy::LevyModel& m, double d, double r, double a) {
  return majorant_bound(m, d, r, a, true);
}

BoundValue bound_c3(const levy::LevyModel& m, double d, double r, double a) {
  return majorant_bound(m, d, r, a, false);
}

BoundValue bound_c2_at(const levy::LevyModel& m, double d, double r, double a, double t) {
  return exact_bound(m, d, r, a, t, true);
}

BoundValue bound_c3_at(const levy::LevyModel& m, double d, double r, double a, double t) {
  return exact_bound(m, d, r, a, t, false);
}

double fd_kernel_integral(double d, double b) {
  criterion::require_memory_parameter(d);
  require(b > 0.0 && std::isfinite(b), ErrorCode::InvalidParameter, "b must be positive");
  auto g = [&](double u) {
    if (u <= 0.0) return 0.0;
    return -std::pow(u, d - 0.5) * std::expm1((d - 1.0) * std::log1p(b / u));
  };
  quad::Result r = quad::integrate(g, 0.0, b);
  r += quad::integrate_to_infinity(g, b);
  return r.value;
}

double fd_tv_bound(const levy::LevyModel& m, double d, double b) {
  criterion::require_memory_parameter(d);
  require(m.mean() == 0.0, ErrorCode::PreconditionViolation,
          "the F_d variation bound needs a driver with mean zero");
  const double m2 = m.second_moment();
  if (m2 == 0.0) return 0.0;
  return std::sqrt(m2) / std::tgamma(d) * fd_kernel_integral(d, b);
}

double vanishing_tail_mass(const levy::LevyModel& m, double d, double r) {
  check_rd(d, r);
  return -r * levy::positive_tail(m.jumps(), std::pow(-r, 1.0 - d));
}

double vanishing_tail_mean(const levy::LevyModel& m, double d, double r, double eps) {
  check_rd(d, r);
  require(eps > 0.0, ErrorCode::InvalidParameter, "eps must be positive");
  const double lo = std::pow(-r, 1.0 - d) * eps / (2.0 * d);
  return std::pow(-r, d) * levy::positive_moment(m.jumps(), 1.0, below(lo), kInf);
}

nlohmann::json to_json(const BoundValue& b) {
  return {{"lhs", extended_real(b.lhs)},
          {"rhs", extended_real(b.rhs)},
          {"error", b.error},
          {"holds", b.holds()},
          {"quadrature_capped", b.capped}};
}

}  // namespace flevy::idbounds
