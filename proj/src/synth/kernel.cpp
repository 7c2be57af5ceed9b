#include "synth/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"
#include "criterion/fv_criterion.hpp"

namespace flevy::synth {

const char* to_string(KernelKind k) noexcept {
  switch (k) {
    case KernelKind::NonAnticipative: return "non_anticipative";
    case KernelKind::WellBalanced: return "well_balanced";
    case KernelKind::TailPart: return "tail_part";
    case KernelKind::RiemannLiouville: return "riemann_liouville";
  }
  return "unknown";
}

KernelKind kernel_kind_from_string(const std::string& s) {
  for (auto k : {KernelKind::NonAnticipative, KernelKind::WellBalanced, KernelKind::TailPart,
                 KernelKind::RiemannLiouville})
    if (s == to_string(k)) return k;
  if (s == "M" || s == "na") return KernelKind::NonAnticipative;
  if (s == "N" || s == "wb") return KernelKind::WellBalanced;
  if (s == "F" || s == "tail") return KernelKind::TailPart;
  if (s == "I" || s == "rl") return KernelKind::RiemannLiouville;
  throw Error(ErrorCode::InvalidParameter, "unknown kernel kind '" + s + "'");
}

namespace {

double ppow(double x, double d) { return x > 0.0 ? std::pow(x, d) : 0.0; }

// (t - s)^d - (-s)^d for s < 0 and t - s >= 0, accurate when |s| >> |t|.
double tail_difference(double t, double s, double d) {
  const double x = -s;
  if (t + x <= 0.0) return -std::pow(x, d);
  if (std::abs(t) < 0.5 * x) return std::pow(x, d) * std::expm1(d * std::log1p(t / x));
  return std::pow(t + x, d) - std::pow(x, d);
}

}  // namespace

double kernel_weight(const KernelSpec& spec, double t, double s) {
  const double d = spec.d;
  const double g = std::tgamma(d + 1.0);
  switch (spec.kind) {
    case KernelKind::NonAnticipative:
      if (s < 0.0) return tail_difference(t, s, d) / g;
      return ppow(t - s, d) / g;
    case KernelKind::TailPart:
      if (s >= 0.0) return 0.0;
      return tail_difference(t, s, d) / g;
    case KernelKind::RiemannLiouville:
      if (s < 0.0) return 0.0;
      return ppow(t - s, d) / g;
    case KernelKind::WellBalanced:
      if (s < 0.0 && t >= s) return tail_difference(t, s, d) / g;
      if (s > 0.0 && t <= s) return tail_difference(-t, -s, d) / g;
      return (std::pow(std::abs(t - s), d) - std::pow(std::abs(s), d)) / g;
  }
  return 0.0;
}

double truncation_radius(double d, double t_max, double driver_second_moment, double tol) {
  criterion::require_memory_parameter(d);
  require(tol > 0.0, ErrorCode::InvalidParameter, "truncation tolerance must be positive");
  require(driver_second_moment > 0.0 && t_max > 0.0, ErrorCode::InvalidParameter,
          "truncation radius needs positive t_max and driver second moment");
  const double g = std::tgamma(d + 1.0);
  const double base = driver_second_moment * t_max * t_max * d * d / (g * g * (1.0 - 2.0 * d) * tol * tol);
  return -std::pow(base, 1.0 / (1.0 - 2.0 * d));
}

double truncation_error(double d, double t, double driver_second_moment, double radius) {
  if (t == 0.0) return 0.0;
  if (!(radius > 0.0)) return std::numeric_limits<double>::infinity();
  const double g = std::tgamma(d + 1.0);
  const double k = std::abs(t) * d / g;
  return std::sqrt(driver_second_moment * k * k * std::pow(radius, 2.0 * d - 1.0) / (1.0 - 2.0 * d));
}

SynthesisPlan plan_grid(KernelKind kind, double d, double t_out, double step,
                        double driver_second_moment, double tol, double fine_factor) {
  criterion::require_memory_parameter(d);
  require(t_out > 0.0 && step > 0.0, ErrorCode::InvalidParameter,
          "plan_grid needs positive t_out and step");
  const double t_max = std::ceil(t_out / step - 1e-9) * step;
  const double fine = std::max(1.0, std::ceil(fine_factor * t_max / step - 1e-9)) * step;
  double radius = fine;
  if (driver_second_moment > 0.0)
    radius = std::max(fine, -truncation_radius(d, t_max, driver_second_moment, tol));

  switch (kind) {
    case KernelKind::RiemannLiouville:
      return {levy::IncrementGrid(0.0, t_max, step), {}, 0.0};
    case KernelKind::WellBalanced:
      return {levy::IncrementGrid(-fine, std::max(t_max, fine), step), {radius, radius}, -radius};
    default:
      return {levy::IncrementGrid(-fine, t_max, step), {radius, 0.0}, -radius};
  }
}

}  // namespace flevy::synth
