#include "synth/synthesize.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "core/error.hpp"
#include "core/json_util.hpp"
#include "criterion/fv_criterion.hpp"

namespace flevy::synth {
namespace {

using levy::PathSample;
using levy::TailCell;

constexpr int kSeriesTerms = 24;
constexpr double kSeriesRatio = 8.0;

std::vector<std::size_t> resolve_times(const PathSample& p, std::span<const double> times) {
  const auto& g = p.grid;
  const double slack = 1e-9 * g.step();
  std::vector<std::size_t> idx;
  idx.reserve(times.size());
  for (double t : times) {
    require(t >= g.r_min() - slack && t <= g.t_max() + slack, ErrorCode::InsufficientCoverage,
            "output time outside the driver grid");
    auto k = g.index_of(t);
    require(k.has_value(), ErrorCode::InvalidParameter, "output time is not a grid node");
    idx.push_back(*k);
  }
  return idx;
}

double max_abs(std::span<const double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> power_table(std::size_t n, double step, double d) {
  std::vector<double> g(n + 1);
  for (std::size_t m = 0; m <= n; ++m) g[m] = m == 0 ? 0.0 : std::pow(static_cast<double>(m) * step, d);
  return g;
}

std::size_t absdiff(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

// Weight of the fine increment at node k for output node j, before 1/Gamma(d+1).
double fine_weight(KernelKind kind, const std::vector<double>& g, std::size_t j, std::size_t k,
                   std::size_t k0) {
  switch (kind) {
    case KernelKind::NonAnticipative:
      return (j > k ? g[j - k] : 0.0) - (k < k0 ? g[k0 - k] : 0.0);
    case KernelKind::TailPart:
      return k < k0 ? (j > k ? g[j - k] : 0.0) - g[k0 - k] : 0.0;
    case KernelKind::RiemannLiouville:
      return k >= k0 && j > k ? g[j - k] : 0.0;
    case KernelKind::WellBalanced:
      return g[absdiff(j, k)] - g[absdiff(k0, k)];
  }
  return 0.0;
}

// Adds sum_c dL_c * mean over the cell of (tau + x)^d - x^d, x = distance
// from 0, where tau = t on the left side and -t on the right side.
void add_tail(const std::vector<TailCell>& cells, bool left, double d,
              std::span<const double> times, std::vector<double>& out) {
  if (cells.empty()) return;
  auto dist = [left](const TailCell& c) {
    return left ? std::pair{-c.hi, -c.lo} : std::pair{c.lo, c.hi};
  };
  const double x_in = dist(cells.front()).first;
  const double tabs = max_abs(times);
  if (tabs == 0.0) return;

  if (x_in >= kSeriesRatio * tabs) {
    // (tau + x)^d - x^d = sum_p binom(d, p) tau^p x^(d - p)
    std::vector<double> moment(kSeriesTerms + 1, 0.0);
    for (const auto& c : cells) {
      if (c.increment == 0.0) continue;
      const auto [x0, x1] = dist(c);
      const double lr = std::log(x1 / x0);
      for (int p = 1; p <= kSeriesTerms; ++p) {
        const double q = d - p + 1.0;
        moment[p] += c.increment * std::pow(x0, q) * std::expm1(q * lr) / (q * (x1 - x0));
      }
    }
    for (std::size_t j = 0; j < times.size(); ++j) {
      const double tau = left ? times[j] : -times[j];
      double coef = 1.0;
      double tp = 1.0;
      double s = 0.0;
      for (int p = 1; p <= kSeriesTerms; ++p) {
        coef *= (d - (p - 1)) / p;
        tp *= tau;
        s += coef * tp * moment[p];
      }
      out[j] += s;
    }
    return;
  }

  using boost::math::quadrature::gauss;
  for (const auto& c : cells) {
    if (c.increment == 0.0) continue;
    const auto [x0, x1] = dist(c);
    for (std::size_t j = 0; j < times.size(); ++j) {
      const double tau = left ? times[j] : -times[j];
      auto f = [&](double x) {
        const double y = tau + x;
        return (y > 0.0 ? std::pow(y, d) : 0.0) - std::pow(x, d);
      };
      out[j] += c.increment * gauss<double, 15>::integrate(f, x0, x1) / (x1 - x0);
    }
  }
}

void add_tails(const PathSample& p, const KernelSpec& spec, std::span<const double> times,
               std::vector<double>& out) {
  if (spec.kind != KernelKind::RiemannLiouville) add_tail(p.left_tail, true, spec.d, times, out);
  if (spec.kind == KernelKind::WellBalanced) add_tail(p.right_tail, false, spec.d, times, out);
}

FlpPath make_result(const PathSample& p, const KernelSpec& spec, std::span<const double> times) {
  FlpPath r;
  r.times.assign(times.begin(), times.end());
  r.values.assign(times.size(), 0.0);
  r.kernel = spec;
  r.step = p.grid.step();
  r.r_min = p.grid.r_min();
  r.left_extent = p.left_extent();
  r.right_extent = p.right_extent();
  const double tabs = max_abs(times);
  const double m2 = p.driver_second_moment;
  switch (spec.kind) {
    case KernelKind::RiemannLiouville: r.truncation_error = 0.0; break;
    case KernelKind::WellBalanced: {
      const double a = truncation_error(spec.d, tabs, m2, r.left_extent);
      const double b = truncation_error(spec.d, tabs, m2, r.right_extent);
      r.truncation_error = std::sqrt(a * a + b * b);
      break;
    }
    default: r.truncation_error = truncation_error(spec.d, tabs, m2, r.left_extent);
  }
  return r;
}

void check_coverage(const PathSample& p, const KernelSpec& spec, std::span<const double> times) {
  criterion::require_memory_parameter(spec.d);
  if (spec.kind != KernelKind::WellBalanced) return;
  const double tabs = max_abs(times);
  require(p.left_extent() >= 2.0 * tabs && p.right_extent() >= 2.0 * tabs,
          ErrorCode::InsufficientCoverage,
          "well-balanced synthesis needs the driver on both sides of the output window");
}

}  // namespace

FlpPath synthesize(const PathSample& path, const KernelSpec& spec, std::span<const double> out_times) {
  check_coverage(path, spec, out_times);
  const auto idx = resolve_times(path, out_times);
  FlpPath r = make_result(path, spec, out_times);
  const auto& g = path.grid;
  const std::size_t k0 = g.zero_index();
  const auto table = power_table(g.node_count(), g.step(), spec.d);

  for (std::size_t k = 0; k < g.cell_count(); ++k) {
    const double dl = path.increments[k];
    if (dl == 0.0) continue;
    for (std::size_t j = 0; j < idx.size(); ++j)
      r.values[j] += fine_weight(spec.kind, table, idx[j], k, k0) * dl;
  }
  add_tails(path, spec, out_times, r.values);
  const double gd = std::tgamma(spec.d + 1.0);
  for (double& v : r.values) v /= gd;
  return r;
}

FlpPath synthesize_path_form(const PathSample& path, const KernelSpec& spec,
                             std::span<const double> out_times) {
  check_coverage(path, spec, out_times);
  const auto idx = resolve_times(path, out_times);
  FlpPath r = make_result(path, spec, out_times);
  const auto& g = path.grid;
  const std::size_t k0 = g.zero_index();
  const std::size_t n = g.cell_count();
  const auto table = power_table(g.node_count(), g.step(), spec.d);
  const auto& L = path.values;

  // sum_k w_k (L_{k+1} - L_k) = w_{n-1} L_n - w_0 L_0 + sum_{k=1}^{n-1} (w_{k-1} - w_k) L_k
  for (std::size_t j = 0; j < idx.size(); ++j) {
    auto w = [&](std::size_t k) { return fine_weight(spec.kind, table, idx[j], k, k0); };
    double s = w(n - 1) * L[n] - w(0) * L[0];
    double prev = w(0);
    for (std::size_t k = 1; k < n; ++k) {
      const double cur = w(k);
      s += (prev - cur) * L[k];
      prev = cur;
    }
    r.values[j] = s;
  }
  add_tails(path, spec, out_times, r.values);
  const double gd = std::tgamma(spec.d + 1.0);
  for (double& v : r.values) v /= gd;
  return r;
}

FlpPath synthesize_nd_by_decomposition(const PathSample& path_pos, const PathSample& path_neg,
                                       double d, std::span<const double> out_times) {
  require(path_pos.grid.step() == path_neg.grid.step(), ErrorCode::InvalidParameter,
          "decomposition needs drivers on a common step");
  std::vector<double> reflected(out_times.begin(), out_times.end());
  for (double& t : reflected) t = -t;
  const KernelSpec na{KernelKind::NonAnticipative, d};
  FlpPath m1 = synthesize(path_pos, na, out_times);
  const FlpPath m2 = synthesize(path_neg, na, reflected);
  for (std::size_t j = 0; j < m1.values.size(); ++j) m1.values[j] += m2.values[j];
  m1.kernel.kind = KernelKind::WellBalanced;
  m1.right_extent = m2.left_extent;
  m1.truncation_error = std::hypot(m1.truncation_error, m2.truncation_error);
  return m1;
}

std::vector<double> dyadic_times(double a, double b, int depth) {
  require(b > a && depth >= 0 && depth < 40, ErrorCode::InvalidParameter, "bad dyadic partition");
  const std::size_t n = std::size_t{1} << depth;
  std::vector<double> t(n + 1);
  for (std::size_t i = 0; i <= n; ++i) t[i] = a + (b - a) * std::ldexp(static_cast<double>(i), -depth);
  return t;
}

nlohmann::json metadata_json(const FlpPath& p) {
  return {{"kernel", to_string(p.kernel.kind)},
          {"d", p.kernel.d},
          {"step", p.step},
          {"r_min", p.r_min},
          {"left_extent", p.left_extent},
          {"right_extent", p.right_extent},
          {"truncation_error", extended_real(p.truncation_error)},
          {"n_times", p.times.size()}};
}

}  // namespace flevy::synth
