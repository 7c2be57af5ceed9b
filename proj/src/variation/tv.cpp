#include "variation/tv.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/stats.hpp"

namespace flevy::variation {
namespace {

void finish(VariationReport& r, int max_depth, const TvOptions& opts) {
  const auto tv = [&](int n) { return r.tv_by_depth[static_cast<std::size_t>(n - 1)].second; };
  const double top = tv(max_depth);
  const double ref = tv(std::max(1, max_depth - 2));
  r.converged = ref == 0.0 ? top == 0.0 : std::abs(top - ref) / ref < opts.convergence_threshold;

  const int first = std::max(1, max_depth - opts.fit_depths + 1);
  std::vector<double> x, y;
  bool zero = false;
  for (int n = first; n <= max_depth; ++n) {
    if (tv(n) <= 0.0) zero = true;
    x.push_back(n);
    y.push_back(std::log2(tv(n)));
  }
  r.growth_exponent = zero || x.size() < 2 ? 0.0 : stats::ols_slope(x, y);
}

}  // namespace

double dyadic_tv(std::span<const double> values, int depth) {
  require(depth >= 0 && depth < 40, ErrorCode::InvalidParameter, "dyadic depth out of range");
  require(values.size() == (std::size_t{1} << depth) + 1, ErrorCode::InvalidParameter,
          "dyadic_tv needs values at all 2^n + 1 nodes");
  double s = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) s += std::abs(values[i] - values[i - 1]);
  return s;
}

VariationReport tv_profile_values(std::span<const double> values, int max_depth, const TvOptions& opts) {
  require(max_depth >= 1 && max_depth < 40, ErrorCode::InvalidParameter, "max_depth out of range");
  require(values.size() == (std::size_t{1} << max_depth) + 1, ErrorCode::InvalidParameter,
          "tv profile needs values at all dyadic nodes of the finest depth");
  VariationReport r;
  for (int n = 1; n <= max_depth; ++n) {
    const std::size_t stride = std::size_t{1} << (max_depth - n);
    double s = 0.0;
    for (std::size_t i = stride; i < values.size(); i += stride)
      s += std::abs(values[i] - values[i - stride]);
    r.tv_by_depth.emplace_back(n, s);
  }
  finish(r, max_depth, opts);
  r.converged_fraction = r.converged ? 1.0 : 0.0;
  r.mc_mean = r.tv_by_depth.back().second;
  return r;
}

VariationReport tv_profile(const synth::FlpPath& path, double a, double b, int max_depth,
                           const TvOptions& opts) {
  require(b > a, ErrorCode::InvalidParameter, "tv interval must have a < b");
  require(max_depth >= 1 && max_depth < 40, ErrorCode::InvalidParameter, "max_depth out of range");
  require(std::is_sorted(path.times.begin(), path.times.end()), ErrorCode::InvalidParameter,
          "path times must be increasing");
  const auto nodes = synth::dyadic_times(a, b, max_depth);
  std::vector<double> values;
  values.reserve(nodes.size());
  const double slack = 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
  for (double t : nodes) {
    auto it = std::lower_bound(path.times.begin(), path.times.end(), t - slack);
    require(it != path.times.end() && std::abs(*it - t) <= slack, ErrorCode::InvalidParameter,
            "path is not sampled at every dyadic node of the requested depth");
    values.push_back(path.values[static_cast<std::size_t>(it - path.times.begin())]);
  }
  return tv_profile_values(values, max_depth, opts);
}

VariationReport aggregate(std::span<const VariationReport> reports, const TvOptions& opts) {
  require(!reports.empty(), ErrorCode::InvalidParameter, "nothing to aggregate");
  const std::size_t depths = reports.front().tv_by_depth.size();
  VariationReport r;
  r.paths = reports.size();
  std::vector<double> top;
  double conv = 0.0;
  for (std::size_t n = 0; n < depths; ++n) {
    double s = 0.0;
    for (const auto& x : reports) {
      require(x.tv_by_depth.size() == depths, ErrorCode::InvalidParameter,
              "reports disagree on the depth range");
      s += x.tv_by_depth[n].second;
    }
    r.tv_by_depth.emplace_back(reports.front().tv_by_depth[n].first, s / static_cast<double>(reports.size()));
  }
  for (const auto& x : reports) {
    top.push_back(x.tv_by_depth.back().second);
    conv += x.converged ? 1.0 : 0.0;
  }
  finish(r, static_cast<int>(depths), opts);
  r.converged_fraction = conv / static_cast<double>(reports.size());
  const auto est = stats::mean_and_stderr(top);
  r.mc_mean = est.mean;
  r.mc_stderr = est.std_error;
  return r;
}

nlohmann::json to_json(const VariationReport& r) {
  nlohmann::json depths = nlohmann::json::array();
  for (const auto& [n, tv] : r.tv_by_depth) depths.push_back({{"n", n}, {"tv", tv}});
  return {{"tv_by_depth", depths},
          {"growth_exponent", r.growth_exponent},
          {"converged", r.converged},
          {"converged_fraction", r.converged_fraction},
          {"paths", r.paths},
          {"mc_mean", r.mc_mean},
          {"mc_stderr", r.mc_stderr}};
}

}  // namespace flevy::variation
