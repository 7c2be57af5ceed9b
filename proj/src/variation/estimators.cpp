#include "variation/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/json_util.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "levy/increments.hpp"

namespace flevy::variation {

ExpectedTv expected_tv(const levy::LevyModel& m, double d, double a, double b, std::size_t n_mc,
                       std::uint64_t seed, double r_tail, const Y0Options& opts) {
  require(b > a, ErrorCode::InvalidParameter, "expected_tv needs a < b");
  ExpectedTv e;
  e.criterion = criterion::fv_criterion(m, d);
  if (e.criterion.verdict == criterion::Verdict::InfiniteVariation) {
    e.estimate = levy::kInf;
    return e;
  }
  require(n_mc >= 2, ErrorCode::InvalidParameter, "expected_tv needs at least two draws");
  const Y0Sampler sampler(m, d, r_tail, opts);
  std::vector<double> abs_y(n_mc);
  parallel_for(n_mc, [&](std::size_t i) {
    abs_y[i] = std::abs(sampler.sample(child_seed(seed, Stream::Replication, i)).value);
  });
  const auto est = stats::mean_and_stderr(abs_y);
  const double factor = (b - a) / std::tgamma(d);
  e.finite = true;
  e.draws = n_mc;
  e.mean_abs_y0 = est.mean;
  e.mean_abs_y0_stderr = est.std_error;
  e.estimate = factor * est.mean;
  e.std_error = factor * est.std_error;
  e.stub_bias_bound = factor * sampler.stub_l1_bound();
  return e;
}

nlohmann::json to_json(const ExpectedTv& e) {
  return {{"verdict", criterion::to_string(e.criterion.verdict)},
          {"finite", e.finite},
          {"estimate", extended_real(e.estimate)},
          {"std_error", e.std_error},
          {"mean_abs_y0", e.mean_abs_y0},
          {"mean_abs_y0_stderr", e.mean_abs_y0_stderr},
          {"stub_bias_bound", extended_real(e.stub_bias_bound)},
          {"draws", e.draws}};
}

TvExperimentResult tv_monte_carlo(const levy::LevyModel& m, const TvExperiment& e) {
  require(e.b > e.a && e.depth >= 1, ErrorCode::InvalidParameter, "bad tv experiment window");
  const double spacing = std::ldexp(e.b - e.a, -e.depth);
  const double step = e.step > 0.0 ? e.step : spacing;
  const auto plan = synth::plan_grid(e.kind, e.d, std::max(std::abs(e.a), std::abs(e.b)), step,
                                     m.second_moment(), e.tol);
  const auto times = synth::dyadic_times(e.a, e.b, e.depth);
  TvExperimentResult r;
  r.per_path.resize(e.paths);
  parallel_for(e.paths, [&](std::size_t i) {
    const auto path = levy::sample_increments(m, plan.grid, child_seed(e.seed, Stream::Replication, i),
                                              plan.tails);
    const auto f = synth::synthesize(path, {e.kind, e.d}, times);
    r.per_path[i] = tv_profile(f, e.a, e.b, e.depth, e.tv);
  });
  if (!r.per_path.empty()) r.summary = aggregate(r.per_path, e.tv);
  else r.summary.paths = 0;
  return r;
}

std::vector<std::pair<double, double>> derivative_estimate(const synth::FlpPath& path,
                                                           std::span<const double> t_list) {
  std::vector<std::pair<double, double>> out;
  for (double t : t_list) {
    require(t != 0.0, ErrorCode::InvalidParameter, "difference quotients need t != 0");
    const double slack = 1e-9 * std::max(1.0, std::abs(t));
    auto it = std::find_if(path.times.begin(), path.times.end(),
                           [&](double x) { return std::abs(x - t) <= slack; });
    require(it != path.times.end(), ErrorCode::InvalidParameter, "t is not an output time of the path");
    out.emplace_back(t, path.values[static_cast<std::size_t>(it - path.times.begin())] / t);
  }
  return out;
}

DerivativeConvergence derivative_convergence(const levy::LevyModel& m, const DerivativeExperiment& e) {
  require(!e.t_list.empty(), ErrorCode::InvalidParameter, "empty t list");
  const double tmax = *std::max_element(e.t_list.begin(), e.t_list.end());
  const auto plan = synth::plan_grid(synth::KernelKind::NonAnticipative, e.d, tmax, e.step,
                                     m.second_moment(), e.tol);
  std::vector<double> times;
  for (double t : e.t_list) {
    times.push_back(t);
    times.push_back(-t);
  }
  const std::size_t n = e.t_list.size();
  std::vector<std::vector<double>> right(n, std::vector<double>(e.paths));
  std::vector<std::vector<double>> left(n, std::vector<double>(e.paths));
  const double gd = std::tgamma(e.d);
  parallel_for(e.paths, [&](std::size_t i) {
    const auto path = levy::sample_increments(m, plan.grid, child_seed(e.seed, Stream::Replication, i),
                                              plan.tails);
    const auto f = synth::synthesize(path, {synth::KernelKind::NonAnticipative, e.d}, times);
    const double y = y0_from_path(path, e.d) / gd;
    for (std::size_t j = 0; j < n; ++j) {
      right[j][i] = std::abs(f.values[2 * j] / times[2 * j] - y);
      left[j][i] = std::abs(f.values[2 * j + 1] / times[2 * j + 1] - y);
    }
  });
  DerivativeConvergence r;
  r.t = e.t_list;
  std::vector<double> rm, lm;
  for (std::size_t j = 0; j < n; ++j) {
    r.right.push_back(stats::mean_and_stderr(right[j]));
    r.left.push_back(stats::mean_and_stderr(left[j]));
    rm.push_back(r.right.back().mean);
    lm.push_back(r.left.back().mean);
  }
  r.right_inversions = count_inversions(rm);
  r.left_inversions = count_inversions(lm);
  return r;
}

int count_inversions(std::span<const double> values) {
  int n = 0;
  for (std::size_t i = 1; i < values.size(); ++i) n += values[i] > values[i - 1];
  return n;
}

}  // namespace flevy::variation
