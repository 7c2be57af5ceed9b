#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core/stats.hpp"
#include "criterion/fv_criterion.hpp"
#include "levy/levy_model.hpp"
#include "synth/synthesize.hpp"
#include "variation/tv.hpp"
#include "variation/y0.hpp"

namespace flevy::variation {

inline constexpr double kDefaultYTail = -1e8;

struct ExpectedTv {
  criterion::CriterionReport criterion;
  bool finite = false;     // false: the expectation is infinite and nothing was sampled
  double estimate = 0.0;   // ((b - a) / Gamma(d)) E|Y0|
  double std_error = 0.0;
  double mean_abs_y0 = 0.0;
  double mean_abs_y0_stderr = 0.0;
  double stub_bias_bound = 0.0;  // ((b - a) / Gamma(d)) times the stub L1 bound
  std::size_t draws = 0;
};

ExpectedTv expected_tv(const levy::LevyModel& m, double d, double a, double b, std::size_t n_mc,
                       std::uint64_t seed, double r_tail = kDefaultYTail,
                       const Y0Options& opts = {});

nlohmann::json to_json(const ExpectedTv& e);

struct TvExperiment {
  synth::KernelKind kind = synth::KernelKind::NonAnticipative;
  double d = 0.25;
  double a = 0.0;
  double b = 1.0;
  int depth = 10;
  double step = 0.0;  // driver grid step; 0 means the finest dyadic spacing
  double tol = 1e-3;  // truncation tolerance
  std::size_t paths = 100;
  std::uint64_t seed = 0;
  TvOptions tv;
};

struct TvExperimentResult {
  VariationReport summary;
  std::vector<VariationReport> per_path;
};

// Synthesizes paths on the dyadic nodes of [a, b] and profiles each one.
TvExperimentResult tv_monte_carlo(const levy::LevyModel& m, const TvExperiment& e);

// (t, X(t) / t) for every t in t_list; each t must be an output time of the path.
std::vector<std::pair<double, double>> derivative_estimate(const synth::FlpPath& path,
                                                           std::span<const double> t_list);

struct DerivativeExperiment {
  double d = 0.25;
  std::vector<double> t_list;  // decreasing positive
  double step = 1.0 / 16384;
  double tol = 1e-3;
  std::size_t paths = 1000;
  std::uint64_t seed = 0;
};

struct DerivativeConvergence {
  std::vector<double> t;
  std::vector<stats::MeanEstimate> right;  // E|M(t)/t - Y0/Gamma(d)|
  std::vector<stats::MeanEstimate> left;   // same with t -> -t
  int right_inversions = 0;
  int left_inversions = 0;
};

// Paired errors: Y0 is read off the same driver that produces M(t).
DerivativeConvergence derivative_convergence(const levy::LevyModel& m, const DerivativeExperiment& e);

// Steps where a sequence expected to decrease goes up.
int count_inversions(std::span<const double> values);

}  // namespace flevy::variation
