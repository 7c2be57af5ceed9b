#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "synth/synthesize.hpp"

namespace flevy::variation {

// sum_{i=1}^{2^n} |X(t_i) - X(t_{i-1})| for values at the 2^n + 1 dyadic nodes.
double dyadic_tv(std::span<const double> values, int depth);

struct TvOptions {
  double convergence_threshold = 0.05;  // relative change over two depth levels
  int fit_depths = 4;                   // depths used by the growth-exponent fit
};

struct VariationReport {
  std::vector<std::pair<int, double>> tv_by_depth;  // (n, TV_n); the mean over paths when aggregated
  double growth_exponent = 0.0;  // OLS slope of log2 TV_n over the last fit_depths depths
  bool converged = false;
  std::size_t paths = 1;
  double converged_fraction = 0.0;
  double mc_mean = 0.0;    // TV at the finest depth
  double mc_stderr = 0.0;  // zero for a single path
};

VariationReport tv_profile(const synth::FlpPath& path, double a, double b, int max_depth,
                           const TvOptions& opts = {});

// Same report computed from values already sitting on the dyadic nodes.
VariationReport tv_profile_values(std::span<const double> values, int max_depth,
                                  const TvOptions& opts = {});

// Averages TV_n over paths; the exponent and convergence flag are recomputed
// from the averaged profile.
VariationReport aggregate(std::span<const VariationReport> reports, const TvOptions& opts = {});

nlohmann::json to_json(const VariationReport& r);

}  // namespace flevy::variation
