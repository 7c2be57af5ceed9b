#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "levy/increments.hpp"
#include "synth/kernel.hpp"

namespace flevy::synth {

struct FlpPath {
  std::vector<double> times;
  std::vector<double> values;
  KernelSpec kernel;
  double step = 0.0;
  double r_min = 0.0;          // left end of the uniform grid
  double left_extent = 0.0;    // truncation distance on the left, tails included
  double right_extent = 0.0;   // same on the right
  double truncation_error = 0.0;  // RMS bound at max |t|; NaN if the driver law is unknown
};

// X(t_j) = sum_k kernel(t_j, s_k) dL_k with each fine increment weighted at
// its left node; coarse tail cells use the kernel averaged over the cell.
FlpPath synthesize(const levy::PathSample& path, const KernelSpec& spec,
                   std::span<const double> out_times);

// Same values through summation by parts against the cumulative values L(s_k).
FlpPath synthesize_path_form(const levy::PathSample& path, const KernelSpec& spec,
                             std::span<const double> out_times);

// N_d(t) = M1(t) + M2(-t), with M2 driven by the reflected driver (see
// levy::time_reverse).
FlpPath synthesize_nd_by_decomposition(const levy::PathSample& path_pos,
                                       const levy::PathSample& path_neg, double d,
                                       std::span<const double> out_times);

// Nodes a + (b - a) i 2^-depth.
std::vector<double> dyadic_times(double a, double b, int depth);

nlohmann::json metadata_json(const FlpPath& p);

}  // namespace flevy::synth
