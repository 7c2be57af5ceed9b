#pragma once

#include <string>

#include "levy/increments.hpp"

namespace flevy::synth {

enum class KernelKind { NonAnticipative, WellBalanced, TailPart, RiemannLiouville };

const char* to_string(KernelKind k) noexcept;
KernelKind kernel_kind_from_string(const std::string& s);

struct KernelSpec {
  KernelKind kind = KernelKind::NonAnticipative;
  double d = 0.25;
};

// Integrand of the moving-average representation, including 1/Gamma(d+1).
double kernel_weight(const KernelSpec& spec, double t, double s);

// Left cutoff r_min < 0 such that dropping s < r_min costs at most tol in L2
// for every t <= t_max.
double truncation_radius(double d, double t_max, double driver_second_moment, double tol);

// Root-mean-square error of dropping s < -radius at time t (same majorant).
double truncation_error(double d, double t, double driver_second_moment, double radius);

struct SynthesisPlan {
  levy::IncrementGrid grid;
  levy::TailSpec tails;
  double truncation_radius = 0.0;  // negative; beyond it the driver is dropped
};

// Fine grid covering fine_factor * t_out on the sides the kernel needs, plus
// geometric tail cells out to the truncation radius.
SynthesisPlan plan_grid(KernelKind kind, double d, double t_out, double step,
                        double driver_second_moment, double tol, double fine_factor = 8.0);

}  // namespace flevy::synth
