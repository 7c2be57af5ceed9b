#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "core/rng.hpp"
#include "levy/increments.hpp"

namespace flevy::variation {

struct Y0Options {
  double inner_cutoff = 1e-12;  // delta: the stub (-delta, 0) is bounded, not sampled
  double cell_ratio = 2.0;      // geometric mesh between delta and |r_tail|
  double clt_count = 1000.0;    // above this expected jump count a cell is drawn Gaussian
  bool tail_correction = true;  // Gaussian stand-in for s < r_tail
};

struct Y0Sample {
  double value = 0.0;       // the improper integral
  double derivative = 0.0;  // value / Gamma(d), or -value / Gamma(d) for N_d
  double r_tail = 0.0;
  double inner_cutoff = 0.0;
  double stub_l1_bound = 0.0;        // E|stub| bound, our own construction
  double tail_correction_std = 0.0;  // standard deviation of the Gaussian tail term
  bool criterion_holds = false;
};

// Draws of I = int_{-inf}^0 (-s)^(d-1) L(ds). Jump positions are exact inside
// each mesh cell, so the weight (-s)^(d-1) is never averaged.
class Y0Sampler {
 public:
  Y0Sampler(const levy::LevyModel& m, double d, double r_tail, const Y0Options& opts = {});

  // One-sided integral over [delta, |r_tail|] plus the tail term.
  double draw(Rng& rng) const;

  Y0Sample sample(std::uint64_t seed) const;
  // int sign(s) |s|^(d-1) L(ds) over both half lines.
  Y0Sample sample_two_sided(std::uint64_t seed) const;

  double stub_l1_bound() const noexcept { return stub_bound_; }
  double tail_std() const noexcept { return tail_std_; }
  double d() const noexcept { return d_; }

 private:
  struct Cell {
    double x0, x1;
    double w1;  // int x^(d-1)
    double w2;  // int x^(2d-2)
    levy::CellLaw law;
  };

  Y0Sample blank() const;

  double d_;
  double r_tail_;
  Y0Options opts_;
  std::vector<Cell> cells_;
  double tail_std_ = 0.0;
  double stub_bound_ = 0.0;
  bool criterion_holds_ = false;
};

Y0Sample sample_y0(const levy::LevyModel& m, double d, double r_tail, std::uint64_t seed,
                   const Y0Options& opts = {});
Y0Sample sample_nd_derivative(const levy::LevyModel& m, double d, double r_tail, std::uint64_t seed,
                              const Y0Options& opts = {});

// Upper bound on E| int_{-delta}^0 (-s)^(d-1) L(ds) |: the symmetric-law
// inequality applied to the symmetrized stub, minimized over its epsilon.
double stub_l1_bound(const levy::LevyModel& m, double d, double delta);

// The same integral read off a sampled driver: fine increments at s_k < 0
// weighted by (-s_k)^(d-1), tail cells by the cell average of the weight.
double y0_from_path(const levy::PathSample& path, double d);

nlohmann::json to_json(const Y0Sample& s);

}  // namespace flevy::variation
