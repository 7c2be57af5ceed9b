#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "core/rng.hpp"
#include "levy/levy_model.hpp"

namespace flevy::levy {

struct SamplingOptions {
  // Truncated-stable jumps below eps = scale * h^(1/alpha), clamped to
  // [min, max], are replaced by a compensated Gaussian.
  double small_jump_scale = 0.1;
  double small_jump_min = 1e-6;
  double small_jump_max = 1e-2;
  // Cells whose expected jump count exceeds this draw the jump sum from its
  // Gaussian approximation.
  double clt_count = 1e5;
  // Same for the coarse tail cells, where the kernel is nearly flat.
  double tail_clt_count = 1e3;
};

// One finite-activity jump stream after small-jump truncation.
struct JumpSource {
  enum class Kind { Atom, Stable };
  Kind kind = Kind::Atom;
  double rate = 0.0;    // per unit time
  double mean = 0.0;    // E J
  double second = 0.0;  // E J^2
  double size = 0.0;    // Atom
  double alpha = 1.0;   // Stable: magnitudes on (eps, 1] with density ~ x^(-1-alpha)
  double eps = 0.0;
  bool symmetric = false;

  double sample(Rng& rng) const;
};

// Increment law of L over a cell of a given width, written as
// drift * w + N(0, gaussian_var * w) + sum of raw jumps from sources.
struct CellLaw {
  double drift = 0.0;
  double gaussian_var = 0.0;
  std::vector<JumpSource> sources;
};

CellLaw make_cell_law(const LevyModel& m, double width, const SamplingOptions& opts = {});

// Fills out with i.i.d. increments over cells of width w.
void fill_increments(const CellLaw& law, double w, std::span<double> out, Rng& rng,
                     const SamplingOptions& opts = {});
double draw_increment(const CellLaw& law, double w, Rng& rng, const SamplingOptions& opts = {});

// Uniform grid on [r_min, t_max] with 0 as a node.
class IncrementGrid {
 public:
  IncrementGrid(double r_min, double t_max, double step);

  double r_min() const noexcept { return -static_cast<double>(n_neg_) * step_; }
  double t_max() const noexcept { return static_cast<double>(n_pos_) * step_; }
  double step() const noexcept { return step_; }
  std::size_t cell_count() const noexcept { return n_neg_ + n_pos_; }
  std::size_t node_count() const noexcept { return cell_count() + 1; }
  std::size_t zero_index() const noexcept { return n_neg_; }
  double node(std::size_t k) const noexcept {
    return (static_cast<double>(k) - static_cast<double>(n_neg_)) * step_;
  }
  // Index of the node at t, if t is a node up to rounding.
  std::optional<std::size_t> index_of(double t) const;

  bool operator==(const IncrementGrid&) const = default;

 private:
  std::size_t n_neg_ = 0;
  std::size_t n_pos_ = 0;
  double step_ = 1.0;
};

// Coarse cell beyond the uniform grid, lo < hi.
struct TailCell {
  double lo = 0.0;
  double hi = 0.0;
  double increment = 0.0;
};

struct PathSample {
  IncrementGrid grid{0.0, 1.0, 1.0};
  std::vector<double> increments;  // over [s_k, s_{k+1})
  std::vector<double> values;      // L(s_k), L(0) = 0
  std::vector<TailCell> left_tail;   // outward from r_min
  std::vector<TailCell> right_tail;  // outward from t_max
  std::uint64_t seed = 0;
  // E L(1)^2 of the generating model; NaN when unknown.
  double driver_second_moment = std::numeric_limits<double>::quiet_NaN();

  // Largest |s| covered on each side, tails included.
  double left_extent() const;
  double right_extent() const;
};

// Builds a sample from increments, recomputing the anchored prefix sums.
PathSample make_path(IncrementGrid grid, std::vector<double> increments, std::uint64_t seed = 0);

// Geometric coarse cells beyond the uniform grid, out to the given radii.
struct TailSpec {
  double left_radius = 0.0;
  double right_radius = 0.0;
  double growth = 1.0 / 16.0;
};

// Distance intervals [x_i, x_{i+1}] with x_0 = start, x_{i+1} = x_i (1 + growth),
// the last one clipped at radius.
std::vector<std::pair<double, double>> geometric_cells(double start, double radius, double growth);

PathSample sample_increments(const LevyModel& m, const IncrementGrid& grid, std::uint64_t seed,
                             const TailSpec& tails = {}, const SamplingOptions& opts = {});

// Two-sided path with L(t) = -L2(-t-) for t < 0, where neg_source realizes L2
// on [0, -r_min]. Tail cells of neg_source's right side become the left tail.
PathSample splice_two_sided(const PathSample& pos, const PathSample& neg_source);

// Driver of the reflected integral: the increment at s_k moves to -s_k. The
// result lives on [-t_max, -r_min + h]; its first cell is empty.
PathSample time_reverse(const PathSample& path);

// CSV columns s, L(s) over the uniform grid.
void write_csv(const PathSample& path, std::ostream& os);

}  // namespace flevy::levy
