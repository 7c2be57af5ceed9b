#include "levy/increments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "core/error.hpp"

namespace flevy::levy {
namespace {

void flatten(const JumpFamily& f, std::vector<const JumpFamily*>& out) {
  if (const auto* mx = std::get_if<Mixture>(&f.kind)) {
    for (const auto& q : mx->parts) flatten(q, out);
  } else {
    out.push_back(&f);
  }
}

// int_eps^1 x^(-alpha) dx
double inverse_power_integral(double alpha, double eps) {
  const double k = 1.0 - alpha;
  const double le = std::log(eps);
  if (k == 0.0) return -le;
  return -std::expm1(k * le) / k;
}

}  // namespace

double JumpSource::sample(Rng& rng) const {
  if (kind == Kind::Atom) return size;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  const double x = std::pow(1.0 + u * (std::pow(eps, -alpha) - 1.0), -1.0 / alpha);
  if (symmetric && (rng() & 1U)) return -x;
  return x;
}

CellLaw make_cell_law(const LevyModel& m, double width, const SamplingOptions& opts) {
  require(width > 0.0, ErrorCode::InvalidParameter, "cell width must be positive");
  CellLaw law;
  law.gaussian_var = m.sigma();
  double compensator = 0.0;
  std::vector<const JumpFamily*> parts;
  flatten(m.jumps(), parts);
  for (const JumpFamily* f : parts) {
    if (const auto* cp = std::get_if<CompoundPoisson>(&f->kind)) {
      for (const auto& a : cp->atoms) {
        if (a.rate <= 0.0) continue;
        JumpSource s;
        s.kind = JumpSource::Kind::Atom;
        s.rate = a.rate;
        s.size = a.size;
        s.mean = a.size;
        s.second = a.size * a.size;
        compensator += a.rate * a.size;
        law.sources.push_back(s);
      }
    } else if (const auto* ts = std::get_if<TruncatedStable>(&f->kind)) {
      double eps = opts.small_jump_scale * std::pow(width, 1.0 / ts->alpha);
      eps = std::min(std::max(eps, opts.small_jump_min), opts.small_jump_max);
      eps = std::min(eps, 0.5);
      const double sides = ts->symmetric ? 2.0 : 1.0;
      const double c = ts->scale;
      const double a = ts->alpha;
      JumpSource s;
      s.kind = JumpSource::Kind::Stable;
      s.alpha = a;
      s.eps = eps;
      s.symmetric = ts->symmetric;
      s.rate = sides * c * std::expm1(-a * std::log(eps)) / a;
      const double first = ts->symmetric ? 0.0 : c * inverse_power_integral(a, eps);
      s.mean = first / s.rate;
      s.second = sides * c * -std::expm1((2.0 - a) * std::log(eps)) / (2.0 - a) / s.rate;
      compensator += first;
      law.gaussian_var += sides * c * std::pow(eps, 2.0 - a) / (2.0 - a);
      law.sources.push_back(s);
    }
  }
  law.drift = m.mean() - compensator;
  return law;
}

void fill_increments(const CellLaw& law, double w, std::span<double> out, Rng& rng,
                     const SamplingOptions& opts) {
  if (out.empty()) return;
  const double base = law.drift * w;
  if (law.gaussian_var > 0.0) {
    std::normal_distribution<double> nd(0.0, std::sqrt(law.gaussian_var * w));
    for (double& x : out) x = base + nd(rng);
  } else {
    std::fill(out.begin(), out.end(), base);
  }
  const std::size_t n = out.size();
  for (const JumpSource& s : law.sources) {
    const double per_cell = s.rate * w;
    if (per_cell > opts.clt_count) {
      std::normal_distribution<double> nd(per_cell * s.mean, std::sqrt(per_cell * s.second));
      for (double& x : out) x += nd(rng);
      continue;
    }
    std::poisson_distribution<long long> pd(per_cell * static_cast<double>(n));
    const long long count = pd(rng);
    if (n == 1 && s.kind == JumpSource::Kind::Atom) {
      out[0] += static_cast<double>(count) * s.size;
      continue;
    }
    std::uniform_int_distribution<std::size_t> cell(0, n - 1);
    for (long long i = 0; i < count; ++i) {
      const std::size_t k = n == 1 ? 0 : cell(rng);
      out[k] += s.sample(rng);
    }
  }
}

double draw_increment(const CellLaw& law, double w, Rng& rng, const SamplingOptions& opts) {
  double x = 0.0;
  fill_increments(law, w, std::span<double>(&x, 1), rng, opts);
  return x;
}

namespace {

std::size_t cells_in(double length, double step, const char* what) {
  const double x = length / step;
  const double k = std::round(x);
  require(std::abs(x - k) <= 1e-9 * std::max(1.0, x), ErrorCode::InvalidParameter,
          std::string(what) + " must be an integer multiple of the step");
  return static_cast<std::size_t>(k);
}

}  // namespace

IncrementGrid::IncrementGrid(double r_min, double t_max, double step) {
  require(std::isfinite(step) && step > 0.0, ErrorCode::InvalidParameter, "grid step must be positive");
  require(std::isfinite(r_min) && r_min <= 0.0, ErrorCode::InvalidParameter, "r_min must be <= 0");
  require(std::isfinite(t_max) && t_max > 0.0, ErrorCode::InvalidParameter, "t_max must be positive");
  step_ = step;
  n_neg_ = cells_in(-r_min, step, "r_min");
  n_pos_ = cells_in(t_max, step, "t_max");
  require(n_pos_ > 0, ErrorCode::InvalidParameter, "t_max must cover at least one step");
}

std::optional<std::size_t> IncrementGrid::index_of(double t) const {
  const double x = t / step_ + static_cast<double>(n_neg_);
  const double k = std::round(x);
  if (std::abs(x - k) > 1e-9 * std::max(1.0, std::abs(x))) return std::nullopt;
  if (k < 0.0 || k > static_cast<double>(cell_count())) return std::nullopt;
  return static_cast<std::size_t>(k);
}

double PathSample::left_extent() const {
  return left_tail.empty() ? -grid.r_min() : -left_tail.back().lo;
}

double PathSample::right_extent() const {
  return right_tail.empty() ? grid.t_max() : right_tail.back().hi;
}

PathSample make_path(IncrementGrid grid, std::vector<double> increments, std::uint64_t seed) {
  require(increments.size() == grid.cell_count(), ErrorCode::InvalidParameter,
          "increment count does not match the grid");
  PathSample p{grid, std::move(increments), {}, {}, {}, seed};
  const std::size_t z = grid.zero_index();
  p.values.assign(grid.node_count(), 0.0);
  for (std::size_t k = z; k < grid.cell_count(); ++k) p.values[k + 1] = p.values[k] + p.increments[k];
  for (std::size_t k = z; k-- > 0;) p.values[k] = p.values[k + 1] - p.increments[k];
  return p;
}

std::vector<std::pair<double, double>> geometric_cells(double start, double radius, double growth) {
  require(start > 0.0 && growth > 0.0, ErrorCode::InvalidParameter,
          "geometric cells need a positive start and growth");
  std::vector<std::pair<double, double>> cells;
  double x = start;
  while (x < radius) {
    double next = x * (1.0 + growth);
    if (next >= radius || radius - next < 0.25 * growth * x) next = radius;
    cells.emplace_back(x, next);
    x = next;
  }
  return cells;
}

PathSample sample_increments(const LevyModel& m, const IncrementGrid& grid, std::uint64_t seed,
                             const TailSpec& tails, const SamplingOptions& opts) {
  const double h = grid.step();
  const std::size_t z = grid.zero_index();
  const CellLaw law = make_cell_law(m, h, opts);
  std::vector<double> inc(grid.cell_count(), 0.0);

  Rng pos_rng = make_rng(child_seed(seed, Stream::PositiveSide));
  fill_increments(law, h, std::span<double>(inc).subspan(z), pos_rng, opts);

  // Negative side: L2 increments outward from 0, stored mirrored.
  std::vector<double> neg(z);
  Rng neg_rng = make_rng(child_seed(seed, Stream::NegativeSide));
  fill_increments(law, h, neg, neg_rng, opts);
  for (std::size_t j = 0; j < z; ++j) inc[z - 1 - j] = neg[j];

  PathSample p = make_path(grid, std::move(inc), seed);
  p.driver_second_moment = m.second_moment();

  SamplingOptions tail_opts = opts;
  tail_opts.clt_count = std::min(opts.clt_count, opts.tail_clt_count);
  if (tails.left_radius > -grid.r_min()) {
    require(z > 0, ErrorCode::InvalidParameter, "a left tail needs r_min < 0");
    Rng rng = make_rng(child_seed(seed, Stream::LeftTail));
    for (auto [x0, x1] : geometric_cells(-grid.r_min(), tails.left_radius, tails.growth)) {
      const CellLaw cl = make_cell_law(m, x1 - x0, tail_opts);
      p.left_tail.push_back({-x1, -x0, draw_increment(cl, x1 - x0, rng, tail_opts)});
    }
  }
  if (tails.right_radius > grid.t_max()) {
    Rng rng = make_rng(child_seed(seed, Stream::RightTail));
    for (auto [x0, x1] : geometric_cells(grid.t_max(), tails.right_radius, tails.growth)) {
      const CellLaw cl = make_cell_law(m, x1 - x0, tail_opts);
      p.right_tail.push_back({x0, x1, draw_increment(cl, x1 - x0, rng, tail_opts)});
    }
  }
  return p;
}

PathSample splice_two_sided(const PathSample& pos, const PathSample& neg_source) {
  require(pos.grid.step() == neg_source.grid.step(), ErrorCode::InvalidParameter,
          "splice needs a common step");
  require(pos.grid.zero_index() == 0 && neg_source.grid.zero_index() == 0,
          ErrorCode::InvalidParameter, "splice needs one-sided samples starting at 0");
  require(pos.left_tail.empty() && neg_source.left_tail.empty(), ErrorCode::InvalidParameter,
          "one-sided samples cannot carry a left tail");
  const std::size_t nn = neg_source.grid.cell_count();
  IncrementGrid grid(-neg_source.grid.t_max(), pos.grid.t_max(), pos.grid.step());
  std::vector<double> inc;
  inc.reserve(grid.cell_count());
  for (std::size_t j = nn; j-- > 0;) inc.push_back(neg_source.increments[j]);
  inc.insert(inc.end(), pos.increments.begin(), pos.increments.end());
  PathSample p = make_path(grid, std::move(inc), pos.seed);
  if (pos.driver_second_moment == neg_source.driver_second_moment)
    p.driver_second_moment = pos.driver_second_moment;
  for (const auto& c : neg_source.right_tail) p.left_tail.push_back({-c.hi, -c.lo, c.increment});
  p.right_tail = pos.right_tail;
  return p;
}

PathSample time_reverse(const PathSample& path) {
  const auto& g = path.grid;
  const double h = g.step();
  const std::size_t n = g.cell_count();
  IncrementGrid grid(-g.t_max(), -g.r_min() + h, h);
  std::vector<double> inc(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) inc[n - k] = path.increments[k];
  PathSample p = make_path(grid, std::move(inc), path.seed);
  p.driver_second_moment = path.driver_second_moment;
  for (const auto& c : path.right_tail) p.left_tail.push_back({-c.hi, -c.lo, c.increment});
  for (const auto& c : path.left_tail) p.right_tail.push_back({-c.hi, -c.lo, c.increment});
  return p;
}

void write_csv(const PathSample& path, std::ostream& os) {
  os << "s,L\n";
  char buf[64];
  for (std::size_t k = 0; k < path.grid.node_count(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", path.grid.node(k), path.values[k]);
    os << buf;
  }
}

}  // namespace flevy::levy
