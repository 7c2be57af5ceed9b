#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "core/error.hpp"
#include "core/stats.hpp"
#include "levy/increments.hpp"
#include "levy/levy_model.hpp"
#include "test_models.hpp"

using namespace flevy;
using namespace flevy::levy;

TEST_CASE("make_model examples") {
  auto bm = testing::brownian();
  CHECK(bm.mean() == 0.0);
  CHECK(bm.variance() == 1.0);

  auto cpp = testing::symmetric_cpp();
  CHECK(cpp.mean() == 0.0);
  CHECK(cpp.gamma() == 0.0);
  CHECK(cpp.is_symmetric());

  auto ts = LevyModel::make(0.0, 0.0, TruncatedStable{1.0, 1.0, true}, true);
  CHECK(ts.variance() == doctest::Approx(2.0).epsilon(1e-14));

  CHECK_THROWS_AS(LevyModel::make(-1.0, 0.0, NoJumps{}, true), Error);
  CHECK_THROWS_AS(LevyModel::make(0.0, 0.0, CompoundPoisson{{{1.0, -0.5}}}, true), Error);
  CHECK_THROWS_AS(LevyModel::make(0.0, 0.0, TruncatedStable{2.0, 1.0, true}, true), Error);
}

TEST_CASE("drift conversion between gamma and the mean") {
  // Atom at 2 (beyond the cut-off) and at 0.5 (inside): x(1 - beta(x)) is x and x^2.
  auto m = LevyModel::make(0.0, 0.3, CompoundPoisson{{{2.0, 1.5}, {0.5, 2.0}}}, false);
  CHECK(m.mean() == doctest::Approx(0.3 + 1.5 * 2.0 + 2.0 * 0.25));
  auto c = LevyModel::make(0.0, 0.3, CompoundPoisson{{{2.0, 1.5}, {0.5, 2.0}}}, true);
  CHECK(c.mean() == 0.0);
  CHECK(c.gamma() == doctest::Approx(-3.5));
  auto one_sided = LevyModel::make(0.0, 0.0, TruncatedStable{1.5, 2.0, false}, false);
  CHECK(one_sided.mean() == doctest::Approx(2.0 / 0.5));
}

TEST_CASE("tail_mass examples") {
  auto ts = LevyModel::make(0.0, 0.0, TruncatedStable{1.0, 1.0, true}, true);
  CHECK(tail_mass(ts, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(tail_mass(ts, 2.0) == 0.0);
  CHECK(tail_mass(testing::symmetric_cpp(), 1.0) == 0.5);
  CHECK_THROWS_AS(tail_mass(ts, 0.0), Error);
}

TEST_CASE("abs_moment examples") {
  auto ts1 = LevyModel::make(0.0, 0.0, TruncatedStable{1.0, 1.0, true}, true);
  CHECK(abs_moment(ts1, 4.0 / 3.0, 0.0, 1.0) == doctest::Approx(6.0).epsilon(1e-13));
  auto ts15 = LevyModel::make(0.0, 0.0, TruncatedStable{1.5, 1.0, true}, true);
  CHECK(std::isinf(abs_moment(ts15, 4.0 / 3.0, 0.0, 1.0)));
  for (double lam : {0.1, 2.0, 7.5}) {
    auto m = LevyModel::make(0.0, 0.0, CompoundPoisson{{{1.0, lam}}}, false);
    for (double p : {0.3, 1.0, 4.0}) CHECK(abs_moment(m, p, 0.0, 1.0) == doctest::Approx(lam));
  }
}

TEST_CASE("closed forms agree with quadrature of the density") {
  // Independent oracle: midpoint sums of c x^(p-1-alpha) on a log-spaced mesh.
  auto oracle = [](double alpha, double c, double p, double lo, double hi) {
    const int n = 200000;
    const double a = std::log(lo), b = std::log(hi);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double u = a + (b - a) * (i + 0.5) / n;
      const double x = std::exp(u);
      s += c * std::pow(x, p - alpha) * (b - a) / n;
    }
    return s;
  };
  for (double alpha : {0.4, 1.0, 1.3, 1.9})
    for (double p : {0.5, 1.0, 2.0, 3.0}) {
      JumpFamily f = TruncatedStable{alpha, 1.7, false};
      CHECK(positive_moment(f, p, 0.01, 0.8) ==
            doctest::Approx(oracle(alpha, 1.7, p, 0.01, 0.8)).epsilon(1e-7));
    }
}

TEST_CASE("clipped square and excess match their tail integrals") {
  testing::ModelGenerator gen(11);
  for (int i = 0; i < 40; ++i) {
    const JumpFamily f = gen.family();
    for (double eps : {0.05, 0.3, 1.0, 2.5}) {
      // 2 int_0^eps x T(x) dx and int_eps^inf T(x) dx by midpoint rule on a log mesh
      const int n = 100000;
      double a = 0.0;
      const double lo = std::log(1e-60), hi = std::log(eps);
      for (int k = 0; k < n; ++k) {
        const double x = std::exp(lo + (hi - lo) * (k + 0.5) / n);
        a += 2.0 * x * positive_tail(f, x) * x * (hi - lo) / n;
      }
      double b = 0.0;
      const double top = 10.0;
      for (int k = 0; k < n; ++k) {
        const double x = eps + (top - eps) * (k + 0.5) / n;
        if (x > eps) b += positive_tail(f, x) * (top - eps) / n;
      }
      CHECK(positive_clipped_square(f, eps) == doctest::Approx(a).epsilon(2e-3));
      CHECK(positive_excess(f, eps) == doctest::Approx(b).epsilon(2e-3));
    }
  }
}

TEST_CASE("property: tail_mass nonincreasing and vanishing, abs_moment nonincreasing in p") {
  testing::ModelGenerator gen(3);
  for (int i = 0; i < 60; ++i) {
    const auto m = gen.model();
    double prev = kInf;
    for (double x = 1e-3; x < 20.0; x *= 1.1) {
      const double t = tail_mass(m, x);
      CHECK(t <= prev);
      CHECK(t >= 0.0);
      prev = t;
    }
    CHECK(tail_mass(m, 10.0 * testing::ModelGenerator::kMaxSize) == 0.0);
    double pm = kInf;
    for (double p = 0.2; p < 4.0; p += 0.1) {
      const double v = abs_moment(m, p, 0.0, 1.0);
      CHECK(v <= pm);
      pm = v;
    }
  }
}

TEST_CASE("tail_mass is right-continuous at atoms") {
  auto m = LevyModel::make(0.0, 0.0, CompoundPoisson{{{0.7, 2.0}}}, true);
  CHECK(tail_mass(m, 0.7) == 2.0);
  CHECK(tail_mass(m, std::nextafter(0.7, 1.0)) == 0.0);
}

TEST_CASE("symmetry and symmetrization") {
  auto f = JumpFamily(Mixture{{CompoundPoisson{{{0.5, 1.0}, {-0.5, 1.0}}}, TruncatedStable{0.7, 1.0, true}}});
  CHECK(is_symmetric(f));
  JumpFamily g = CompoundPoisson{{{0.5, 1.0}, {-0.5, 0.4}}};
  CHECK_FALSE(is_symmetric(g));
  auto s = symmetrized(g);
  CHECK(is_symmetric(s));
  for (double x : {0.1, 0.5, 0.6})
    CHECK(positive_tail(s, x) == doctest::Approx(positive_tail(g, x) + negative_tail(g, x)));
  CHECK(is_symmetric(symmetrized(TruncatedStable{1.2, 1.0, false})));
}

TEST_CASE("model JSON round trip") {
  testing::ModelGenerator gen(5);
  for (int i = 0; i < 30; ++i) {
    const auto m = gen.model();
    const auto j = to_json(m);
    const auto back = model_from_json(nlohmann::json::parse(j.dump()));
    CHECK(to_json(back).dump() == j.dump());
    CHECK(back.mean() == m.mean());
    CHECK(back.variance() == m.variance());
  }
  CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"jumps":[{"type":"cgmy"}]})")), Error);
  CHECK_THROWS_AS(model_from_json(nlohmann::json::parse(R"({"sigma":"x"})")), Error);
}

TEST_CASE("grid basics") {
  IncrementGrid g(-1.0, 2.0, 0.25);
  CHECK(g.cell_count() == 12);
  CHECK(g.zero_index() == 4);
  CHECK(g.node(4) == 0.0);
  CHECK(g.index_of(0.5) == std::optional<std::size_t>(6));
  CHECK_FALSE(g.index_of(0.3).has_value());
  CHECK_THROWS_AS(IncrementGrid(-1.0, 1.1, 0.25), Error);
  CHECK_THROWS_AS(IncrementGrid(0.5, 1.0, 0.25), Error);
}

TEST_CASE("Brownian increments: mean and variance within 5 standard errors") {
  const auto m = testing::brownian();
  const double h = 0.01;
  IncrementGrid g(-500.0, 500.0, h);  // 1e5 cells
  const auto p = sample_increments(m, g, 42);
  const auto est = stats::mean_and_stderr(p.increments);
  CHECK(std::abs(est.mean) <= 5.0 * est.std_error);
  const double var = stats::sample_variance(p.increments);
  // Var of the sample variance for Gaussian data: 2 sigma^4 / (n - 1)
  const double se = std::sqrt(2.0 / (p.increments.size() - 1.0)) * h;
  CHECK(std::abs(var - h) <= 5.0 * se);
}

TEST_CASE("unit-time increments match the closed-form mean and variance") {
  std::vector<LevyModel> models = {
      testing::symmetric_cpp(),
      LevyModel::make(0.0, 0.0, TruncatedStable{1.0, 1.0, true}, true),
      LevyModel::make(0.0, 0.0, TruncatedStable{1.5, 0.5, false}, true),
      LevyModel::make(0.2, 0.0, CompoundPoisson{{{0.3, 2.0}, {-1.2, 0.4}}}, true),
  };
  for (const auto& m : models) {
    IncrementGrid g(0.0, 100000.0, 1.0);
    const auto p = sample_increments(m, g, 7);
    const auto est = stats::mean_and_stderr(p.increments);
    CHECK(std::abs(est.mean) <= 5.0 * est.std_error);
    // Sample variance standard error from the fourth central moment.
    const double var = stats::sample_variance(p.increments);
    double m4 = 0.0;
    for (double x : p.increments) m4 += std::pow(x - est.mean, 4);
    m4 /= p.increments.size();
    const double se = std::sqrt((m4 - var * var) / p.increments.size());
    CHECK(std::abs(var - m.variance()) <= 5.0 * se);
  }
}

TEST_CASE("non-centered Poisson subordinator has unit steps") {
  auto m = LevyModel::make(0.0, 0.0, CompoundPoisson{{{1.0, 2.0}}}, false);
  CHECK(m.mean() == 2.0);
  IncrementGrid g(-1.0, 5.0, 1.0 / 64);
  const auto p = sample_increments(m, g, 9);
  for (std::size_t k = 0; k + 1 < p.values.size(); ++k) {
    CHECK(p.values[k + 1] >= p.values[k]);
    CHECK(p.increments[k] == std::round(p.increments[k]));
  }
  CHECK(p.values[g.zero_index()] == 0.0);
}

TEST_CASE("sampling is deterministic") {
  testing::ModelGenerator gen(17);
  for (int i = 0; i < 10; ++i) {
    const auto m = gen.model();
    IncrementGrid g(-2.0, 3.0, 1.0 / 32);
    TailSpec tails{50.0, 40.0, 1.0 / 16};
    const auto a = sample_increments(m, g, 1234, tails);
    const auto b = sample_increments(m, g, 1234, tails);
    CHECK(a.increments == b.increments);
    CHECK(a.values == b.values);
    REQUIRE(a.left_tail.size() == b.left_tail.size());
    for (std::size_t k = 0; k < a.left_tail.size(); ++k)
      CHECK(a.left_tail[k].increment == b.left_tail[k].increment);
    const auto c = sample_increments(m, g, 1235, tails);
    if (has_jumps(m.jumps()) || m.sigma() > 0) CHECK(c.increments != a.increments);
  }
}

TEST_CASE("values are prefix sums anchored at zero") {
  testing::ModelGenerator gen(23);
  for (int i = 0; i < 20; ++i) {
    const auto m = gen.model();
    IncrementGrid g(-1.5, 1.0, 1.0 / 16);
    const auto p = sample_increments(m, g, i);
    CHECK(p.values[g.zero_index()] == 0.0);
    for (std::size_t k = 0; k < g.cell_count(); ++k)
      CHECK(p.values[k + 1] - p.values[k] == doctest::Approx(p.increments[k]).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("tail cells cover the requested radius geometrically") {
  auto cells = geometric_cells(2.0, 1000.0, 0.0625);
  CHECK(cells.front().first == 2.0);
  CHECK(cells.back().second == 1000.0);
  for (std::size_t i = 1; i < cells.size(); ++i) CHECK(cells[i].first == cells[i - 1].second);
  const auto p = sample_increments(testing::brownian(), IncrementGrid(-2.0, 1.0, 0.5), 3, {1000.0, 0.0});
  CHECK(p.left_extent() == 1000.0);
  CHECK(p.left_tail.front().hi == -2.0);
}

TEST_CASE("splice: zero negative source gives zero on the left") {
  IncrementGrid one(0.0, 1.0, 0.125);
  auto pos = make_path(one, std::vector<double>(8, 1.0));
  auto neg = make_path(one, std::vector<double>(8, 0.0));
  auto s = splice_two_sided(pos, neg);
  CHECK(s.grid.r_min() == -1.0);
  for (std::size_t k = 0; k <= s.grid.zero_index(); ++k) CHECK(s.values[k] == 0.0);
  CHECK(s.values.back() == 8.0);
}

TEST_CASE("splice: a single jump of L2 shows up with the left-limit convention") {
  IncrementGrid one(0.0, 1.0, 0.125);
  std::vector<double> jump(8, 0.0);
  jump[2] = 1.0;  // L2 jumps at some u in (0.25, 0.375]
  auto s = splice_two_sided(make_path(one, std::vector<double>(8, 0.0)), make_path(one, jump));
  for (std::size_t k = 0; k < s.grid.node_count(); ++k) {
    const double t = s.grid.node(k);
    if (t <= -0.375 + 1e-12)
      CHECK(s.values[k] == -1.0);
    else
      CHECK(s.values[k] == 0.0);
  }
}

TEST_CASE("splice: increments telescope and stay independent per side") {
  const auto m = testing::symmetric_cpp();
  IncrementGrid one(0.0, 4.0, 1.0 / 8);
  auto pos = sample_increments(m, one, 1);
  auto neg = sample_increments(m, one, 2);
  auto s = splice_two_sided(pos, neg);
  const std::size_t z = s.grid.zero_index();
  for (std::size_t k = 0; k < 32; ++k) {
    CHECK(s.increments[z + k] == pos.increments[k]);
    CHECK(s.increments[z - 1 - k] == neg.increments[k]);
  }
  double sum = 0.0;
  for (double x : s.increments) sum += x;
  CHECK(s.values.back() - s.values.front() == doctest::Approx(sum));
  CHECK_THROWS_AS(splice_two_sided(pos, sample_increments(m, IncrementGrid(0.0, 4.0, 0.25), 2)), Error);
}

TEST_CASE("time_reverse moves each increment to the mirrored node") {
  IncrementGrid g(-1.0, 0.5, 0.25);
  std::vector<double> inc = {1, 2, 3, 4, 5, 6};
  auto p = make_path(g, inc);
  p.left_tail.push_back({-3.0, -1.0, 7.0});
  auto r = time_reverse(p);
  CHECK(r.grid.r_min() == -0.5);
  CHECK(r.grid.t_max() == 1.25);
  CHECK(r.increments.front() == 0.0);
  for (std::size_t k = 0; k < g.cell_count(); ++k) {
    auto kk = r.grid.index_of(-g.node(k));
    REQUIRE(kk.has_value());
    CHECK(r.increments[*kk] == inc[k]);
  }
  REQUIRE(r.right_tail.size() == 1);
  CHECK(r.right_tail[0].lo == 1.0);
  CHECK(r.right_tail[0].hi == 3.0);
}

TEST_CASE("CSV export") {
  auto p = make_path(IncrementGrid(-0.5, 0.5, 0.5), {0.25, 1.0 / 3.0});
  std::ostringstream os;
  write_csv(p, os);
  CHECK(os.str() == "s,L\n-0.5,-0.25\n0,0\n0.5,0.33333333333333331\n");
}
