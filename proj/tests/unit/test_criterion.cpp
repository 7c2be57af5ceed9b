#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "criterion/fv_criterion.hpp"
#include "test_models.hpp"

using namespace flevy;
using namespace flevy::criterion;
using flevy::levy::LevyModel;
using flevy::levy::TruncatedStable;

TEST_CASE("fv_criterion examples") {
  auto bm = LevyModel::make(1.0, 0.0, flevy::levy::CompoundPoisson{{{1.0, 3.0}}}, true);
  CHECK(fv_criterion(bm, 0.25).verdict == Verdict::InfiniteVariation);

  auto ts1 = LevyModel::make(0.0, 0.0, TruncatedStable{1.0, 1.0, true}, true);
  auto r = fv_criterion(ts1, 0.25);
  CHECK(r.moment_value == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(r.verdict == Verdict::FiniteVariation);
  CHECK(r.hurst == 0.75);

  auto ts14 = LevyModel::make(0.0, 0.0, TruncatedStable{1.4, 1.0, true}, true);
  auto r2 = fv_criterion(ts14, 0.25);
  CHECK(std::isinf(r2.moment_value));
  CHECK(r2.verdict == Verdict::InfiniteVariation);

  CHECK_THROWS_AS(fv_criterion(ts1, 0.5), Error);
  CHECK_THROWS_AS(fv_criterion(ts1, 0.0), Error);
  CHECK_THROWS_AS(fv_criterion(ts1, -0.1), Error);
}

TEST_CASE("stable_threshold") {
  CHECK(stable_threshold(0.25) == doctest::Approx(4.0 / 3.0));
  CHECK(stable_threshold(0.4) == doctest::Approx(5.0 / 3.0));
  CHECK(stable_threshold(1e-12) == doctest::Approx(1.0));
  CHECK_THROWS_AS(stable_threshold(0.6), Error);
}

TEST_CASE("phase boundary on a 20 x 20 lattice, boundary included") {
  int agree = 0, total = 0;
  for (int j = 0; j < 20; ++j) {
    const double d = (j + 1) / 42.0;
    const double star = stable_threshold(d);
    for (int i = 0; i < 20; ++i) {
      const double alpha = i == 19 ? star : 0.1 * (i + 1);
      auto m = LevyModel::make(0.0, 0.0, TruncatedStable{alpha, 1.0, true}, true);
      const bool fv = fv_criterion(m, d).verdict == Verdict::FiniteVariation;
      agree += fv == (alpha < star);
      ++total;
    }
  }
  CHECK(agree == total);
}

TEST_CASE("property: finite variation is monotone in d") {
  testing::ModelGenerator gen(31);
  for (int i = 0; i < 200; ++i) {
    const auto m = gen.model();
    bool seen_fv = false;
    for (double d = 0.01; d < 0.5; d += 0.01) {
      const bool fv = fv_criterion(m, d).verdict == Verdict::FiniteVariation;
      if (seen_fv) CHECK(fv);
      seen_fv = seen_fv || fv;
    }
  }
}

TEST_CASE("property: pure compound Poisson drivers are always of finite variation") {
  testing::ModelGenerator gen(37);
  for (int i = 0; i < 100; ++i) {
    flevy::levy::CompoundPoisson cp;
    for (int k = 0; k < 3; ++k) cp.atoms.push_back({gen.uniform(-3.0, 3.0) + 1e-3, gen.uniform(0.0, 4.0)});
    auto m = LevyModel::make(0.0, gen.uniform(-1, 1), cp, gen.pick(2) == 0);
    for (double d : {0.01, 0.2, 0.49}) CHECK(fv_criterion(m, d).verdict == Verdict::FiniteVariation);
  }
}

TEST_CASE("report JSON") {
  auto ts = LevyModel::make(0.0, 0.0, TruncatedStable{1.9, 1.0, true}, true);
  const auto j = to_json(fv_criterion(ts, 0.25));
  CHECK(j["verdict"] == "InfiniteVariation");
  CHECK(j["moment_value"] == "inf");
  CHECK(j["equivalent_statements"]["semimartingale"] == false);
}
