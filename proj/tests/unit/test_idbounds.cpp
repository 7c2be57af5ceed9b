#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "core/error.hpp"
#include "core/quadrature.hpp"
#include "idbounds/bounds.hpp"
#include "idbounds/dominance.hpp"
#include "test_models.hpp"

using namespace flevy;
using namespace flevy::idbounds;
using flevy::levy::LevyModel;

namespace {

LevyModel stable(double alpha, bool sym = true) {
  return LevyModel::make(0.0, 0.0, levy::TruncatedStable{alpha, 1.0, sym}, true);
}

LevyModel single_atom(double rate) {
  return LevyModel::make(0.0, 0.0, levy::CompoundPoisson{{{1.0, rate}}}, true);
}

LevyModel zero_model() { return LevyModel::make(0.0, 0.0, levy::NoJumps{}, true); }

// Lebesgue measure of {s in (0, R) : ((t+s)^d - s^d)/t >= u}, by bisection on the
// decreasing map.
double level_set_length(double d, double t, double R, double u) {
  auto k = [&](double s) { return (std::pow(t + s, d) - std::pow(s, d)) / t; };
  if (k(0.0) < u) return 0.0;
  if (k(R) >= u) return R;
  double lo = 0.0, hi = R;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (k(mid) >= u ? lo : hi) = mid;
  }
  return lo;
}

// (4/eps) int_0^eps x T(x) dx + 2 int_eps^inf T(x) dx + eps by Gauss-Kronrod on the tail.
// Pieces split at the jump sizes in kinks.
double gk_split(const std::function<double(double)>& f, double a, double b, std::vector<double> kinks) {
  double sum = 0.0, lo = a;
  kinks.push_back(b);
  for (double k : kinks) {
    if (k <= lo || k > b) continue;
    sum += quad::integrate_gauss_kronrod(f, lo, k, 1e-10).value;
    lo = k;
  }
  return sum;
}

double mean_abs_by_quadrature(const LevyModel& m, double eps, double support, std::vector<double> kinks = {}) {
  auto T = [&](double x) { return x > 0 ? levy::tail_mass(m, x) : 0.0; };
  const double near = gk_split([&](double x) { return x * T(x); }, 0.0, eps, kinks);
  const double far = eps < support ? gk_split(T, eps, support, kinks) : 0.0;
  return eps + 4.0 / eps * near + 2.0 * far;
}

// int_a^inf f by Gauss-Kronrod after u = a z^-m, which flattens decay like u^(-1-1/m).
double gk_to_infinity(const std::function<double(double)>& f, double a, double m) {
  auto g = [&](double z) { return z > 0 ? f(a * std::pow(z, -m)) * a * m * std::pow(z, -m - 1) : 0.0; };
  return quad::integrate_gauss_kronrod(g, 0.0, 1.0, 1e-10).value;
}

}  // namespace

TEST_CASE("mean_abs_bound worked values") {
  CHECK(mean_abs_bound(testing::symmetric_cpp(), 2.0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(mean_abs_bound(stable(1.0), 1.0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("mean_abs_bound: closed forms agree with quadrature of the tail") {
  const LevyModel cpp = LevyModel::make(
      0.0, 0.0, levy::CompoundPoisson{{{0.5, 1.0}, {-0.5, 1.0}, {2.0, 0.3}, {-2.0, 0.3}}}, true);
  for (double eps : {0.1, 0.7, 1.0, 3.0}) {
    CHECK(mean_abs_bound(cpp, eps) == doctest::Approx(mean_abs_by_quadrature(cpp, eps, 2.0, {0.5, 2.0})).epsilon(1e-8));
    const auto st = stable(0.8);
    CHECK(mean_abs_bound(st, eps) == doctest::Approx(mean_abs_by_quadrature(st, eps, 1.0)).epsilon(1e-7));
  }
}

TEST_CASE("mean_abs_bound: large eps tends to eps, preconditions") {
  const auto m = testing::symmetric_cpp();
  for (double eps : {1e2, 1e4, 1e6}) CHECK(mean_abs_bound(m, eps) / eps == doctest::Approx(1.0).epsilon(2.0 / (eps * eps) + 1e-15));
  CHECK_THROWS_AS(mean_abs_bound(testing::brownian(), 1.0), Error);
  CHECK_THROWS_AS(mean_abs_bound(stable(1.0, false), 1.0), Error);
  CHECK_THROWS_AS(mean_abs_bound(m, 0.0), Error);
  try {
    mean_abs_bound(single_atom(1.0), 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolation);
  }
}

TEST_CASE("nu_rt_tail: single atom matches the level-set oracle") {
  const double lambda = 1.7;
  const auto m = single_atom(lambda);
  for (double d : {0.1, 0.25, 0.4})
    for (double t : {0.25, 1.0, 3.0})
      for (double r : {-0.5, -2.0})
        for (double u : {0.05, 0.3, 0.9, 1.5, 4.0}) {
          const IntegralLevyMeasure ilm{m, r, t, d};
          CHECK(nu_rt_tail(ilm, u) ==
                doctest::Approx(lambda * level_set_length(d, t, -r, u)).epsilon(1e-6).scale(1e-12));
        }
}

TEST_CASE("nu_rt_tail: empty constraint, monotone, dominated by the majorant") {
  const auto m = LevyModel::make(0.0, 0.0, levy::Mixture{{testing::symmetric_cpp().jumps(), stable(0.9).jumps()}}, true);
  const double d = 0.25, t = 0.5, r = -1.0;
  const IntegralLevyMeasure ilm{m, r, t, d};
  // largest jump 1 times sup_s of the factor t^(d-1)
  CHECK(nu_rt_tail(ilm, 1.0001 * std::pow(t, d - 1.0)) == 0.0);
  double prev = levy::kInf;
  for (double u = 0.01; u < 3.0; u *= 1.3) {
    const double v = nu_rt_tail(ilm, u);
    CHECK(v <= prev * (1 + 1e-9));
    CHECK(v >= 0.0);
    CHECK(v <= majorant_tail(m, d, r, u) * (1 + 1e-9));
    prev = v;
  }
  CHECK_THROWS_AS(nu_rt_tail(ilm, 0.0), Error);
  CHECK_THROWS_AS(nu_rt_tail(ilm, -1.0), Error);
}

TEST_CASE("majorant tail: quadrature in s against the closed form") {
  for (const auto& m : {testing::symmetric_cpp(), stable(1.0), stable(0.5)})
    for (double d : {0.1, 0.25, 0.4})
      for (double u : {0.02, 0.3, 1.0, 5.0}) {
        if (levy::abs_moment(m, 1 / (1 - d), 0, 1) == levy::kInf) continue;
        CHECK(majorant_tail(m, d, -0.7, u) ==
              doctest::Approx(majorant_tail_closed(m, d, -0.7, u)).epsilon(1e-6).scale(1e-12));
      }
}

TEST_CASE("C2 and C3: zero measure gives zero") {
  for (auto b : {bound_c2(zero_model(), 0.25, -1.0, 1.0), bound_c3(zero_model(), 0.25, -1.0, 1.0),
                 bound_c2_at(zero_model(), 0.25, -1.0, 1.0, 0.5)}) {
    CHECK(b.lhs == 0.0);
    CHECK(b.rhs == 0.0);
    CHECK(b.holds());
  }
}

TEST_CASE("C2 and C3: worked dominance cases") {
  const auto b2 = bound_c2(testing::symmetric_cpp(), 0.25, -1.0, 1.0);
  const auto b3 = bound_c3(testing::symmetric_cpp(), 0.25, -1.0, 1.0);
  CHECK(b2.lhs > 0.0);
  CHECK(b2.holds());
  CHECK(b3.holds());
  CHECK_FALSE(b2.capped);
  const auto s2 = bound_c2(stable(1.0), 0.25, -0.5, 2.0);
  const auto s3 = bound_c3(stable(1.0), 0.25, -0.5, 2.0);
  CHECK(s2.lhs > 0.0);
  CHECK(s2.holds());
  CHECK(s3.holds());
}

TEST_CASE("C2 and C3 lefthand sides equal nested quadrature of the majorant tail") {
  for (const auto& m : {testing::symmetric_cpp(), stable(1.0)})
    for (double a : {0.5, 2.0}) {
      const double d = 0.25, r = -0.8;
      auto tail = [&](double u) { return u > 0 ? majorant_tail_closed(m, d, r, u) : 0.0; };
      const double l2 = quad::integrate_gauss_kronrod([&](double u) { return u * tail(u); }, 0.0, a, 1e-9).value;
      const double l3 = gk_to_infinity(tail, a, 2.0 / (1 / (1 - d) - 1));
      CHECK(bound_c2(m, d, r, a).lhs == doctest::Approx(l2).epsilon(1e-5));
      CHECK(bound_c3(m, d, r, a).lhs == doctest::Approx(l3).epsilon(1e-5));
    }
}

TEST_CASE("exact-t lefthand sides equal nested quadrature of nu_rt_tail") {
  const auto m = LevyModel::make(0.0, 0.0, levy::CompoundPoisson{{{1.0, 0.5}, {-1.0, 0.5}, {0.4, 2.0}}}, true);
  const double d = 0.3, r = -1.5, t = 0.5, a = 0.7;
  const IntegralLevyMeasure ilm{m, r, t, d};
  auto tail = [&](double u) { return u > 0 ? nu_rt_tail(ilm, u) : 0.0; };
  // the tail vanishes beyond the largest atom times t^(d-1)
  const double top = std::pow(t, d - 1.0);
  const double l2 = quad::integrate_gauss_kronrod([&](double u) { return u * tail(u); }, 0.0, a, 1e-8).value;
  const double l3 = quad::integrate_gauss_kronrod(tail, a, top, 1e-8).value;
  CHECK(bound_c2_at(m, d, r, a, t).lhs == doctest::Approx(l2).epsilon(1e-5));
  CHECK(bound_c3_at(m, d, r, a, t).lhs == doctest::Approx(l3).epsilon(1e-5));
}

TEST_CASE("property: exact lhs <= majorant lhs <= rhs on random models") {
  testing::ModelGenerator gen(23);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    auto fam = gen.family();
    const auto m = LevyModel::make(0.0, 0.0, fam, true);
    const double d = gen.uniform(0.05, 0.45);
    if (levy::abs_moment(m, 1 / (1 - d), 0, 1) == levy::kInf || !levy::has_jumps(m.jumps())) continue;
    const double r = -gen.uniform(0.1, 3.0), a = gen.uniform(0.1, 3.0), t = gen.uniform(0.1, 2.0);
    const auto b2 = bound_c2(m, d, r, a), b3 = bound_c3(m, d, r, a);
    const auto e2 = bound_c2_at(m, d, r, a, t), e3 = bound_c3_at(m, d, r, a, t);
    CHECK(b2.holds());
    CHECK(b3.holds());
    CHECK(e2.lhs <= b2.lhs * (1 + kCompareRelTol));
    CHECK(e3.lhs <= b3.lhs * (1 + kCompareRelTol));
    ++checked;
  }
  CHECK(checked >= 15);
}

TEST_CASE("fd_tv_bound: closed form, second rule, scaling, degenerate driver") {
  // int_0^inf [u^(d-1) - (b+u)^(d-1)] u^(1/2) du = b^(d+1/2) Gamma(3/2) Gamma(-1/2-d) / -Gamma(1-d)
  for (double d : {0.1, 0.25, 0.4})
    for (double b : {0.5, 1.0, 3.0}) {
      const double closed = -std::pow(b, d + 0.5) * std::tgamma(1.5) * std::tgamma(-0.5 - d) / std::tgamma(1.0 - d);
      CHECK(fd_kernel_integral(d, b) == doctest::Approx(closed).epsilon(1e-8));
      auto g = [&](double u) {
        if (u <= 0) return 0.0;
        const double diff = u < b ? std::pow(u, d - 1) - std::pow(b + u, d - 1)
                                  : std::pow(u, d - 1) * -std::expm1((d - 1) * std::log1p(b / u));
        return diff * std::sqrt(u);
      };
      // u = b w^2 on [0, b] removes the u^(d-1/2) endpoint behavior
      auto h = [&](double w) { return g(b * w * w) * 2 * b * w; };
      const double gk = quad::integrate_gauss_kronrod(h, 0.0, 1.0, 1e-10).value +
                        gk_to_infinity(g, b, 2.0 / (0.5 - d));
      CHECK(fd_kernel_integral(d, b) == doctest::Approx(gk).epsilon(1e-6));
    }
  CHECK(fd_kernel_integral(0.25, 1.0) == doctest::Approx(3.496076739).epsilon(1e-9));
  CHECK(fd_tv_bound(zero_model(), 0.25, 1.0) == 0.0);
  const auto v1 = LevyModel::make(1.0, 0.0, levy::NoJumps{}, true);
  const auto v2 = LevyModel::make(2.0, 0.0, levy::NoJumps{}, true);
  CHECK(fd_tv_bound(v2, 0.25, 1.0) == doctest::Approx(std::sqrt(2.0) * fd_tv_bound(v1, 0.25, 1.0)).epsilon(1e-14));
  CHECK(std::isfinite(fd_tv_bound(v2, 0.25, 1.0)));
  CHECK(fd_tv_bound(v2, 0.25, 1.0) > 0.0);
  CHECK_THROWS_AS(fd_tv_bound(v1, 0.5, 1.0), Error);
  CHECK_THROWS_AS(fd_tv_bound(v1, 0.25, 0.0), Error);
}

TEST_CASE("vanishing-tail quantities shrink as r goes to zero") {
  for (const auto& m : {testing::symmetric_cpp(), stable(1.0)}) {
    double pm = levy::kInf, pe = levy::kInf;
    for (int k = 8; k <= 200; ++k) {
      const double r = -std::ldexp(1.0, -k);
      const double a = vanishing_tail_mass(m, 0.25, r), b = vanishing_tail_mean(m, 0.25, r, 1.0);
      CHECK(a <= pm);
      CHECK(b <= pe * (1 + 1e-12));
      pm = a;
      pe = b;
    }
    CHECK(pm < 1e-10);
    CHECK(pe < 1e-10);
  }
}

TEST_CASE("dominance suite: small lattice passes and skips what does not apply") {
  DominanceConfig c;
  c.d = {0.25};
  c.r = {-1.0};
  c.a = {1.0};
  c.t = {0.5};
  c.mc_draws = 2000;
  c.fd_paths = 20;
  c.fd_depth = 8;
  c.seed = 4;
  const auto rep = run_dominance(testing::symmetric_cpp(), c);
  CHECK(rep.all_pass());
  CHECK(rep.skipped == 0);
  CHECK(rep.checks.size() == 3 + 4 + 1 + 4);

  const auto bm = run_dominance(testing::brownian(), c);
  CHECK(bm.all_pass());
  CHECK(bm.skipped == 2);

  const auto j = to_json(c);
  CHECK(to_json(dominance_config_from_json(j)) == j);
  CHECK_THROWS_AS(dominance_config_from_json(nlohmann::json{{"eps", {-1.0}}}), Error);
  CHECK(format_table(rep).find("all checks pass") != std::string::npos);
}
