#include "idbounds/dominance.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "core/error.hpp"
#include "core/json_util.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"
#include "criterion/fv_criterion.hpp"
#include "idbounds/bounds.hpp"
#include "levy/increments.hpp"
#include "variation/estimators.hpp"

namespace flevy::idbounds {

namespace {

bool fv(const levy::LevyModel& m, double d) {
  return criterion::fv_criterion(m, d).verdict == criterion::Verdict::FiniteVariation;
}

DominanceCheck skipped(std::string name, nlohmann::json params, std::string why) {
  DominanceCheck c;
  c.name = std::move(name);
  c.params = std::move(params);
  c.skipped = true;
  c.pass = true;
  c.note = std::move(why);
  return c;
}

void mean_abs_checks(const levy::LevyModel& m, const DominanceConfig& c, std::vector<DominanceCheck>& out) {
  if (m.sigma() != 0.0 || !m.is_symmetric()) {
    out.push_back(skipped("mean_abs", {}, "needs a symmetric driver without Gaussian part"));
    return;
  }
  Rng rng = make_rng(child_seed(c.seed, Stream::Experiment, 1));
  const auto law = levy::make_cell_law(m, 1.0);
  std::vector<double> x(c.mc_draws);
  levy::fill_increments(law, 1.0, x, rng);
  for (double& v : x) v = std::abs(v);
  const auto est = stats::mean_and_stderr(x);
  for (double eps : c.eps) {
    DominanceCheck k;
    k.name = "mean_abs";
    k.params = {{"eps", eps}, {"draws", c.mc_draws}};
    k.lhs = est.mean;
    k.rhs = mean_abs_bound(m, eps);
    k.slack = c.slack_se * est.std_error;
    k.pass = k.lhs <= k.rhs + k.slack;
    k.note = "Monte Carlo E|L(1)|";
    out.push_back(std::move(k));
  }
}

void c23_checks(const levy::LevyModel& m, const DominanceConfig& c, std::vector<DominanceCheck>& out) {
  struct Item {
    double d, r, a;
  };
  std::vector<Item> items;
  for (double d : c.d) {
    if (!fv(m, d)) {
      out.push_back(skipped("c2_c3", {{"d", d}}, "criterion (e) fails at this d"));
      continue;
    }
    for (double r : c.r)
      for (double a : c.a) items.push_back({d, r, a});
  }
  const std::size_t per = 2 + 2 * c.t.size();
  std::vector<DominanceCheck> slots(items.size() * per);
  parallel_for(items.size(), [&](std::size_t i) {
    const auto [d, r, a] = items[i];
    const nlohmann::json p = {{"d", d}, {"r", r}, {"a", a}};
    DominanceCheck* s = &slots[i * per];
    const BoundValue b2 = bound_c2(m, d, r, a), b3 = bound_c3(m, d, r, a);
    int j = 0;
    for (auto [name, b] : {std::pair{"c2", b2}, std::pair{"c3", b3}}) {
      DominanceCheck& k = s[j++];
      k.name = name;
      k.params = p;
      k.lhs = b.lhs;
      k.rhs = b.rhs;
      k.pass = b.holds() && !b.capped;
      k.note = b.capped ? "quadrature hit its refinement cap" : "t-free majorant lhs";
    }
    for (double t : c.t) {
      nlohmann::json pt = p;
      pt["t"] = t;
      const BoundValue e2 = bound_c2_at(m, d, r, a, t), e3 = bound_c3_at(m, d, r, a, t);
      for (auto [name, e, major] : {std::tuple{"c2_at_t", e2, b2.lhs}, std::tuple{"c3_at_t", e3, b3.lhs}}) {
        DominanceCheck& k = s[j++];
        k.name = name;
        k.params = pt;
        k.lhs = e.lhs;
        k.rhs = major;
        k.pass = e.lhs <= major * (1.0 + kCompareRelTol) && !e.capped;
        k.note = e.capped ? "quadrature hit its refinement cap" : "exact tail against the majorant";
      }
    }
  });
  for (auto& k : slots) out.push_back(std::move(k));
}

void fd_checks(const levy::LevyModel& m, const DominanceConfig& c, std::vector<DominanceCheck>& out) {
  if (!c.fd_check) return;
  if (m.mean() != 0.0) {
    out.push_back(skipped("fd_tv", {}, "needs a driver with mean zero"));
    return;
  }
  if (m.second_moment() == 0.0) {
    out.push_back(skipped("fd_tv", {}, "degenerate driver"));
    return;
  }
  for (double d : c.d) {
    variation::TvExperiment e;
    e.kind = synth::KernelKind::TailPart;
    e.d = d;
    e.a = 0.0;
    e.b = c.fd_b;
    e.depth = c.fd_depth;
    e.tol = c.fd_tol;
    e.paths = c.fd_paths;
    e.seed = child_seed(c.seed, {static_cast<std::uint64_t>(Stream::Experiment), 2,
                                 static_cast<std::uint64_t>(std::llround(d * 1e6))});
    const auto res = variation::tv_monte_carlo(m, e);
    DominanceCheck k;
    k.name = "fd_tv";
    k.params = {{"d", d}, {"b", c.fd_b}, {"depth", c.fd_depth}, {"paths", c.fd_paths}};
    k.lhs = res.summary.mc_mean;
    k.rhs = fd_tv_bound(m, d, c.fd_b);
    k.slack = c.slack_se * res.summary.mc_stderr;
    k.pass = k.lhs <= k.rhs + k.slack;
    k.note = "Monte Carlo TV of F_d at the finest dyadic depth";
    out.push_back(std::move(k));
  }
}

void vanish_checks(const levy::LevyModel& m, const DominanceConfig& c, std::vector<DominanceCheck>& out) {
  for (double d : c.vanish_d) {
    if (!fv(m, d)) continue;
    for (int which = 0; which < 2; ++which) {
      std::vector<double> v;
      for (int k = 1; k <= c.vanish_kmax; ++k) {
        const double r = -std::ldexp(1.0, -k);
        v.push_back(which == 0 ? vanishing_tail_mass(m, d, r) : vanishing_tail_mean(m, d, r, c.vanish_eps));
      }
      bool monotone = true;
      for (int k = c.vanish_from; k < c.vanish_kmax; ++k)
        if (v[static_cast<std::size_t>(k)] > v[static_cast<std::size_t>(k - 1)] * (1.0 + 1e-12)) monotone = false;
      DominanceCheck k;
      k.name = which == 0 ? "vanish_mass" : "vanish_mean";
      k.params = {{"d", d}, {"k_from", c.vanish_from}, {"k_max", c.vanish_kmax}};
      if (which == 1) k.params["eps"] = c.vanish_eps;
      const double first = v[static_cast<std::size_t>(c.vanish_from - 1)];
      k.lhs = v.back();
      k.rhs = 1e-2 * first;
      k.pass = monotone && (first == 0.0 || k.lhs <= k.rhs);
      k.note = monotone ? "value at k_max against 1% of the value at k_from"
                        : "not monotone beyond k_from";
      out.push_back(std::move(k));
    }
  }
}

}  // namespace

DominanceReport run_dominance(const levy::LevyModel& m, const DominanceConfig& c) {
  require(c.vanish_from >= 1 && c.vanish_from < c.vanish_kmax && c.vanish_kmax <= 1000,
          ErrorCode::InvalidParameter, "bad vanishing-limit range");
  require(c.mc_draws >= 2, ErrorCode::InvalidParameter, "need at least two Monte Carlo draws");
  DominanceReport r;
  mean_abs_checks(m, c, r.checks);
  c23_checks(m, c, r.checks);
  fd_checks(m, c, r.checks);
  vanish_checks(m, c, r.checks);
  for (const auto& k : r.checks) {
    if (k.skipped) ++r.skipped;
    else if (!k.pass) ++r.failures;
  }
  return r;
}

nlohmann::json to_json(const DominanceConfig& c) {
  return {{"eps", c.eps},           {"d", c.d},
          {"r", c.r},               {"a", c.a},
          {"t", c.t},               {"mc_draws", c.mc_draws},
          {"slack_se", c.slack_se}, {"fd_check", c.fd_check},
          {"fd_b", c.fd_b},         {"fd_depth", c.fd_depth},
          {"fd_paths", c.fd_paths}, {"fd_tol", c.fd_tol},
          {"vanish_d", c.vanish_d},       {"vanish_kmax", c.vanish_kmax}, {"vanish_from", c.vanish_from},
          {"vanish_eps", c.vanish_eps},   {"seed", c.seed}};
}

DominanceConfig dominance_config_from_json(const nlohmann::json& j) {
  DominanceConfig c;
  try {
    c.eps = j.value("eps", c.eps);
    c.d = j.value("d", c.d);
    c.r = j.value("r", c.r);
    c.a = j.value("a", c.a);
    c.t = j.value("t", c.t);
    c.mc_draws = j.value("mc_draws", c.mc_draws);
    c.slack_se = j.value("slack_se", c.slack_se);
    c.fd_check = j.value("fd_check", c.fd_check);
    c.fd_b = j.value("fd_b", c.fd_b);
    c.fd_depth = j.value("fd_depth", c.fd_depth);
    c.fd_paths = j.value("fd_paths", c.fd_paths);
    c.fd_tol = j.value("fd_tol", c.fd_tol);
    c.vanish_d = j.value("vanish_d", c.vanish_d);
    c.vanish_kmax = j.value("vanish_kmax", c.vanish_kmax);
    c.vanish_from = j.value("vanish_from", c.vanish_from);
    c.vanish_eps = j.value("vanish_eps", c.vanish_eps);
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bounds config: ") + e.what());
  }
  for (double e : c.eps) require(e > 0.0, ErrorCode::InvalidParameter, "eps must be positive");
  for (double r : c.r) require(r < 0.0, ErrorCode::InvalidParameter, "r must be negative");
  for (double a : c.a) require(a > 0.0, ErrorCode::InvalidParameter, "a must be positive");
  for (double t : c.t) require(t > 0.0, ErrorCode::InvalidParameter, "t must be positive");
  for (double d : c.d) criterion::require_memory_parameter(d);
  for (double d : c.vanish_d) criterion::require_memory_parameter(d);
  return c;
}

nlohmann::json to_json(const DominanceReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& k : r.checks)
    checks.push_back({{"name", k.name},
                      {"params", k.params},
                      {"lhs", extended_real(k.lhs)},
                      {"rhs", extended_real(k.rhs)},
                      {"slack", k.slack},
                      {"pass", k.pass},
                      {"skipped", k.skipped},
                      {"note", k.note}});
  return {{"checks", checks},
          {"failures", r.failures},
          {"skipped", r.skipped},
          {"all_pass", r.all_pass()}};
}

std::string format_table(const DominanceReport& r) {
  std::ostringstream os;
  char buf[256];
  for (const auto& k : r.checks) {
    const char* tag = k.skipped ? "SKIP" : k.pass ? "PASS" : "FAIL";
    std::snprintf(buf, sizeof buf, "%-4s %-12s lhs=%-13.6g rhs=%-13.6g slack=%-10.3g ", tag,
                  k.name.c_str(), k.lhs, k.rhs, k.slack);
    os << buf << k.params.dump();
    if (k.skipped) os << "  (" << k.note << ")";
    os << '\n';
  }
  os << (r.all_pass() ? "all checks pass" : "some checks fail") << " (" << r.failures
     << " failed, " << r.skipped << " skipped, " << r.checks.size() << " total)\n";
  return os.str();
}

}  // namespace flevy::idbounds
