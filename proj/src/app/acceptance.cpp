#include "app/acceptance.hpp"

#include <algorithm>
#include <chrono>
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
#include "idbounds/dominance.hpp"
#include "synth/synthesize.hpp"
#include "variation/estimators.hpp"

namespace flevy::app {

using levy::LevyModel;
using synth::KernelKind;

namespace {

LevyModel symmetric_cpp() { return levy::model_from_json(default_model()); }
LevyModel brownian() { return LevyModel::make(1.0, 0.0, levy::NoJumps{}, true); }
LevyModel stable1() { return LevyModel::make(0.0, 0.0, levy::TruncatedStable{1.0, 1.0, true}, true); }

std::uint64_t seed_for(const RunConfig& c, int criterion, std::uint64_t sub = 0) {
  return child_seed(c.seed, {static_cast<std::uint64_t>(Stream::Experiment), 100u + criterion, sub});
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

CriterionResult c1(const RunConfig& c) {
  const auto& v = c.verify;
  const auto m = symmetric_cpp();
  const double d = 0.25;
  const auto plan = synth::plan_grid(KernelKind::WellBalanced, d, 1.0, v.decomposition_step,
                                     m.second_moment(), c.tol);
  std::vector<double> times;
  for (std::size_t k = plan.grid.zero_index(); k < plan.grid.node_count(); ++k)
    if (plan.grid.node(k) <= 1.0 + 1e-12) times.push_back(plan.grid.node(k));
  std::vector<double> err_m(v.decomposition_paths), err_n(v.decomposition_paths), err_p(v.decomposition_paths);
  parallel_for(v.decomposition_paths, [&](std::size_t i) {
    const auto p = levy::sample_increments(m, plan.grid, child_seed(seed_for(c, 1), Stream::Replication, i),
                                           plan.tails);
    const auto na = synth::synthesize(p, {KernelKind::NonAnticipative, d}, times);
    const auto tp = synth::synthesize(p, {KernelKind::TailPart, d}, times);
    const auto rl = synth::synthesize(p, {KernelKind::RiemannLiouville, d}, times);
    const auto wb = synth::synthesize(p, {KernelKind::WellBalanced, d}, times);
    const auto dec = synth::synthesize_nd_by_decomposition(p, levy::time_reverse(p), d, times);
    const auto pf = synth::synthesize_path_form(p, {KernelKind::NonAnticipative, d}, times);
    const double sm = std::max(max_abs(na.values), 1e-300), sn = std::max(max_abs(wb.values), 1e-300);
    double em = 0.0, en = 0.0, ep = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
      em = std::max(em, std::abs(na.values[j] - tp.values[j] - rl.values[j]) / sm);
      en = std::max(en, std::abs(wb.values[j] - dec.values[j]) / sn);
      ep = std::max(ep, std::abs(na.values[j] - pf.values[j]) / sm);
    }
    err_m[i] = em;
    err_n[i] = en;
    err_p[i] = ep;
  });
  CriterionResult r;
  const double mm = max_abs(err_m), mn = max_abs(err_n), mp = max_abs(err_p);
  r.pass = mm <= v.decomposition_tol && mn <= v.decomposition_tol && mp <= v.decomposition_tol;
  r.metrics = {{"paths", v.decomposition_paths},
               {"step", v.decomposition_step},
               {"times", times.size()},
               {"max_rel_error_m_vs_f_plus_rl", mm},
               {"max_rel_error_n_vs_decomposition", mn},
               {"max_rel_error_path_form", mp},
               {"tolerance", v.decomposition_tol}};
  return r;
}

CriterionResult c2(const RunConfig& c) {
  const int n = c.verify.lattice;
  int agree = 0, total = 0, boundary = 0;
  for (int j = 0; j < n; ++j) {
    const double d = 0.5 * (j + 1) / (n + 1);
    const double star = criterion::stable_threshold(d);
    for (int i = 0; i < n; ++i) {
      // the last column sits on the boundary itself
      const double alpha = i == n - 1 ? star : 2.0 * (i + 1) / (n + 1);
      const auto m = LevyModel::make(0.0, 0.0, levy::TruncatedStable{alpha, 1.0, true}, true);
      const bool fv = criterion::fv_criterion(m, d).verdict == criterion::Verdict::FiniteVariation;
      agree += fv == (alpha < star);
      boundary += i == n - 1 && !fv;
      ++total;
    }
  }
  CriterionResult r;
  r.pass = agree == total;
  r.metrics = {{"lattice", n}, {"agree", agree}, {"total", total}, {"boundary_infinite", boundary}};
  return r;
}

CriterionResult c3(const RunConfig& c) {
  const auto& v = c.verify;
  const auto m = c.levy_model();
  CriterionResult r;
  const auto y = variation::expected_tv(m, c.d, c.a, c.b, v.y0_draws, seed_for(c, 3, 1));
  r.metrics = {{"verdict", criterion::to_string(y.criterion.verdict)}, {"y0", variation::to_json(y)}};
  if (!y.finite) {
    r.pass = true;
    r.metrics["outcome"] = "expected-infinite";
    return r;
  }
  variation::TvExperiment e;
  e.d = c.d;
  e.a = c.a;
  e.b = c.b;
  e.depth = v.tv_depth;
  e.tol = c.tol;
  e.paths = v.tv_paths;
  e.seed = seed_for(c, 3, 2);
  const auto tv = variation::tv_monte_carlo(m, e);
  const double combined = std::hypot(tv.summary.mc_stderr, y.std_error);
  const double diff = tv.summary.mc_mean - y.estimate;
  r.pass = std::abs(diff) <= v.identity_se * combined;
  r.metrics["direct_mean"] = tv.summary.mc_mean;
  r.metrics["direct_stderr"] = tv.summary.mc_stderr;
  r.metrics["direct_paths"] = tv.summary.paths;
  r.metrics["depth"] = v.tv_depth;
  r.metrics["identity_estimate"] = y.estimate;
  r.metrics["identity_stderr"] = y.std_error;
  r.metrics["difference"] = diff;
  r.metrics["combined_stderr"] = combined;
  r.metrics["z"] = combined > 0.0 ? diff / combined : 0.0;
  return r;
}

CriterionResult c4(const RunConfig& c) {
  const auto& v = c.verify;
  CriterionResult r;
  std::ostringstream csv;
  csv << "driver,d,n,mean_tv\n";
  variation::TvExperiment e;
  e.d = 0.25;
  e.depth = v.dichotomy_depth;
  e.tol = c.tol;
  e.paths = v.dichotomy_paths;
  e.seed = seed_for(c, 4, 0);
  const auto cpp = variation::tv_monte_carlo(symmetric_cpp(), e);
  std::size_t conv = 0;
  for (const auto& p : cpp.per_path) conv += p.converged;
  const double frac = cpp.per_path.empty() ? 0.0 : static_cast<double>(conv) / cpp.per_path.size();
  for (auto [n, tv] : cpp.summary.tv_by_depth) csv << "cpp,0.25," << n << ',' << fmt17(tv) << '\n';
  r.pass = frac >= v.converged_fraction;
  r.metrics = {{"cpp_paths", cpp.per_path.size()},
               {"cpp_converged_fraction", frac},
               {"cpp_mean_tv", cpp.summary.mc_mean},
               {"required_fraction", v.converged_fraction}};
  nlohmann::json bm = nlohmann::json::array();
  for (std::size_t i = 0; i < v.brownian_d.size(); ++i) {
    e.d = v.brownian_d[i];
    e.paths = v.brownian_paths;
    e.seed = seed_for(c, 4, i + 1);
    const auto res = variation::tv_monte_carlo(brownian(), e);
    const double target = 0.5 - e.d;
    const bool ok = std::abs(res.summary.growth_exponent - target) <= v.exponent_tol;
    r.pass = r.pass && ok;
    bm.push_back({{"d", e.d}, {"growth_exponent", res.summary.growth_exponent}, {"target", target}, {"pass", ok}});
    for (auto [n, tv] : res.summary.tv_by_depth)
      csv << "brownian," << fmt17(e.d) << ',' << n << ',' << fmt17(tv) << '\n';
  }
  r.metrics["brownian"] = bm;
  r.metrics["exponent_tol"] = v.exponent_tol;
  r.files.emplace_back("c4_tv_profiles.csv", csv.str());
  return r;
}

CriterionResult c5(const RunConfig& c) {
  const auto& v = c.verify;
  const double d = 0.25;
  std::vector<double> times, logt;
  for (int k = 6; k >= 1; --k) {
    times.push_back(std::ldexp(1.0, -k));
    logt.push_back(std::log(times.back()));
  }
  CriterionResult r;
  r.pass = true;
  std::ostringstream csv;
  csv << "driver,t,variance\n";
  nlohmann::json drivers = nlohmann::json::array();
  int which = 0;
  for (const auto& [name, m] : {std::pair{"cpp", symmetric_cpp()}, std::pair{"brownian", brownian()}}) {
    const auto plan = synth::plan_grid(KernelKind::NonAnticipative, d, times.back(), v.variance_step,
                                       m.second_moment(), c.tol);
    std::vector<std::vector<double>> x(times.size(), std::vector<double>(v.variance_reps));
    const std::uint64_t root = seed_for(c, 5, static_cast<std::uint64_t>(which++));
    parallel_for(v.variance_reps, [&](std::size_t i) {
      const auto p = levy::sample_increments(m, plan.grid, child_seed(root, Stream::Replication, i), plan.tails);
      const auto f = synth::synthesize(p, {KernelKind::NonAnticipative, d}, times);
      for (std::size_t j = 0; j < times.size(); ++j) x[j][i] = f.values[j];
    });
    std::vector<double> logv;
    for (std::size_t j = 0; j < times.size(); ++j) {
      const double var = stats::sample_variance(x[j]);
      logv.push_back(std::log(var));
      csv << name << ',' << fmt17(times[j]) << ',' << fmt17(var) << '\n';
    }
    const double slope = stats::ols_slope(logt, logv);
    const bool ok = std::abs(slope - (2 * d + 1)) <= v.slope_tol;
    r.pass = r.pass && ok;
    drivers.push_back({{"driver", name}, {"slope", slope}, {"pass", ok}});
  }
  r.metrics = {{"d", d}, {"target", 2 * d + 1}, {"tolerance", v.slope_tol}, {"reps", v.variance_reps},
               {"step", v.variance_step}, {"drivers", drivers}};
  r.files.emplace_back("c5_variance.csv", csv.str());
  return r;
}

CriterionResult c6(const RunConfig& c) {
  const auto& v = c.verify;
  variation::DerivativeExperiment e;
  e.d = 0.25;
  for (int k = 3; k <= 8; ++k) e.t_list.push_back(std::ldexp(1.0, -k));
  e.step = v.derivative_step;
  e.tol = c.tol;
  e.paths = v.derivative_paths;
  e.seed = seed_for(c, 6);
  const auto res = variation::derivative_convergence(symmetric_cpp(), e);
  CriterionResult r;
  std::ostringstream csv;
  csv << "t,right_mean,right_stderr,left_mean,left_stderr\n";
  for (std::size_t j = 0; j < res.t.size(); ++j)
    csv << fmt17(res.t[j]) << ',' << fmt17(res.right[j].mean) << ',' << fmt17(res.right[j].std_error) << ','
        << fmt17(res.left[j].mean) << ',' << fmt17(res.left[j].std_error) << '\n';
  const bool right_down = res.right.back().mean < res.right.front().mean;
  const bool left_down = res.left.back().mean < res.left.front().mean;
  r.pass = res.right_inversions <= v.max_inversions && res.left_inversions <= v.max_inversions &&
           right_down && left_down;
  nlohmann::json right = nlohmann::json::array(), left = nlohmann::json::array();
  for (std::size_t j = 0; j < res.t.size(); ++j) {
    right.push_back({res.right[j].mean, res.right[j].std_error});
    left.push_back({res.left[j].mean, res.left[j].std_error});
  }
  r.metrics = {{"t", res.t},
               {"right", right},
               {"left", left},
               {"right_inversions", res.right_inversions},
               {"left_inversions", res.left_inversions},
               {"max_inversions", v.max_inversions},
               {"paths", v.derivative_paths}};
  r.files.emplace_back("c6_derivative.csv", csv.str());
  return r;
}

CriterionResult c7(const RunConfig& c) {
  CriterionResult r;
  const double w1 = idbounds::mean_abs_bound(symmetric_cpp(), 2.0);
  const double w2 = idbounds::mean_abs_bound(stable1(), 1.0);
  const bool worked = std::abs(w1 - 2.5) <= 1e-12 * 2.5 && std::abs(w2 - 3.0) <= 1e-12 * 3.0;
  r.pass = worked;
  r.metrics = {{"worked_cpp_eps2", w1}, {"worked_stable_eps1", w2}, {"worked_pass", worked}};
  nlohmann::json suites = nlohmann::json::object();
  std::ostringstream table;
  int which = 0;
  for (const auto& [name, m] :
       {std::pair{"cpp", symmetric_cpp()}, std::pair{"stable_alpha1", stable1()}, std::pair{"brownian", brownian()}}) {
    auto cfg = c.bounds;
    cfg.seed = seed_for(c, 7, static_cast<std::uint64_t>(which++));
    const auto rep = idbounds::run_dominance(m, cfg);
    r.pass = r.pass && rep.all_pass();
    suites[name] = {{"checks", rep.checks.size()}, {"failures", rep.failures}, {"skipped", rep.skipped}};
    table << "# " << name << '\n' << idbounds::format_table(rep);
  }
  r.metrics["suites"] = suites;
  r.files.emplace_back("c7_dominance.txt", table.str());
  return r;
}

CriterionResult c8(const RunConfig& c) {
  const auto& v = c.verify;
  const double d = 0.25;
  const double times[] = {0.0, 0.25, 0.5, 0.75};
  CriterionResult r;
  r.pass = true;
  nlohmann::json drivers = nlohmann::json::array();
  int which = 0;
  for (const auto& [name, m] : {std::pair{"cpp", symmetric_cpp()}, std::pair{"brownian", brownian()}}) {
    const auto plan = synth::plan_grid(KernelKind::NonAnticipative, d, 0.75, 1.0 / 256, m.second_moment(), c.tol);
    const std::uint64_t root = seed_for(c, 8, static_cast<std::uint64_t>(which++));
    std::vector<double> early(v.ks_paths), late(v.ks_paths);
    // independent paths for the two samples
    parallel_for(2 * v.ks_paths, [&](std::size_t i) {
      const auto p = levy::sample_increments(m, plan.grid, child_seed(root, Stream::Replication, i), plan.tails);
      const auto f = synth::synthesize(p, {KernelKind::NonAnticipative, d}, times);
      if (i < v.ks_paths) early[i] = f.values[1] - f.values[0];
      else late[i - v.ks_paths] = f.values[3] - f.values[2];
    });
    const auto ks = stats::ks_two_sample(early, late);
    const bool ok = ks.p_value >= v.ks_level;
    r.pass = r.pass && ok;
    drivers.push_back({{"driver", name}, {"statistic", ks.statistic}, {"p_value", ks.p_value}, {"pass", ok}});
  }
  r.metrics = {{"d", d}, {"t1", 0.0}, {"t2", 0.5}, {"h", 0.25}, {"paths_per_sample", v.ks_paths},
               {"level", v.ks_level}, {"drivers", drivers}};
  return r;
}

}  // namespace

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* criterion_title(const std::string& id) {
  if (id == "C1") return "exact decompositions";
  if (id == "C2") return "criterion phase boundary";
  if (id == "C3") return "expected-TV identity";
  if (id == "C4") return "TV dichotomy";
  if (id == "C5") return "second-order structure";
  if (id == "C6") return "derivative convergence";
  if (id == "C7") return "bound dominance";
  if (id == "C8") return "stationary increments";
  if (id == "C9") return "reproducibility";
  return "unknown";
}

CriterionResult run_criterion(const std::string& id, const RunConfig& c) {
  using Fn = CriterionResult (*)(const RunConfig&);
  static const std::pair<const char*, Fn> table[] = {{"C1", c1}, {"C2", c2}, {"C3", c3}, {"C4", c4},
                                                     {"C5", c5}, {"C6", c6}, {"C7", c7}, {"C8", c8}};
  for (const auto& [name, fn] : table) {
    if (id != name) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r = fn(c);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.id = id;
    r.title = criterion_title(id);
    return r;
  }
  throw Error(ErrorCode::InvalidParameter, "unknown criterion '" + id + "'");
}

}  // namespace flevy::app
