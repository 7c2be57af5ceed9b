#include "app/commands.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "app/acceptance.hpp"
#include "app/bundle.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "criterion/fv_criterion.hpp"
#include "idbounds/dominance.hpp"
#include "synth/synthesize.hpp"
#include "variation/estimators.hpp"

namespace flevy::app {

namespace {

std::string tv_csv(const variation::VariationReport& r) {
  std::string s = "n,tv\n";
  for (auto [n, tv] : r.tv_by_depth) s += std::to_string(n) + ',' + fmt17(tv) + '\n';
  return s;
}

synth::FlpPath read_path_csv(const std::string& file) {
  std::ifstream is(file);
  require(static_cast<bool>(is), ErrorCode::Io, "cannot open " + file);
  synth::FlpPath p;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const char* s = line.c_str();
    char* end = nullptr;
    const double t = std::strtod(s, &end);
    if (end == s) {
      require(lineno == 1, ErrorCode::Parse, file + ": bad line " + std::to_string(lineno));
      continue;  // header
    }
    require(*end == ',', ErrorCode::Parse, file + ": expected 't,x' on line " + std::to_string(lineno));
    const char* s2 = end + 1;
    const double x = std::strtod(s2, &end);
    require(end != s2, ErrorCode::Parse, file + ": bad value on line " + std::to_string(lineno));
    p.times.push_back(t);
    p.values.push_back(x);
  }
  return p;
}

std::string path_name(std::size_t i, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "path_%04zu.%s", i, ext);
  return buf;
}

CommandResult simulate(const RunConfig& c) {
  const auto m = c.levy_model();
  const auto plan = synth::plan_grid(c.kind, c.d, c.t_max, c.step, m.second_moment(), c.tol);
  std::vector<double> times;
  for (std::size_t k = plan.grid.zero_index(); k < plan.grid.node_count(); ++k)
    if (plan.grid.node(k) <= c.t_max * (1.0 + 1e-12)) times.push_back(plan.grid.node(k));
  std::vector<synth::FlpPath> paths(c.paths);
  std::vector<std::uint64_t> seeds(c.paths);
  parallel_for(c.paths, [&](std::size_t i) {
    seeds[i] = child_seed(c.seed, Stream::Replication, i);
    const auto p = levy::sample_increments(m, plan.grid, seeds[i], plan.tails);
    paths[i] = synth::synthesize(p, {c.kind, c.d}, times);
  });
  Bundle b(c.out_dir, "simulate", to_json(c, true));
  for (std::size_t i = 0; i < c.paths; ++i) {
    std::string csv = "t,x\n";
    for (std::size_t j = 0; j < times.size(); ++j) csv += fmt17(paths[i].times[j]) + ',' + fmt17(paths[i].values[j]) + '\n';
    b.write(path_name(i, "csv"), csv);
    auto meta = synth::metadata_json(paths[i]);
    meta["seed"] = seeds[i];
    meta["path_index"] = i;
    b.write_json(path_name(i, "json"), meta);
  }
  b.finish();
  return {kExitOk, "simulate: " + std::to_string(c.paths) + " path(s) in " + c.out_dir + "\n"};
}

CommandResult check(const RunConfig& c) {
  const auto rep = criterion::fv_criterion(c.levy_model(), c.d);
  const auto j = criterion::to_json(rep);
  Bundle b(c.out_dir, "check", to_json(c, true));
  b.write_json("check.json", j);
  b.finish();
  return {rep.verdict == criterion::Verdict::FiniteVariation ? kExitOk : kExitInfiniteVariation, j.dump(2) + "\n"};
}

CommandResult tv(const RunConfig& c) {
  nlohmann::json out;
  variation::VariationReport summary;
  if (c.input) {
    summary = variation::tv_profile(read_path_csv(*c.input), c.a, c.b, c.depth);
    out = {{"input", *c.input}, {"report", variation::to_json(summary)}};
  } else {
    const auto m = c.levy_model();
    variation::TvExperiment e;
    e.kind = c.kind;
    e.d = c.d;
    e.a = c.a;
    e.b = c.b;
    e.depth = c.depth;
    e.tol = c.tol;
    e.paths = c.paths;
    e.seed = child_seed(c.seed, Stream::Experiment, 10);
    const auto res = variation::tv_monte_carlo(m, e);
    summary = res.summary;
    nlohmann::json per = nlohmann::json::array();
    for (const auto& r : res.per_path)
      per.push_back({{"tv", r.mc_mean}, {"growth_exponent", r.growth_exponent}, {"converged", r.converged}});
    out = {{"report", variation::to_json(summary)}, {"per_path", per}};
    if (c.kind == synth::KernelKind::NonAnticipative && c.mc >= 2)
      out["expected_tv"] = variation::to_json(
          variation::expected_tv(m, c.d, c.a, c.b, c.mc, child_seed(c.seed, Stream::Experiment, 11)));
  }
  Bundle b(c.out_dir, "tv", to_json(c, true));
  b.write_json("tv.json", out);
  b.write("tv.csv", tv_csv(summary));
  b.finish();
  return {kExitOk, out.dump(2) + "\n"};
}

CommandResult bounds(const RunConfig& c) {
  const auto rep = idbounds::run_dominance(c.levy_model(), c.bounds);
  const std::string table = idbounds::format_table(rep);
  Bundle b(c.out_dir, "bounds", to_json(c, true));
  b.write_json("bounds.json", idbounds::to_json(rep));
  b.write("bounds.txt", table);
  b.finish();
  return {rep.all_pass() ? kExitOk : kExitCriterionFail, table};
}

CommandResult verify(const RunConfig& c) {
  Bundle b(c.out_dir, "verify", to_json(c, true));
  nlohmann::json crits = nlohmann::json::array();
  nlohmann::json timings = nlohmann::json::object();
  bool all = true;
  std::ostringstream report;
  double total = 0.0;
  for (const auto& id : c.verify.criteria) {
    const auto r = run_criterion(id, c);
    all = all && r.pass;
    crits.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"metrics", r.metrics}});
    timings[r.id] = r.seconds;
    total += r.seconds;
    for (const auto& [name, contents] : r.files) b.write(name, contents);
    char line[160];
    std::snprintf(line, sizeof line, "%s %s  %s (%.1f s)\n", r.id.c_str(), r.pass ? "PASS" : "FAIL",
                  r.title.c_str(), r.seconds);
    report << line;
  }
  timings["total"] = total;
  b.write_json("summary.json", {{"criteria", crits}, {"all_pass", all}});
  b.write_json("timings.json", timings, false);
  b.finish();
  report << (all ? "all criteria pass\n" : "some criteria fail\n");
  return {all ? kExitOk : kExitCriterionFail, report.str()};
}

}  // namespace

bool is_command(const std::string& name) {
  return name == "simulate" || name == "check" || name == "tv" || name == "bounds" || name == "verify";
}

CommandResult run_command(const std::string& name, const RunConfig& c) {
  try {
    if (name == "simulate") return simulate(c);
    if (name == "check") return check(c);
    if (name == "tv") return tv(c);
    if (name == "bounds") return bounds(c);
    if (name == "verify") return verify(c);
    return {kExitUsage, "unknown command '" + name + "'\n"};
  } catch (const Error& e) {
    return {kExitUsage, std::string(to_string(e.code())) + ": " + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {kExitUsage, std::string("error: ") + e.what() + "\n"};
  }
}

}  // namespace flevy::app
