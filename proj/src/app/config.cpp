#include "app/config.hpp"

#include <cmath>

#include "core/error.hpp"
#include "criterion/fv_criterion.hpp"

namespace flevy::app {

levy::LevyModel RunConfig::levy_model() const { return levy::model_from_json(model); }

nlohmann::json default_model() {
  return levy::to_json(levy::LevyModel::make(
      0.0, 0.0, levy::CompoundPoisson{{{1.0, 0.5}, {-1.0, 0.5}}}, true));
}

nlohmann::json to_json(const VerifyConfig& v) {
  return {{"criteria", v.criteria},
          {"decomposition_paths", v.decomposition_paths},
          {"decomposition_step", v.decomposition_step},
          {"decomposition_tol", v.decomposition_tol},
          {"lattice", v.lattice},
          {"tv_paths", v.tv_paths},
          {"tv_depth", v.tv_depth},
          {"y0_draws", v.y0_draws},
          {"identity_se", v.identity_se},
          {"dichotomy_paths", v.dichotomy_paths},
          {"dichotomy_depth", v.dichotomy_depth},
          {"converged_fraction", v.converged_fraction},
          {"brownian_d", v.brownian_d},
          {"brownian_paths", v.brownian_paths},
          {"exponent_tol", v.exponent_tol},
          {"variance_reps", v.variance_reps},
          {"variance_step", v.variance_step},
          {"slope_tol", v.slope_tol},
          {"derivative_paths", v.derivative_paths},
          {"derivative_step", v.derivative_step},
          {"max_inversions", v.max_inversions},
          {"ks_paths", v.ks_paths},
          {"ks_level", v.ks_level}};
}

namespace {

template <class T>
void read(const nlohmann::json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

void check_step(double step, const char* what) {
  require(step > 0.0 && std::isfinite(step), ErrorCode::InvalidParameter, std::string(what) + " must be positive");
}

}  // namespace

VerifyConfig verify_config_from_json(const nlohmann::json& j) {
  VerifyConfig v;
  require(j.is_object(), ErrorCode::Parse, "verify config must be an object");
  read(j, "criteria", v.criteria);
  read(j, "decomposition_paths", v.decomposition_paths);
  read(j, "decomposition_step", v.decomposition_step);
  read(j, "decomposition_tol", v.decomposition_tol);
  read(j, "lattice", v.lattice);
  read(j, "tv_paths", v.tv_paths);
  read(j, "tv_depth", v.tv_depth);
  read(j, "y0_draws", v.y0_draws);
  read(j, "identity_se", v.identity_se);
  read(j, "dichotomy_paths", v.dichotomy_paths);
  read(j, "dichotomy_depth", v.dichotomy_depth);
  read(j, "converged_fraction", v.converged_fraction);
  read(j, "brownian_d", v.brownian_d);
  read(j, "brownian_paths", v.brownian_paths);
  read(j, "exponent_tol", v.exponent_tol);
  read(j, "variance_reps", v.variance_reps);
  read(j, "variance_step", v.variance_step);
  read(j, "slope_tol", v.slope_tol);
  read(j, "derivative_paths", v.derivative_paths);
  read(j, "derivative_step", v.derivative_step);
  read(j, "max_inversions", v.max_inversions);
  read(j, "ks_paths", v.ks_paths);
  read(j, "ks_level", v.ks_level);
  for (const auto& c : v.criteria)
    require(c.size() == 2 && c[0] == 'C' && c[1] >= '1' && c[1] <= '8', ErrorCode::InvalidParameter,
            "unknown criterion '" + c + "' (C1..C8)");
  check_step(v.decomposition_step, "decomposition_step");
  check_step(v.variance_step, "variance_step");
  check_step(v.derivative_step, "derivative_step");
  require(v.lattice >= 1, ErrorCode::InvalidParameter, "lattice must be positive");
  require(v.tv_depth >= 3 && v.tv_depth <= 20 && v.dichotomy_depth >= 5 && v.dichotomy_depth <= 20,
          ErrorCode::InvalidParameter, "depths must lie in [3, 20] and [5, 20]");
  require(v.tv_paths >= 2 && v.y0_draws >= 2 && v.variance_reps >= 2 && v.derivative_paths >= 2 &&
              v.ks_paths >= 1 && v.dichotomy_paths >= 1 && v.brownian_paths >= 1,
          ErrorCode::InvalidParameter, "sample sizes too small");
  for (double d : v.brownian_d) criterion::require_memory_parameter(d);
  return v;
}

nlohmann::json to_json(const RunConfig& c, bool without_output) {
  nlohmann::json j = {{"model", c.model},
                      {"kind", synth::to_string(c.kind)},
                      {"d", c.d},
                      {"t_max", c.t_max},
                      {"step", c.step},
                      {"tol", c.tol},
                      {"paths", c.paths},
                      {"depth", c.depth},
                      {"mc", c.mc},
                      {"interval", {c.a, c.b}},
                      {"seed", c.seed},
                      {"bounds", idbounds::to_json(c.bounds)},
                      {"verify", to_json(c.verify)}};
  if (c.input) j["input"] = *c.input;
  if (!without_output) j["out_dir"] = c.out_dir;
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  require(j.is_object(), ErrorCode::Parse, "config must be a JSON object");
  try {
    c.model = levy::to_json(levy::model_from_json(j.value("model", default_model())));
    if (j.contains("kind")) c.kind = synth::kernel_kind_from_string(j.at("kind").get<std::string>());
    read(j, "d", c.d);
    read(j, "t_max", c.t_max);
    read(j, "step", c.step);
    read(j, "tol", c.tol);
    read(j, "paths", c.paths);
    read(j, "depth", c.depth);
    read(j, "mc", c.mc);
    if (j.contains("interval")) {
      const auto iv = j.at("interval").get<std::vector<double>>();
      require(iv.size() == 2, ErrorCode::Parse, "interval must have two entries");
      c.a = iv[0];
      c.b = iv[1];
    }
    read(j, "seed", c.seed);
    read(j, "out_dir", c.out_dir);
    if (j.contains("input")) c.input = j.at("input").get<std::string>();
    if (j.contains("bounds")) c.bounds = idbounds::dominance_config_from_json(j.at("bounds"));
    if (j.contains("verify")) c.verify = verify_config_from_json(j.at("verify"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("config: ") + e.what());
  }
  criterion::require_memory_parameter(c.d);
  require(c.t_max > 0.0 && std::isfinite(c.t_max), ErrorCode::InvalidParameter, "t_max must be positive");
  check_step(c.step, "step");
  require(c.tol > 0.0, ErrorCode::InvalidParameter, "tol must be positive");
  require(c.depth >= 1 && c.depth <= 24, ErrorCode::InvalidParameter, "depth must lie in [1, 24]");
  require(c.b > c.a, ErrorCode::InvalidParameter, "interval needs a < b");
  require(!c.out_dir.empty(), ErrorCode::InvalidParameter, "out_dir must not be empty");
  return c;
}

}  // namespace flevy::app
