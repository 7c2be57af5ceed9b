#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idbounds/dominance.hpp"
#include "levy/levy_model.hpp"
#include "synth/kernel.hpp"

namespace flevy::app {

// Sizes and tolerances of the acceptance criteria; defaults are the pinned values.
struct VerifyConfig {
  std::vector<std::string> criteria{"C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8"};

  // C1 exact decompositions
  std::size_t decomposition_paths = 100;
  double decomposition_step = 1.0 / 512;
  double decomposition_tol = 1e-10;
  // C2 phase boundary
  int lattice = 20;
  // C3 expected-TV identity, on the configured model
  std::size_t tv_paths = 1000;
  int tv_depth = 12;
  std::size_t y0_draws = 10000;
  double identity_se = 3.0;
  // C4 TV dichotomy
  std::size_t dichotomy_paths = 200;
  int dichotomy_depth = 10;
  double converged_fraction = 0.95;
  std::vector<double> brownian_d{0.1, 0.25, 0.4};
  std::size_t brownian_paths = 20;
  double exponent_tol = 0.1;
  // C5 second-order structure
  std::size_t variance_reps = 10000;
  double variance_step = 1.0 / 1024;
  double slope_tol = 0.05;
  // C6 derivative at zero
  std::size_t derivative_paths = 1000;
  double derivative_step = 1.0 / 16384;
  int max_inversions = 1;
  // C8 stationary increments
  std::size_t ks_paths = 2000;
  double ks_level = 0.01;
};

struct RunConfig {
  nlohmann::json model;  // normalized model document
  synth::KernelKind kind = synth::KernelKind::NonAnticipative;
  double d = 0.25;
  double t_max = 1.0;
  double step = 1.0 / 512;
  double tol = 1e-3;
  std::size_t paths = 10;
  int depth = 10;
  std::size_t mc = 10000;
  double a = 0.0;
  double b = 1.0;
  std::uint64_t seed = 0;
  std::string out_dir = "flevy_out";
  std::optional<std::string> input;  // path CSV for `tv`
  idbounds::DominanceConfig bounds;
  VerifyConfig verify;

  levy::LevyModel levy_model() const;
};

// Symmetric compound Poisson, jumps +-1 at rate 1/2 each.
nlohmann::json default_model();

nlohmann::json to_json(const VerifyConfig& v);
VerifyConfig verify_config_from_json(const nlohmann::json& j);
// without_output drops out_dir, which does not affect any result.
nlohmann::json to_json(const RunConfig& c, bool without_output = false);
// Missing keys take defaults. Throws Parse or InvalidParameter.
RunConfig run_config_from_json(const nlohmann::json& j);

}  // namespace flevy::app
