#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "levy/levy_model.hpp"

namespace flevy::idbounds {

struct DominanceConfig {
  std::vector<double> eps{0.1, 1.0, 10.0};
  std::vector<double> d{0.1, 0.25, 0.4};
  std::vector<double> r{-0.5, -1.0, -4.0};
  std::vector<double> a{0.5, 1.0, 2.0};
  std::vector<double> t{0.25, 1.0};  // exact-tail lhs, checked against the majorant lhs
  std::size_t mc_draws = 10000;      // unit-time increments for E|X|
  double slack_se = 3.0;
  // F_d total variation on [0, fd_b]
  bool fd_check = true;
  double fd_b = 1.0;
  int fd_depth = 10;
  std::size_t fd_paths = 200;
  double fd_tol = 1e-3;
  // r = -2^-k, k = 1..vanish_kmax; nonincreasing required from vanish_from on
  std::vector<double> vanish_d{0.25, 0.4};
  int vanish_kmax = 200;
  int vanish_from = 8;
  double vanish_eps = 1.0;
  std::uint64_t seed = 0;
};

struct DominanceCheck {
  std::string name;
  nlohmann::json params;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // added to rhs before comparing
  bool pass = false;
  bool skipped = false;
  std::string note;
};

struct DominanceReport {
  std::vector<DominanceCheck> checks;
  std::size_t failures = 0;
  std::size_t skipped = 0;
  bool all_pass() const noexcept { return failures == 0; }
};

// Every check whose precondition fails for this model is recorded as skipped.
DominanceReport run_dominance(const levy::LevyModel& m, const DominanceConfig& c);

nlohmann::json to_json(const DominanceConfig& c);
DominanceConfig dominance_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DominanceReport& r);
// One line per check.
std::string format_table(const DominanceReport& r);

}  // namespace flevy::idbounds
