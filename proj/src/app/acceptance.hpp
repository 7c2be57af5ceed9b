#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "app/config.hpp"

namespace flevy::app {

struct CriterionResult {
  std::string id;  // C1..C8
  std::string title;
  bool pass = false;
  nlohmann::json metrics;
  double seconds = 0.0;
  // Plot-ready CSV side outputs, (file name, contents).
  std::vector<std::pair<std::string, std::string>> files;
};

// C3 runs on the configured model, d, interval and truncation tolerance; the
// other criteria use their own fixed drivers.
CriterionResult run_criterion(const std::string& id, const RunConfig& c);

const char* criterion_title(const std::string& id);

// "%.17g"
std::string fmt17(double x);

}  // namespace flevy::app
