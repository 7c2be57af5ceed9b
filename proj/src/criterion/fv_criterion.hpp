#pragma once

#include <json.hpp>

#include "levy/levy_model.hpp"

namespace flevy::criterion {

enum class Verdict { FiniteVariation, InfiniteVariation };

const char* to_string(Verdict v) noexcept;

struct CriterionReport {
  double d = 0.0;
  bool sigma_zero = false;
  double exponent = 0.0;      // 1 / (1 - d)
  double moment_value = 0.0;  // int_{|x| <= 1} |x|^exponent nu(dx), may be +inf
  Verdict verdict = Verdict::InfiniteVariation;
  double hurst = 0.0;
};

// Throws InvalidParameter unless 0 < d < 1/2.
void require_memory_parameter(double d);

CriterionReport fv_criterion(const levy::LevyModel& m, double d);

// Truncated-stable drivers are of finite variation iff alpha is below this.
double stable_threshold(double d);

nlohmann::json to_json(const CriterionReport& r);

}  // namespace flevy::criterion
