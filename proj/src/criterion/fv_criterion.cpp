#include "criterion/fv_criterion.hpp"

#include <cmath>

#include "core/error.hpp"
#include "core/json_util.hpp"

namespace flevy::criterion {

const char* to_string(Verdict v) noexcept {
  return v == Verdict::FiniteVariation ? "FiniteVariation" : "InfiniteVariation";
}

void require_memory_parameter(double d) {
  require(d > 0.0 && d < 0.5, ErrorCode::InvalidParameter, "d must lie in (0, 1/2)");
}

double stable_threshold(double d) {
  require_memory_parameter(d);
  return 1.0 / (1.0 - d);
}

CriterionReport fv_criterion(const levy::LevyModel& m, double d) {
  CriterionReport r;
  r.d = d;
  r.exponent = stable_threshold(d);
  r.hurst = d + 0.5;
  r.sigma_zero = m.sigma() == 0.0;
  r.moment_value = levy::abs_moment(m, r.exponent, 0.0, 1.0);
  r.verdict = r.sigma_zero && std::isfinite(r.moment_value) ? Verdict::FiniteVariation
                                                            : Verdict::InfiniteVariation;
  return r;
}

nlohmann::json to_json(const CriterionReport& r) {
  const bool fv = r.verdict == Verdict::FiniteVariation;
  return {
      {"d", r.d},
      {"hurst", r.hurst},
      {"sigma_zero", r.sigma_zero},
      {"moment_exponent", r.exponent},
      {"moment_value", extended_real(r.moment_value)},
      {"verdict", to_string(r.verdict)},
      {"applies_to", {"non-anticipative M_d", "well-balanced N_d"}},
      {"equivalent_statements",
       {{"finite_variation_paths", fv},
        {"finite_expected_variation_on_compacts", fv},
        {"semimartingale", fv},
        {"differentiable_at_zero", fv},
        {"almost_everywhere_differentiable", fv}}},
  };
}

}  // namespace flevy::criterion
