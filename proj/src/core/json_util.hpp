#pragma once

#include <cmath>

#include <json.hpp>

namespace flevy {

// JSON has no infinities; extended reals go out as strings.
inline nlohmann::json extended_real(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

}  // namespace flevy
