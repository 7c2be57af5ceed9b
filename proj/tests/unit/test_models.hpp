#pragma once

#include <random>

#include "levy/levy_model.hpp"

namespace testing {

inline flevy::levy::LevyModel brownian() {
  return flevy::levy::LevyModel::make(1.0, 0.0, flevy::levy::NoJumps{}, true);
}

inline flevy::levy::LevyModel symmetric_cpp() {
  return flevy::levy::LevyModel::make(0.0, 0.0,
                                      flevy::levy::CompoundPoisson{{{1.0, 0.5}, {-1.0, 0.5}}}, true);
}

// Random jump families and models for property tests.
class ModelGenerator {
 public:
  static constexpr double kMaxSize = 3.0;

  explicit ModelGenerator(unsigned seed) : rng_(seed) {}

  flevy::levy::JumpFamily family(int depth = 0) {
    using namespace flevy::levy;
    switch (pick(depth < 1 ? 4 : 3)) {
      case 0: return NoJumps{};
      case 1: {
        CompoundPoisson cp;
        const int n = 1 + pick(4);
        for (int i = 0; i < n; ++i) {
          double size = uniform(0.05, kMaxSize);
          if (pick(2)) size = -size;
          cp.atoms.push_back({size, uniform(0.0, 3.0)});
        }
        return cp;
      }
      case 2: return TruncatedStable{uniform(0.1, 1.9), uniform(0.2, 2.0), pick(2) == 0};
      default: {
        Mixture mx;
        const int n = 2 + pick(2);
        for (int i = 0; i < n; ++i) mx.parts.push_back(family(depth + 1));
        return mx;
      }
    }
  }

  flevy::levy::LevyModel model() {
    const double sigma = pick(3) == 0 ? uniform(0.0, 2.0) : 0.0;
    return flevy::levy::LevyModel::make(sigma, uniform(-1.0, 1.0), family(), pick(2) == 0);
  }

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

 private:
  std::mt19937 rng_;
};

}  // namespace testing
