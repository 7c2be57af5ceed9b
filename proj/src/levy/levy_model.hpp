#pragma once

#include <limits>
#include <variant>
#include <vector>

#include <json.hpp>

namespace flevy::levy {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Atom {
  double size = 0.0;  // nonzero jump size
  double rate = 0.0;  // jumps per unit time, >= 0
};

struct NoJumps {};

struct CompoundPoisson {
  std::vector<Atom> atoms;
};

// nu(dx) = scale * |x|^(-1-alpha) dx on 0 < |x| <= 1; negative side only when
// symmetric.
struct TruncatedStable {
  double alpha = 1.0;
  double scale = 1.0;
  bool symmetric = true;
};

struct JumpFamily;

struct Mixture {
  std::vector<JumpFamily> parts;
};

struct JumpFamily {
  std::variant<NoJumps, CompoundPoisson, TruncatedStable, Mixture> kind;

  JumpFamily() = default;
  JumpFamily(NoJumps v) : kind(v) {}
  JumpFamily(CompoundPoisson v) : kind(std::move(v)) {}
  JumpFamily(TruncatedStable v) : kind(v) {}
  JumpFamily(Mixture v) : kind(std::move(v)) {}
};

// Throws InvalidParameter on negative rates, zero atom sizes, alpha outside
// (0, 2) or non-positive scale.
void validate(const JumpFamily& f);

// nu([x, inf)) for x > 0.
double positive_tail(const JumpFamily& f, double x);
// nu((-inf, -x]) for x > 0.
double negative_tail(const JumpFamily& f, double x);

// Integral of |x|^p over lo < |x| <= hi; +inf when it diverges.
double abs_moment(const JumpFamily& f, double p, double lo, double hi);
// Integral of x^p over lo < x <= hi (positive half line only).
double positive_moment(const JumpFamily& f, double p, double lo, double hi);

double second_moment(const JumpFamily& f);

// Integral of x (1 - beta(x)) with beta(x) = (1 - |x|) 1_[-1,1](x); links the
// drift gamma to the mean per unit time.
double cutoff_mean(const JumpFamily& f);

// Integral over x > 0 of min(x, eps)^2; equals 2 * int_0^eps x nu([x,inf)) dx.
double positive_clipped_square(const JumpFamily& f, double eps);
// Integral over x > 0 of (x - eps)_+; equals int_eps^inf nu([x,inf)) dx.
double positive_excess(const JumpFamily& f, double eps);

bool is_symmetric(const JumpFamily& f);

// nu*(A) = nu(A) + nu(-A): Levy measure of L - L' for an independent copy L'.
JumpFamily symmetrized(const JumpFamily& f);

// Locations x > 0 where nu([x, inf)) jumps or has a kink.
std::vector<double> positive_breakpoints(const JumpFamily& f);

bool has_jumps(const JumpFamily& f);

class LevyModel {
 public:
  // sigma is the Gaussian variance per unit time. With centered set, the
  // drift is chosen so that E L(1) = 0 and gamma is ignored.
  static LevyModel make(double sigma, double gamma, JumpFamily jumps, bool centered);

  double sigma() const noexcept { return sigma_; }
  double gamma() const noexcept { return gamma_; }
  double mean() const noexcept { return mean_; }
  bool centered() const noexcept { return centered_; }
  const JumpFamily& jumps() const noexcept { return jumps_; }

  // Var L(1) = sigma + int x^2 nu(dx).
  double variance() const;
  // E L(1)^2.
  double second_moment() const;
  // Symmetric law: symmetric nu and zero mean.
  bool is_symmetric() const;

 private:
  LevyModel() = default;

  double sigma_ = 0.0;
  double gamma_ = 0.0;
  double mean_ = 0.0;
  bool centered_ = true;
  JumpFamily jumps_;
};

// nu([x, inf)); x must be positive.
double tail_mass(const LevyModel& m, double x);
// Integral of |x|^p over lo < |x| <= hi.
double abs_moment(const LevyModel& m, double p, double lo, double hi);

nlohmann::json to_json(const JumpFamily& f);
JumpFamily jump_family_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LevyModel& m);
LevyModel model_from_json(const nlohmann::json& j);

}  // namespace flevy::levy
