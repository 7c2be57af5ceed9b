#include "levy/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "core/error.hpp"

namespace flevy::levy {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// c * int_lo^hi x^(p-1-alpha) dx for 0 <= lo < hi <= 1.
double stable_power_integral(double alpha, double c, double p, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  const double q = p - alpha;
  if (lo == 0.0) return q <= 0.0 ? kInf : c * std::pow(hi, q) / q;
  if (q == 0.0) return c * std::log(hi / lo);
  // (hi^q - lo^q) / q without cancellation for small q
  return c * std::pow(lo, q) * std::expm1(q * std::log(hi / lo)) / q;
}

// (1 - e^(s*(1-alpha))) / (1 - alpha) with s = log(eps), continuous at alpha = 1.
double one_minus_power_ratio(double alpha, double log_eps) {
  const double k = 1.0 - alpha;
  if (k == 0.0) return -log_eps;
  return -std::expm1(k * log_eps) / k;
}

double add_extended(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return kInf;
  return a + b;
}

struct SignedMasses {
  std::map<double, double> atoms;                     // |size| -> rate(+) - rate(-)
  std::map<double, std::pair<double, double>> stable; // alpha -> (positive, negative)
};

void collect(const JumpFamily& f, SignedMasses& m) {
  std::visit(Overloaded{
                 [](const NoJumps&) {},
                 [&](const CompoundPoisson& cp) {
                   for (const auto& a : cp.atoms) {
                     const double s = a.size > 0.0 ? a.rate : -a.rate;
                     m.atoms[std::abs(a.size)] += s;
                   }
                 },
                 [&](const TruncatedStable& ts) {
                   auto& e = m.stable[ts.alpha];
                   e.first += ts.scale;
                   if (ts.symmetric) e.second += ts.scale;
                 },
                 [&](const Mixture& mx) {
                   for (const auto& p : mx.parts) collect(p, m);
                 },
             },
             f.kind);
}

}  // namespace

void validate(const JumpFamily& f) {
  std::visit(Overloaded{
                 [](const NoJumps&) {},
                 [](const CompoundPoisson& cp) {
                   for (const auto& a : cp.atoms) {
                     require(std::isfinite(a.size) && a.size != 0.0, ErrorCode::InvalidParameter,
                             "compound Poisson atom sizes must be finite and nonzero");
                     require(std::isfinite(a.rate) && a.rate >= 0.0, ErrorCode::InvalidParameter,
                             "compound Poisson rates must be finite and >= 0");
                   }
                 },
                 [](const TruncatedStable& ts) {
                   require(ts.alpha > 0.0 && ts.alpha < 2.0, ErrorCode::InvalidParameter,
                           "truncated stable alpha must lie in (0, 2)");
                   require(std::isfinite(ts.scale) && ts.scale > 0.0, ErrorCode::InvalidParameter,
                           "truncated stable scale must be positive");
                 },
                 [](const Mixture& mx) {
                   for (const auto& p : mx.parts) validate(p);
                 },
             },
             f.kind);
}

double positive_tail(const JumpFamily& f, double x) {
  return std::visit(Overloaded{
                        [](const NoJumps&) { return 0.0; },
                        [&](const CompoundPoisson& cp) {
                          double s = 0.0;
                          for (const auto& a : cp.atoms)
                            if (a.size >= x) s += a.rate;
                          return s;
                        },
                        [&](const TruncatedStable& ts) {
                          if (x > 1.0) return 0.0;
                          return ts.scale * -std::expm1(-ts.alpha * std::log(x)) / -ts.alpha;
                        },
                        [&](const Mixture& mx) {
                          double s = 0.0;
                          for (const auto& p : mx.parts) s += positive_tail(p, x);
                          return s;
                        },
                    },
                    f.kind);
}

double negative_tail(const JumpFamily& f, double x) {
  return std::visit(Overloaded{
                        [](const NoJumps&) { return 0.0; },
                        [&](const CompoundPoisson& cp) {
                          double s = 0.0;
                          for (const auto& a : cp.atoms)
                            if (a.size <= -x) s += a.rate;
                          return s;
                        },
                        [&](const TruncatedStable& ts) {
                          if (!ts.symmetric) return 0.0;
                          return positive_tail(JumpFamily(TruncatedStable{ts.alpha, ts.scale, false}),
                                               x);
                        },
                        [&](const Mixture& mx) {
                          double s = 0.0;
                          for (const auto& p : mx.parts) s += negative_tail(p, x);
                          return s;
                        },
                    },
                    f.kind);
}

double positive_moment(const JumpFamily& f, double p, double lo, double hi) {
  return std::visit(Overloaded{
                        [](const NoJumps&) { return 0.0; },
                        [&](const CompoundPoisson& cp) {
                          double s = 0.0;
                          for (const auto& a : cp.atoms)
                            if (a.size > lo && a.size <= hi) s += a.rate * std::pow(a.size, p);
                          return s;
                        },
                        [&](const TruncatedStable& ts) {
                          return stable_power_integral(ts.alpha, ts.scale, p, lo, std::min(hi, 1.0));
                        },
                        [&](const Mixture& mx) {
                          double s = 0.0;
                          for (const auto& q : mx.parts) s = add_extended(s, positive_moment(q, p, lo, hi));
                          return s;
                        },
                    },
                    f.kind);
}

double abs_moment(const JumpFamily& f, double p, double lo, double hi) {
  return std::visit(Overloaded{
                        [](const NoJumps&) { return 0.0; },
                        [&](const CompoundPoisson& cp) {
                          double s = 0.0;
                          for (const auto& a : cp.atoms) {
                            const double m = std::abs(a.size);
                            if (m > lo && m <= hi) s += a.rate * std::pow(m, p);
                          }
                          return s;
                        },
                        [&](const TruncatedStable& ts) {
                          const double one = stable_power_integral(ts.alpha, ts.scale, p, lo,
                                                                   std::min(hi, 1.0));
                          return ts.symmetric ? add_extended(one, one) : one;
                        },
                        [&](const Mixture& mx) {
                          double s = 0.0;
                          for (const auto& q : mx.parts) s = add_extended(s, abs_moment(q, p, lo, hi));
                          return s;
                        },
                    },
                    f.kind);
}

double second_moment(const JumpFamily& f) { return abs_moment(f, 2.0, 0.0, kInf); }

double cutoff_mean(const JumpFamily& f) {
  return std::visit(Overloaded{
                        [](const NoJumps&) { return 0.0; },
                        [](const CompoundPoisson& cp) {
                          double s = 0.0;
                          for (const auto& a : cp.atoms)
                            s += a.rate * a.size * std::min(std::abs(a.size), 1.0);
                          return s;
                        },
                        [](const TruncatedStable& ts) {
                          return ts.symmetric ? 0.0 : ts.scale / (2.0 - ts.alpha);
                        },
                        [](const Mixture& mx) {
                          double s = 0.0;
                          for (const auto& q : mx.parts) s += cutoff_mean(q);
                          return s;
                        },
                    },
                    f.kind);
}

double positive_clipped_square(const JumpFamily& f, double eps) {
  return std::visit(Overloaded{
                        [](const NoJumps&) { return 0.0; },
                        [&](const CompoundPoisson& cp) {
                          double s = 0.0;
                          for (const auto& a : cp.atoms)
                            if (a.size > 0.0) s += a.rate * std::pow(std::min(a.size, eps), 2);
                          return s;
                        },
                        [&](const TruncatedStable& ts) {
                          const double m = std::min(eps, 1.0);
                          double s = ts.scale * std::pow(m, 2.0 - ts.alpha) / (2.0 - ts.alpha);
                          if (eps < 1.0) s += eps * eps * positive_tail(f, eps);
                          return s;
                        },
                        [&](const Mixture& mx) {
                          double s = 0.0;
                          for (const auto& q : mx.parts) s += positive_clipped_square(q, eps);
                          return s;
                        },
                    },
                    f.kind);
}

double positive_excess(const JumpFamily& f, double eps) {
  return std::visit(Overloaded{
                        [](const NoJumps&) { return 0.0; },
                        [&](const CompoundPoisson& cp) {
                          double s = 0.0;
                          for (const auto& a : cp.atoms)
                            if (a.size > eps) s += a.rate * (a.size - eps);
                          return s;
                        },
                        [&](const TruncatedStable& ts) {
                          if (eps >= 1.0) return 0.0;
                          const double first = one_minus_power_ratio(ts.alpha, std::log(eps));
                          return ts.scale * first - eps * positive_tail(f, eps);
                        },
                        [&](const Mixture& mx) {
                          double s = 0.0;
                          for (const auto& q : mx.parts) s += positive_excess(q, eps);
                          return s;
                        },
                    },
                    f.kind);
}

bool is_symmetric(const JumpFamily& f) {
  SignedMasses m;
  collect(f, m);
  for (const auto& [size, net] : m.atoms)
    if (std::abs(net) > 1e-12 * std::max(1.0, std::abs(net))) return false;
  for (const auto& [alpha, sides] : m.stable)
    if (std::abs(sides.first - sides.second) > 1e-12 * sides.first) return false;
  return true;
}

JumpFamily symmetrized(const JumpFamily& f) {
  return std::visit(Overloaded{
                        [](const NoJumps&) { return JumpFamily(NoJumps{}); },
                        [](const CompoundPoisson& cp) {
                          CompoundPoisson out;
                          for (const auto& a : cp.atoms) {
                            out.atoms.push_back(a);
                            out.atoms.push_back({-a.size, a.rate});
                          }
                          return JumpFamily(std::move(out));
                        },
                        [](const TruncatedStable& ts) {
                          return JumpFamily(TruncatedStable{
                              ts.alpha, ts.symmetric ? 2.0 * ts.scale : ts.scale, true});
                        },
                        [](const Mixture& mx) {
                          Mixture out;
                          for (const auto& q : mx.parts) out.parts.push_back(symmetrized(q));
                          return JumpFamily(std::move(out));
                        },
                    },
                    f.kind);
}

std::vector<double> positive_breakpoints(const JumpFamily& f) {
  std::vector<double> out;
  std::visit(Overloaded{
                 [](const NoJumps&) {},
                 [&](const CompoundPoisson& cp) {
                   for (const auto& a : cp.atoms)
                     if (a.size > 0.0 && a.rate > 0.0) out.push_back(a.size);
                 },
                 [&](const TruncatedStable&) { out.push_back(1.0); },
                 [&](const Mixture& mx) {
                   for (const auto& q : mx.parts) {
                     auto b = positive_breakpoints(q);
                     out.insert(out.end(), b.begin(), b.end());
                   }
                 },
             },
             f.kind);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool has_jumps(const JumpFamily& f) {
  return std::visit(Overloaded{
                        [](const NoJumps&) { return false; },
                        [](const CompoundPoisson& cp) {
                          return std::any_of(cp.atoms.begin(), cp.atoms.end(),
                                             [](const Atom& a) { return a.rate > 0.0; });
                        },
                        [](const TruncatedStable&) { return true; },
                        [](const Mixture& mx) {
                          return std::any_of(mx.parts.begin(), mx.parts.end(),
                                             [](const JumpFamily& q) { return has_jumps(q); });
                        },
                    },
                    f.kind);
}

LevyModel LevyModel::make(double sigma, double gamma, JumpFamily jumps, bool centered) {
  require(std::isfinite(sigma) && sigma >= 0.0, ErrorCode::InvalidParameter,
          "sigma must be finite and >= 0");
  require(std::isfinite(gamma), ErrorCode::InvalidParameter, "gamma must be finite");
  validate(jumps);
  LevyModel m;
  m.sigma_ = sigma;
  m.centered_ = centered;
  const double cm = cutoff_mean(jumps);
  if (centered) {
    require(std::isfinite(levy::second_moment(jumps)), ErrorCode::Unsupported,
            "centering requires a finite-variance jump family");
    m.mean_ = 0.0;
    m.gamma_ = -cm;
  } else {
    m.gamma_ = gamma;
    m.mean_ = gamma + cm;
  }
  m.jumps_ = std::move(jumps);
  return m;
}

double LevyModel::variance() const { return sigma_ + levy::second_moment(jumps_); }

double LevyModel::second_moment() const { return variance() + mean_ * mean_; }

bool LevyModel::is_symmetric() const { return mean_ == 0.0 && levy::is_symmetric(jumps_); }

double tail_mass(const LevyModel& m, double x) {
  require(x > 0.0, ErrorCode::InvalidParameter, "tail_mass needs x > 0");
  return positive_tail(m.jumps(), x);
}

double abs_moment(const LevyModel& m, double p, double lo, double hi) {
  require(p > 0.0, ErrorCode::InvalidParameter, "abs_moment needs p > 0");
  require(lo >= 0.0 && hi > lo, ErrorCode::InvalidParameter, "abs_moment needs 0 <= lo < hi");
  return abs_moment(m.jumps(), p, lo, hi);
}

nlohmann::json to_json(const JumpFamily& f) {
  using nlohmann::json;
  return std::visit(Overloaded{
                        [](const NoJumps&) { return json{{"type", "none"}}; },
                        [](const CompoundPoisson& cp) {
                          json atoms = json::array();
                          for (const auto& a : cp.atoms) atoms.push_back({{"size", a.size}, {"rate", a.rate}});
                          return json{{"type", "compound_poisson"}, {"atoms", atoms}};
                        },
                        [](const TruncatedStable& ts) {
                          return json{{"type", "truncated_stable"},
                                      {"alpha", ts.alpha},
                                      {"scale", ts.scale},
                                      {"symmetric", ts.symmetric}};
                        },
                        [](const Mixture& mx) {
                          json parts = json::array();
                          for (const auto& q : mx.parts) parts.push_back(to_json(q));
                          return json{{"type", "mixture"}, {"components", parts}};
                        },
                    },
                    f.kind);
}

namespace {

JumpFamily family_from_list(const nlohmann::json& list) {
  if (list.empty()) return NoJumps{};
  if (list.size() == 1) return jump_family_from_json(list[0]);
  Mixture mx;
  for (const auto& e : list) mx.parts.push_back(jump_family_from_json(e));
  return mx;
}

template <class F>
auto parse_guard(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("model JSON: ") + e.what());
  }
}

}  // namespace

JumpFamily jump_family_from_json(const nlohmann::json& j) {
  return parse_guard([&]() -> JumpFamily {
    const std::string type = j.at("type").get<std::string>();
    if (type == "none") return NoJumps{};
    if (type == "compound_poisson") {
      CompoundPoisson cp;
      for (const auto& a : j.at("atoms"))
        cp.atoms.push_back({a.at("size").get<double>(), a.at("rate").get<double>()});
      return cp;
    }
    if (type == "truncated_stable")
      return TruncatedStable{j.at("alpha").get<double>(), j.value("scale", 1.0),
                             j.value("symmetric", true)};
    if (type == "mixture") {
      Mixture mx;
      for (const auto& e : j.at("components")) mx.parts.push_back(jump_family_from_json(e));
      return mx;
    }
    throw Error(ErrorCode::Parse, "unknown jump family type '" + type + "'");
  });
}

nlohmann::json to_json(const LevyModel& m) {
  nlohmann::json jumps = nlohmann::json::array();
  if (const auto* mx = std::get_if<Mixture>(&m.jumps().kind)) {
    for (const auto& q : mx->parts) jumps.push_back(to_json(q));
  } else if (!std::holds_alternative<NoJumps>(m.jumps().kind)) {
    jumps.push_back(to_json(m.jumps()));
  }
  return {{"sigma", m.sigma()}, {"gamma", m.gamma()}, {"mean_zero", m.centered()}, {"jumps", jumps}};
}

LevyModel model_from_json(const nlohmann::json& j) {
  auto [sigma, gamma, centered, family] = parse_guard([&] {
    require(j.is_object(), ErrorCode::Parse, "model JSON must be an object");
    const auto jumps = j.value("jumps", nlohmann::json::array());
    require(jumps.is_array(), ErrorCode::Parse, "model JSON: 'jumps' must be an array");
    return std::tuple{j.value("sigma", 0.0), j.value("gamma", 0.0), j.value("mean_zero", true),
                      family_from_list(jumps)};
  });
  return LevyModel::make(sigma, gamma, std::move(family), centered);
}

}  // namespace flevy::levy
