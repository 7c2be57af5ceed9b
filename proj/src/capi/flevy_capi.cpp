#include "flevy/flevy.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"
#include "criterion/fv_criterion.hpp"
#include "idbounds/bounds.hpp"
#include "levy/increments.hpp"
#include "synth/synthesize.hpp"
#include "variation/estimators.hpp"
#include "variation/tv.hpp"

struct flevy_model {
  flevy::levy::LevyModel m;
};

struct flevy_config {
  flevy::app::RunConfig c;
};

struct flevy_path {
  flevy::synth::FlpPath p;
};

namespace {

thread_local std::string g_error;

flevy_status fail(flevy_status s, const std::string& msg) {
  g_error = msg;
  return s;
}

template <class F>
flevy_status guard(F&& f) {
  try {
    f();
    g_error.clear();
    return FLEVY_OK;
  } catch (const flevy::Error& e) {
    return fail(static_cast<flevy_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(FLEVY_PARSE_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FLEVY_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(FLEVY_INTERNAL_ERROR, e.what());
  }
}

#define FLEVY_REQUIRE_ARGS(cond) \
  if (!(cond)) return fail(FLEVY_INVALID_PARAMETER, "null argument")

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

flevy::synth::KernelKind kind_of(flevy_kernel k) {
  switch (k) {
    case FLEVY_NON_ANTICIPATIVE: return flevy::synth::KernelKind::NonAnticipative;
    case FLEVY_WELL_BALANCED: return flevy::synth::KernelKind::WellBalanced;
    case FLEVY_TAIL_PART: return flevy::synth::KernelKind::TailPart;
    case FLEVY_RIEMANN_LIOUVILLE: return flevy::synth::KernelKind::RiemannLiouville;
  }
  throw flevy::Error(flevy::ErrorCode::InvalidParameter, "unknown kernel kind");
}

}  // namespace

extern "C" {

const char* flevy_version(void) { return "1.0.0"; }

const char* flevy_last_error(void) { return g_error.c_str(); }

const char* flevy_status_string(flevy_status s) {
  if (s == FLEVY_OK) return "ok";
  return flevy::to_string(static_cast<flevy::ErrorCode>(s));
}

void flevy_set_threads(unsigned n) { flevy::set_thread_limit(n); }

void flevy_string_free(char* s) { std::free(s); }

flevy_status flevy_model_from_json(const char* json, flevy_model** out) {
  FLEVY_REQUIRE_ARGS(json && out);
  *out = nullptr;
  return guard([&] {
    auto j = nlohmann::json::parse(json, nullptr, false);
    flevy::require(!j.is_discarded(), flevy::ErrorCode::Parse, "model: malformed JSON");
    *out = new flevy_model{flevy::levy::model_from_json(j)};
  });
}

flevy_status flevy_model_to_json(const flevy_model* m, char** out) {
  FLEVY_REQUIRE_ARGS(m && out);
  return guard([&] { *out = dup_string(flevy::levy::to_json(m->m).dump()); });
}

void flevy_model_free(flevy_model* m) { delete m; }

flevy_status flevy_model_moments(const flevy_model* m, double* mean, double* variance) {
  FLEVY_REQUIRE_ARGS(m && mean && variance);
  return guard([&] {
    *mean = m->m.mean();
    *variance = m->m.variance();
  });
}

flevy_status flevy_tail_mass(const flevy_model* m, double x, double* out) {
  FLEVY_REQUIRE_ARGS(m && out);
  return guard([&] { *out = flevy::levy::tail_mass(m->m, x); });
}

flevy_status flevy_abs_moment(const flevy_model* m, double p, double lo, double hi, double* out) {
  FLEVY_REQUIRE_ARGS(m && out);
  return guard([&] { *out = flevy::levy::abs_moment(m->m, p, lo, hi); });
}

flevy_status flevy_sample_increments(const flevy_model* m, double r_min, double t_max, double h, uint64_t seed,
                                     double* out, size_t capacity, size_t* n_out) {
  FLEVY_REQUIRE_ARGS(m && n_out);
  return guard([&] {
    const flevy::levy::IncrementGrid grid(r_min, t_max, h);
    *n_out = grid.cell_count();
    flevy::require(out && capacity >= grid.cell_count(), flevy::ErrorCode::InvalidParameter,
                   "output buffer too small");
    const auto p = flevy::levy::sample_increments(m->m, grid, seed);
    std::memcpy(out, p.increments.data(), p.increments.size() * sizeof(double));
  });
}

flevy_status flevy_fv_criterion(const flevy_model* m, double d, int* finite, double* moment) {
  FLEVY_REQUIRE_ARGS(m && finite);
  return guard([&] {
    const auto r = flevy::criterion::fv_criterion(m->m, d);
    *finite = r.verdict == flevy::criterion::Verdict::FiniteVariation;
    if (moment) *moment = r.moment_value;
  });
}

flevy_status flevy_criterion_json(const flevy_model* m, double d, char** out) {
  FLEVY_REQUIRE_ARGS(m && out);
  return guard([&] { *out = dup_string(flevy::criterion::to_json(flevy::criterion::fv_criterion(m->m, d)).dump()); });
}

flevy_status flevy_stable_threshold(double d, double* out) {
  FLEVY_REQUIRE_ARGS(out);
  return guard([&] { *out = flevy::criterion::stable_threshold(d); });
}

flevy_status flevy_kernel_weight(flevy_kernel kind, double d, double t, double s, double* out) {
  FLEVY_REQUIRE_ARGS(out);
  return guard([&] { *out = flevy::synth::kernel_weight({kind_of(kind), d}, t, s); });
}

flevy_status flevy_truncation_radius(double d, double t_max, double second_moment, double tol, double* out) {
  FLEVY_REQUIRE_ARGS(out);
  return guard([&] { *out = flevy::synth::truncation_radius(d, t_max, second_moment, tol); });
}

flevy_status flevy_synthesize(const flevy_model* m, flevy_kernel kind, double d, double t_max, double h,
                              double tol, uint64_t seed, flevy_path** out) {
  FLEVY_REQUIRE_ARGS(m && out);
  *out = nullptr;
  return guard([&] {
    const auto k = kind_of(kind);
    const auto plan = flevy::synth::plan_grid(k, d, t_max, h, m->m.second_moment(), tol);
    std::vector<double> times;
    for (std::size_t i = plan.grid.zero_index(); i < plan.grid.node_count(); ++i)
      if (plan.grid.node(i) <= t_max * (1.0 + 1e-12)) times.push_back(plan.grid.node(i));
    const auto path = flevy::levy::sample_increments(m->m, plan.grid, seed, plan.tails);
    *out = new flevy_path{flevy::synth::synthesize(path, {k, d}, times)};
  });
}

size_t flevy_path_length(const flevy_path* p) { return p ? p->p.times.size() : 0; }

flevy_status flevy_path_data(const flevy_path* p, double* times, double* values, size_t capacity) {
  FLEVY_REQUIRE_ARGS(p);
  const std::size_t n = p->p.times.size();
  if (capacity < n) return fail(FLEVY_INVALID_PARAMETER, "output buffer too small");
  if (times) std::memcpy(times, p->p.times.data(), n * sizeof(double));
  if (values) std::memcpy(values, p->p.values.data(), n * sizeof(double));
  g_error.clear();
  return FLEVY_OK;
}

flevy_status flevy_path_truncation_error(const flevy_path* p, double* out) {
  FLEVY_REQUIRE_ARGS(p && out);
  *out = p->p.truncation_error;
  g_error.clear();
  return FLEVY_OK;
}

void flevy_path_free(flevy_path* p) { delete p; }

flevy_status flevy_dyadic_tv(const double* values, size_t n, int depth, double* out) {
  FLEVY_REQUIRE_ARGS(values && out);
  return guard([&] { *out = flevy::variation::dyadic_tv({values, n}, depth); });
}

flevy_status flevy_expected_tv(const flevy_model* m, double d, double a, double b, size_t draws, uint64_t seed,
                               double* estimate, double* std_error) {
  FLEVY_REQUIRE_ARGS(m && estimate && std_error);
  return guard([&] {
    const auto e = flevy::variation::expected_tv(m->m, d, a, b, draws, seed);
    *estimate = e.estimate;
    *std_error = e.std_error;
  });
}

flevy_status flevy_mean_abs_bound(const flevy_model* m, double eps, double* out) {
  FLEVY_REQUIRE_ARGS(m && out);
  return guard([&] { *out = flevy::idbounds::mean_abs_bound(m->m, eps); });
}

flevy_status flevy_nu_rt_tail(const flevy_model* m, double r, double t, double d, double u, double* out) {
  FLEVY_REQUIRE_ARGS(m && out);
  return guard([&] { *out = flevy::idbounds::nu_rt_tail({m->m, r, t, d}, u); });
}

flevy_status flevy_bound_c2(const flevy_model* m, double d, double r, double a, double* lhs, double* rhs) {
  FLEVY_REQUIRE_ARGS(m && lhs && rhs);
  return guard([&] {
    const auto b = flevy::idbounds::bound_c2(m->m, d, r, a);
    *lhs = b.lhs;
    *rhs = b.rhs;
  });
}

flevy_status flevy_bound_c3(const flevy_model* m, double d, double r, double a, double* lhs, double* rhs) {
  FLEVY_REQUIRE_ARGS(m && lhs && rhs);
  return guard([&] {
    const auto b = flevy::idbounds::bound_c3(m->m, d, r, a);
    *lhs = b.lhs;
    *rhs = b.rhs;
  });
}

flevy_status flevy_fd_tv_bound(const flevy_model* m, double d, double b, double* out) {
  FLEVY_REQUIRE_ARGS(m && out);
  return guard([&] { *out = flevy::idbounds::fd_tv_bound(m->m, d, b); });
}

flevy_status flevy_config_from_json(const char* json, flevy_config** out) {
  FLEVY_REQUIRE_ARGS(json && out);
  *out = nullptr;
  return guard([&] {
    auto j = nlohmann::json::parse(json, nullptr, false);
    flevy::require(!j.is_discarded(), flevy::ErrorCode::Parse, "config: malformed JSON");
    *out = new flevy_config{flevy::app::run_config_from_json(j)};
  });
}

flevy_status flevy_config_to_json(const flevy_config* c, char** out) {
  FLEVY_REQUIRE_ARGS(c && out);
  return guard([&] { *out = dup_string(flevy::app::to_json(c->c).dump()); });
}

void flevy_config_free(flevy_config* c) { delete c; }

flevy_status flevy_run_command(const char* command, const flevy_config* c, int* exit_code, char** report) {
  FLEVY_REQUIRE_ARGS(command && c && exit_code);
  if (report) *report = nullptr;
  return guard([&] {
    flevy::require(flevy::app::is_command(command), flevy::ErrorCode::InvalidParameter,
                   std::string("unknown command '") + command + "'");
    const auto r = flevy::app::run_command(command, c->c);
    *exit_code = r.exit_code;
    if (report) *report = dup_string(r.report);
  });
}

}  // extern "C"
