#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "flevy/flevy.h"

namespace {

constexpr int kUsage = 2;

struct Flags {
  std::string config;
  std::string model;
  std::optional<std::string> kind;
  std::optional<double> d, tmax, step, tol;
  std::optional<std::size_t> paths, mc;
  std::optional<int> depth;
  std::optional<std::string> interval;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> input;
  unsigned threads = 0;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "run configuration JSON");
  sub->add_option("--model", f.model, "model JSON (overrides the config's model)");
  sub->add_option("--d", f.d, "memory parameter in (0, 1/2)");
  sub->add_option("--seed", f.seed, "root seed");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--threads", f.threads, "worker cap (FLEVY_THREADS also applies)");
}

void add_synthesis(CLI::App* sub, Flags& f) {
  sub->add_option("--kind", f.kind, "non_anticipative | well_balanced | tail_part | riemann_liouville");
  sub->add_option("--tmax", f.tmax, "right end of the output window");
  sub->add_option("--step", f.step, "driver grid step");
  sub->add_option("--tol", f.tol, "L2 truncation tolerance");
  sub->add_option("--paths", f.paths, "number of paths");
}

std::optional<nlohmann::json> read_json(const std::string& file) {
  std::ifstream is(file);
  if (!is) {
    std::cerr << "cannot open " << file << "\n";
    return std::nullopt;
  }
  std::stringstream ss;
  ss << is.rdbuf();
  auto j = nlohmann::json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) {
    std::cerr << file << ": malformed JSON\n";
    return std::nullopt;
  }
  return j;
}

template <class T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional Levy process simulation and verification"};
  app.require_subcommand(1);
  Flags f;

  auto* simulate = app.add_subcommand("simulate", "synthesize sample paths to CSV");
  add_common(simulate, f);
  add_synthesis(simulate, f);

  auto* check = app.add_subcommand("check", "finite-variation criterion; exit 3 on infinite variation");
  add_common(check, f);

  auto* tv = app.add_subcommand("tv", "total variation along dyadic partitions");
  add_common(tv, f);
  add_synthesis(tv, f);
  tv->add_option("--depth", f.depth, "finest dyadic depth");
  tv->add_option("--interval", f.interval, "a:b");
  tv->add_option("--mc", f.mc, "draws for the expected-TV identity (0 disables)");
  tv->add_option("--input", f.input, "path CSV (t,x) to profile instead of simulating");

  auto* bounds = app.add_subcommand("bounds", "dominance suite for the model");
  add_common(bounds, f);

  auto* verify = app.add_subcommand("verify", "acceptance suite; exit 0 iff every criterion passes");
  add_common(verify, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  nlohmann::json cfg = nlohmann::json::object();
  if (!f.config.empty()) {
    auto j = read_json(f.config);
    if (!j || !j->is_object()) {
      if (j) std::cerr << f.config << ": config must be a JSON object\n";
      return kUsage;
    }
    cfg = *j;
  }
  if (!f.model.empty()) {
    auto j = read_json(f.model);
    if (!j) return kUsage;
    cfg["model"] = *j;
  }
  put(cfg, "kind", f.kind);
  put(cfg, "d", f.d);
  put(cfg, "t_max", f.tmax);
  put(cfg, "step", f.step);
  put(cfg, "tol", f.tol);
  put(cfg, "paths", f.paths);
  put(cfg, "mc", f.mc);
  put(cfg, "depth", f.depth);
  put(cfg, "seed", f.seed);
  put(cfg, "out_dir", f.out);
  put(cfg, "input", f.input);
  if (f.interval) {
    const auto colon = f.interval->find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument("missing ':'");
      cfg["interval"] = {std::stod(f.interval->substr(0, colon)), std::stod(f.interval->substr(colon + 1))};
    } catch (const std::exception&) {
      std::cerr << "--interval expects a:b\n";
      return kUsage;
    }
  }
  if (f.threads > 0) flevy_set_threads(f.threads);

  flevy_config* config = nullptr;
  if (flevy_config_from_json(cfg.dump().c_str(), &config) != FLEVY_OK) {
    std::cerr << "invalid config: " << flevy_last_error() << "\n";
    return kUsage;
  }
  int exit_code = kUsage;
  char* report = nullptr;
  const flevy_status s = flevy_run_command(command.c_str(), config, &exit_code, &report);
  flevy_config_free(config);
  if (s != FLEVY_OK) {
    std::cerr << flevy_status_string(s) << ": " << flevy_last_error() << "\n";
    return kUsage;
  }
  if (report) (exit_code == kUsage ? std::cerr : std::cout) << report;
  flevy_string_free(report);
  return exit_code;
}
