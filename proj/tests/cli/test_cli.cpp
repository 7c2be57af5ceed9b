#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "flevy_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(FLEVY_CLI) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path put(const std::string& name, const std::string& contents) {
  fs::create_directories(kRoot);
  const auto p = kRoot / name;
  std::ofstream(p) << contents;
  return p;
}

// Hash from the system tool, independent of the library's.
std::string sha256sum(const fs::path& p) {
  const std::string cmd = "sha256sum '" + p.string() + "'";
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f != nullptr);
  char buf[128] = {};
  const bool ok = std::fgets(buf, sizeof buf, f) != nullptr;
  pclose(f);
  REQUIRE(ok);
  return std::string(buf).substr(0, 64);
}

const char* kBrownian = R"({"sigma": 1.0, "mean_zero": true, "jumps": []})";

}  // namespace

TEST_CASE("check: Brownian driver is infinite variation, exit 3") {
  const auto model = put("bm.json", kBrownian);
  const auto out = kRoot / "check_bm";
  CHECK(run("check --model " + model.string() + " --out " + out.string()) == 3);
  CHECK(json::parse(slurp(out / "check.json"))["verdict"] == "InfiniteVariation");
  CHECK(run("check --out " + (kRoot / "check_cpp").string()) == 0);
}

TEST_CASE("usage errors exit 2") {
  const auto bad = put("bad.json", "{\"d\": ");
  CHECK(run("verify --config " + bad.string()) == 2);
  CHECK(run("check --config " + (kRoot / "missing.json").string()) == 2);
  CHECK(run("check --d 0.5 --out " + (kRoot / "x").string()) == 2);
  CHECK(run("check --no-such-flag") == 2);
  CHECK(run("") == 2);
  CHECK(run("tv --interval 1 --out " + (kRoot / "x").string()) == 2);
  const auto badmodel = put("badmodel.json", R"({"jumps":[{"type":"gamma"}]})");
  CHECK(run("check --model " + badmodel.string() + " --out " + (kRoot / "x").string()) == 2);
}

TEST_CASE("simulate: zero paths give an empty manifest") {
  const auto out = kRoot / "sim0";
  fs::remove_all(out);
  REQUIRE(run("simulate --paths 0 --out " + out.string()) == 0);
  const auto m = json::parse(slurp(out / "manifest.json"));
  CHECK(m["command"] == "simulate");
  CHECK(m["files"].empty());
  CHECK(std::distance(fs::directory_iterator(out), fs::directory_iterator{}) == 1);
}

TEST_CASE("simulate: manifest hashes, flags override the config, byte-identical reruns") {
  const auto cfg = put("sim.json", R"({"d": 0.2, "paths": 5, "step": 0.0625, "seed": 4})");
  const auto a = kRoot / "sim_a", b = kRoot / "sim_b";
  fs::remove_all(a);
  fs::remove_all(b);
  REQUIRE(run("simulate --config " + cfg.string() + " --paths 2 --kind well_balanced --out " + a.string()) == 0);
  REQUIRE(run("simulate --config " + cfg.string() + " --paths 2 --kind well_balanced --out " + b.string()) == 0);
  const auto m = json::parse(slurp(a / "manifest.json"));
  CHECK(m["config"]["d"] == 0.2);
  CHECK(m["config"]["paths"] == 2);
  CHECK(m["config"]["kind"] == "well_balanced");
  REQUIRE(m["files"].size() == 4);
  for (const auto& f : m["files"]) {
    const auto p = a / f["name"].get<std::string>();
    CHECK(f["sha256"] == sha256sum(p));
    CHECK(f["bytes"] == fs::file_size(p));
    CHECK(slurp(p) == slurp(b / f["name"].get<std::string>()));
  }
  CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
  const std::string csv = slurp(a / "path_0000.csv");
  CHECK(csv.rfind("t,x\n0,0\n", 0) == 0);
  CHECK(csv.find("0.0625,") != std::string::npos);
  CHECK(json::parse(slurp(a / "path_0001.json"))["kernel"] == "well_balanced");
}

TEST_CASE("tv: constant path file has zero variation at every depth") {
  std::string csv = "t,x\n";
  for (int i = 0; i <= 16; ++i) csv += std::to_string(i / 16.0) + ",3.5\n";
  const auto in = put("const.csv", csv);
  const auto out = kRoot / "tv_const";
  REQUIRE(run("tv --input " + in.string() + " --depth 4 --interval 0:1 --out " + out.string()) == 0);
  const auto r = json::parse(slurp(out / "tv.json"))["report"];
  CHECK(r["tv_by_depth"].size() == 4);
  for (const auto& e : r["tv_by_depth"]) CHECK(e["tv"] == 0.0);
  CHECK(r["converged"] == true);
  CHECK(run("tv --input " + in.string() + " --depth 5 --out " + out.string()) == 2);
}

TEST_CASE("tv: simulated paths with the expected-TV side estimate") {
  const auto out = kRoot / "tv_sim";
  REQUIRE(run("tv --paths 4 --depth 6 --mc 100 --out " + out.string()) == 0);
  const auto j = json::parse(slurp(out / "tv.json"));
  CHECK(j["per_path"].size() == 4);
  CHECK(j["expected_tv"]["finite"] == true);
  CHECK(slurp(out / "tv.csv").rfind("n,tv\n1,", 0) == 0);
}

TEST_CASE("bounds: dominance suite on the default model") {
  const auto cfg = put("bounds.json", R"({"bounds": {"eps": [1.0], "d": [0.25], "r": [-1.0], "a": [1.0],
                                          "t": [1.0], "mc_draws": 500, "fd_paths": 10, "fd_depth": 6}})");
  const auto out = kRoot / "bounds";
  REQUIRE(run("bounds --config " + cfg.string() + " --out " + out.string()) == 0);
  const auto j = json::parse(slurp(out / "bounds.json"));
  CHECK(j["all_pass"] == true);
  CHECK(j["failures"] == 0);
}

TEST_CASE("verify: Brownian expected-TV check is marked pass as expected-infinite") {
  const auto cfg = put("verify_bm.json", std::string(R"({"model": )") + kBrownian +
                                             R"(, "verify": {"criteria": ["C3"]}})");
  const auto out = kRoot / "verify_bm";
  REQUIRE(run("verify --config " + cfg.string() + " --out " + out.string()) == 0);
  const auto s = json::parse(slurp(out / "summary.json"));
  CHECK(s["all_pass"] == true);
  CHECK(s["criteria"][0]["metrics"]["outcome"] == "expected-infinite");
  CHECK(s["criteria"][0]["metrics"]["verdict"] == "InfiniteVariation");
  const auto m = json::parse(slurp(out / "manifest.json"));
  for (const auto& f : m["files"]) CHECK(f["name"] != "timings.json");
  CHECK(fs::exists(out / "timings.json"));
}

TEST_CASE("verify: a failing criterion exits 1") {
  const auto cfg = put("verify_fail.json", R"({"verify": {"criteria": ["C2", "C5"], "lattice": 3,
                                             "variance_reps": 20, "slope_tol": 1e-9}})");
  CHECK(run("verify --config " + cfg.string() + " --out " + (kRoot / "verify_fail").string()) == 1);
}

TEST_CASE("FLEVY_THREADS does not change outputs") {
  const auto cfg = put("threads.json", R"({"verify": {"criteria": ["C1", "C8"], "decomposition_paths": 4,
                                          "ks_paths": 40}})");
  const auto a = kRoot / "thr_a", b = kRoot / "thr_b";
  REQUIRE(run("verify --config " + cfg.string() + " --out " + a.string()) == 0);
  const std::string cmd = "FLEVY_THREADS=1 " + std::string(FLEVY_CLI) + " verify --config " + cfg.string() +
                          " --out " + b.string() + " >/dev/null 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
}
