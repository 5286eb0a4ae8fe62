#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "orbitlink/config.hpp"
#include "orbitlink/fixtures.hpp"
#include "orbitlink/runner.hpp"
#include "orbitlink/system_io.hpp"

using namespace orbitlink;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("orbitlink_runner_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string message_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config: minimal document and defaults") {
  const auto cfg = parse_config(R"({"fixture": "golden-mean", "operation": "pressure"})");
  CHECK(cfg.version == 1);
  CHECK(cfg.seed == 1);
  CHECK(cfg.threads == 1);
  CHECK(cfg.params.empty());
  const auto back = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(back) == config_to_json(cfg));
}

TEST_CASE("config: rejects unknown keys with their path") {
  CHECK(message_of(R"({"fixture": "golden-mean", "operation": "pressure", "colour": 1})").find("'colour'") !=
        std::string::npos);
  CHECK(message_of(R"({"fixture": "golden-mean", "operation": "pressure", "params": {"T": 3}})")
            .find("'params.T'") != std::string::npos);
  CHECK(message_of(R"({"fixture": "golden-mean", "operation": "pressure", "verify": {"band": [0, 1]}})")
            .find("'verify.band'") != std::string::npos);
}

TEST_CASE("config: malformed JSON reports the line") {
  const std::string text = "{\n  \"fixture\": \"golden_mean\",\n  \"operation\": \"pressure\"\n  \"seed\": 3\n}\n";
  const auto msg = message_of(text);
  CHECK(msg.find("line 4") != std::string::npos);
}

TEST_CASE("config: value checks") {
  const std::string head = R"({"fixture": "symmetric-mixing", "operation": "count", "params": )";
  CHECK(message_of(head + R"({"T_grid": [10, 9]}})").find("increasing") != std::string::npos);
  CHECK(message_of(head + R"({"T_grid": [10], "offset": [0, -1]}})").find("lo < hi") != std::string::npos);
  CHECK(message_of(head + R"({"T_grid": [10], "alpha": [0, 0]}})").find("1 components") != std::string::npos);
  CHECK(message_of(head + R"({"T_grid": [10], "potential": [1, 2]}})").find("4 values") != std::string::npos);
  CHECK(message_of(head + R"({"T_grid": [10], "potential": {"indicator": 9}}})").find("out of range") !=
        std::string::npos);
  CHECK(message_of(R"({"operation": "helicity", "verify": {"grid_tolerance": -1}})").find("positive") !=
        std::string::npos);
  CHECK(message_of(R"({"operation": "count", "params": {"T_grid": [10]}})").find("'fixture'") != std::string::npos);
  CHECK(message_of(R"({"fixture": "nope", "operation": "pressure"})").find("unknown fixture") != std::string::npos);
  CHECK(message_of(R"({"fixture": "golden-mean", "operation": "warp"})").find("unknown operation") !=
        std::string::npos);
  CHECK(message_of(R"({"operation": "link", "params": {"pairs": [["0.2", "1"]]}})").find("symbols 0 and 1") !=
        std::string::npos);
  CHECK(message_of(R"({"version": 2, "operation": "helicity"})").find("version") != std::string::npos);
}

TEST_CASE("config: grids expand from/to/step") {
  const auto cfg = parse_config(
      R"({"fixture": "symmetric-mixing", "operation": "count", "params": {"T_grid": {"from": 6, "to": 8, "step": 0.5}}})");
  CHECK(cfg.params["T_grid"].get<std::vector<double>>() == std::vector<double>{6, 6.5, 7, 7.5, 8});
}

TEST_CASE("config: edge-function forms") {
  const auto sys = fixtures::symmetric_mixing();
  const json p = json::parse(R"({"a": [1, 2, 3, 4], "b": {"indicator": 2}, "c": {"constant": 0.5}, "d": {"scale": 2}})");
  const EdgeFunction fallback = EdgeFunction::constant(4, 7.0);
  CHECK(edge_function_param(p, "a", sys, fallback).values() == std::vector<double>{1, 2, 3, 4});
  CHECK(edge_function_param(p, "b", sys, fallback).values() == std::vector<double>{0, 0, 1, 0});
  CHECK(edge_function_param(p, "c", sys, fallback).values() == std::vector<double>(4, 0.5));
  CHECK(edge_function_param(p, "d", sys, fallback).values() == (sys.potential() * 2.0).values());
  CHECK(edge_function_param(p, "missing", sys, fallback).values() == fallback.values());
}

TEST_CASE("config: system files as fixtures") {
  const auto dir = scratch("sysfile");
  fs::create_directories(dir);
  const auto path = (dir / "g.json").string();
  std::ofstream(path) << system_to_json(fixtures::golden_mean());
  const auto cfg = config_from_json(json{{"fixture", path}, {"operation", "pressure"}});
  CHECK(resolve_fixture(cfg.fixture).shift().edge_count() == 3);
  CHECK_THROWS_AS(resolve_fixture((dir / "absent.json").string()), ConfigError);
}

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("run: golden-mean pressure table and manifest") {
  const auto dir = scratch("pressure");
  auto cfg = parse_config(R"({"fixture": "golden-mean", "operation": "pressure",
                              "verify": {"expected": 0.48121182505960347, "tolerance": 1e-10}})");
  RunOptions opts;
  opts.out_dir = dir.string();
  opts.verify = true;
  const auto r = run(cfg, opts);
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.files == std::vector<std::string>{"pressure.csv"});
  std::istringstream csv(slurp(dir / "pressure.csv"));
  std::string header, line;
  std::getline(csv, header);
  std::getline(csv, line);
  CHECK(header == "fixture,pressure");
  const double P = std::stod(line.substr(line.find(',') + 1));
  CHECK(P == doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-11));
  CHECK(line.substr(line.find(',') + 1) == "0.48121182506");

  const json m = json::parse(slurp(dir / "manifest.json"));
  CHECK(m["status"] == "ok");
  CHECK(m["files"][0]["sha256"] == sha256_file((dir / "pressure.csv").string()));
  CHECK(m["config"]["output_dir"] == dir.string());
  CHECK(m["checks"][0]["passed"] == true);
  CHECK(m.contains("wall_seconds"));
  CHECK(m["stages"].size() >= 1);
}

TEST_CASE("run: failed verification exits nonzero") {
  const auto dir = scratch("verify_fail");
  auto cfg = parse_config(R"({"fixture": "golden-mean", "operation": "pressure", "verify": {"expected": 0.5}})");
  RunOptions opts;
  opts.out_dir = dir.string();
  CHECK(run(cfg, opts).exit_code == 0);  // assertions only with verify
  opts.verify = true;
  const auto r = run(cfg, opts);
  CHECK(r.exit_code == 1);
  REQUIRE(r.checks.size() == 1);
  CHECK_FALSE(r.checks[0].passed);
}

TEST_CASE("run: unknown fixture is a validation error") {
  const auto dir = scratch("bad");
  fs::create_directories(dir);
  std::ofstream(dir / "cfg.json") << R"({"fixture": "nope", "operation": "pressure"})";
  const auto r = run_file((dir / "cfg.json").string());
  CHECK(r.exit_code == 2);
  CHECK(r.error.find("unknown fixture") != std::string::npos);
}

TEST_CASE("run: errors during a run leave a failed manifest") {
  const auto dir = scratch("runtime_fail");
  // beta needs a homologically full system
  auto cfg = parse_config(R"({"fixture": "positive-labels", "operation": "beta"})");
  RunOptions opts;
  opts.out_dir = dir.string();
  const auto r = run(cfg, opts);
  CHECK(r.exit_code == 1);
  const json m = json::parse(slurp(dir / "manifest.json"));
  CHECK(m["status"] == "failed");
  CHECK(m["error"].get<std::string>().size() > 0);
  CHECK(m["files"].empty());
}

TEST_CASE("run: repeat runs, thread counts and replay give identical checksums") {
  const auto cfg = parse_config(R"({"fixture": "symmetric-mixing", "operation": "count",
                                    "params": {"alpha": [0], "T_grid": [6, 7, 8]}, "seed": 5})");
  RunOptions a, b;
  a.out_dir = scratch("rep_a").string();
  b.out_dir = scratch("rep_b").string();
  b.threads = 4;
  const auto ra = run(cfg, a), rb = run(cfg, b);
  REQUIRE(ra.exit_code == 0);
  CHECK(ra.checksums == rb.checksums);
  const auto rr = replay(ra.manifest_path, scratch("rep_c").string());
  CHECK(rr.exit_code == 0);
  CHECK(rr.checksums == ra.checksums);
  REQUIRE_FALSE(rr.checks.empty());
  CHECK(rr.checks.back().passed);
}

TEST_CASE("run: environment override of the output directory") {
  const auto dir = scratch("env");
  setenv("ORBITLINK_OUT", dir.string().c_str(), 1);
  const auto r = run(parse_config(R"({"fixture": "golden-mean", "operation": "pressure", "output_dir": "elsewhere"})"));
  unsetenv("ORBITLINK_OUT");
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "pressure.csv"));
}

TEST_CASE("run: operations emit their tables") {
  struct Case {
    const char* config;
    std::vector<std::string> files;
  };
  const std::vector<Case> cases{
      {R"({"fixture": "full-two-shift", "operation": "orbits", "params": {"max_word": 8}, "verify": {"moebius": true}})",
       {"orbits.csv", "counts.csv"}},
      {R"({"fixture": "symmetric", "operation": "beta", "verify": {"xi": [0], "beta": 0.69314718055994531}})",
       {"beta.csv"}},
      {R"({"fixture": "full-two-shift", "operation": "count", "params": {"T_grid": [10, 11, 12]},
            "verify": {"max_error": 0.3}})",
       {"growth.csv"}},
      {R"({"fixture": "symmetric-mixing", "operation": "equidistribute", "params": {"T_grid": [7, 8]},
            "verify": {"tail_decreasing": false}})",
       {"equidistribute.csv"}},
      {R"({"fixture": "symmetric-mixing", "operation": "ld", "params": {"T_grid": [7, 8, 9]}})", {"ld.csv", "ld_fit.csv"}},
      {R"({"operation": "link", "params": {"pairs": [["0.1", "0.0.1"]]}, "verify": {}})", {"link.csv"}},
      {R"({"operation": "lambda-scan", "params": {"pairs": 2000}})", {"lambda_scan.csv", "lambda_summary.csv"}},
      {R"({"operation": "helicity", "params": {"grids": [8, 16, 32]},
            "verify": {"check_grid": 16, "grid_tolerance": 0.05}})",
       {"helicity.csv"}},
      {R"({"fixture": "lorenz-template", "operation": "average-link", "params": {"T_grid": [4, 5]}})",
       {"average_link.csv"}},
  };
  int k = 0;
  for (const auto& c : cases) {
    const std::string text = c.config;
    CAPTURE(text);
    RunOptions opts;
    opts.out_dir = scratch("op" + std::to_string(k++)).string();
    opts.verify = true;
    const auto r = run(parse_config(text), opts);
    std::string failed;
    for (const auto& check : r.checks)
      if (!check.passed) failed += check.name + " (" + check.detail + ") ";
    CHECK(failed == "");
    CHECK(r.error == "");
    CHECK(r.exit_code == 0);
    CHECK(r.files == c.files);
  }
}

TEST_CASE("run: link on a repeated orbit is rejected") {
  RunOptions opts;
  opts.out_dir = scratch("link_same").string();
  const auto r = run(parse_config(R"({"operation": "link", "params": {"pairs": [["0.1", "1.0"]]}})"), opts);
  CHECK(r.exit_code == 2);
}
