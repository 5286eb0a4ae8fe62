// orbitlink: run a configured experiment and write its tables and manifest.
//
//   orbitlink --config configs/pressure_golden.json --out out/p --verify
//   orbitlink replay out/p/manifest.json
//   orbitlink fixtures

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "orbitlink/config.hpp"
#include "orbitlink/fixtures.hpp"
#include "orbitlink/runner.hpp"
#include "orbitlink/system_io.hpp"

namespace {

void report(const orbitlink::RunResult& r) {
  for (const auto& c : r.checks) std::printf("%s %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
  if (!r.files.empty()) std::printf("wrote %zu table(s) to %s\n", r.files.size(), r.out_dir.c_str());
  if (!r.error.empty()) std::fprintf(stderr, "orbitlink: %s\n", r.error.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic-orbit counting, linking and helicity experiments"};
  app.set_version_flag("--version", std::string(orbitlink::library_version()));

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  bool verify = false;
  app.add_option("--config", config_path, "experiment config (JSON)")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides the config and ORBITLINK_OUT)");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed (overrides the config)");
  app.add_flag("--verify", verify, "evaluate the config's verify block; exit 1 if any check fails");

  auto* replay_cmd = app.add_subcommand("replay", "re-run a manifest and compare checksums")->fallthrough();
  std::string manifest;
  replay_cmd->add_option("manifest", manifest, "manifest.json of an earlier run")->required()->check(CLI::ExistingFile);

  auto* fixtures_cmd = app.add_subcommand("fixtures", "list registered fixtures");
  auto* export_cmd = app.add_subcommand("export", "print a fixture as a system file");
  std::string fixture_name;
  export_cmd->add_option("name", fixture_name, "fixture name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fixtures_cmd) {
      for (const auto& n : orbitlink::fixtures::names()) std::cout << n << '\n';
      return 0;
    }
    if (*export_cmd) {
      std::cout << orbitlink::system_to_json(orbitlink::fixtures::by_name(fixture_name)) << '\n';
      return 0;
    }
    if (*replay_cmd) {
      const auto r = orbitlink::replay(manifest, out_dir);
      report(r);
      return r.exit_code;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "orbitlink: %s\n", e.what());
    return 2;
  }

  if (config_path.empty()) {
    std::fprintf(stderr, "orbitlink: --config is required\n%s", app.help().c_str());
    return 2;
  }
  orbitlink::RunOptions opts;
  opts.out_dir = out_dir;
  opts.threads = threads;
  opts.seed = seed;
  opts.verify = verify;
  const auto r = orbitlink::run_file(config_path, opts);
  report(r);
  return r.exit_code;
}
