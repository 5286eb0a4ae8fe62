#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbitlink/config.hpp"

namespace orbitlink {

struct RunOptions {
  std::optional<std::string> out_dir;  ///< overrides the config (and ORBITLINK_OUT)
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  bool verify = false;  ///< evaluate the assertions of the config's verify block
};

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunResult {
  int exit_code = 0;  ///< 0 ok, 1 failed assertion or run error, 2 invalid config
  std::string out_dir;
  std::vector<std::string> files;  ///< emitted tables, manifest excluded
  std::vector<std::string> checksums;  ///< sha256 per file, same order
  std::vector<VerifyCheck> checks;
  std::string manifest_path;
  std::string error;
};

/// Runs one experiment.  A manifest marking failure is written before any
/// table, and replaced by the final manifest once every table is on disk.
/// Errors are reported in the result, not thrown.
RunResult run(const ExperimentConfig& config, const RunOptions& options = {});
RunResult run_file(const std::string& config_path, const RunOptions& options = {});

/// Re-runs the resolved config stored in a manifest and checks that every
/// emitted file has the recorded checksum.
RunResult replay(const std::string& manifest_path, const std::optional<std::string>& out_dir = {});

std::string sha256_file(const std::string& path);
std::string sha256_hex(const std::string& bytes);

const char* library_version();

}  // namespace orbitlink
