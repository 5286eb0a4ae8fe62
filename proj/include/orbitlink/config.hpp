#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "orbitlink/error.hpp"
#include "orbitlink/suspension.hpp"

namespace orbitlink {

/// Validation failure; the message names the offending key or line.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// One experiment.  Config files are JSON:
///
///   {"version": 1, "fixture": "symmetric-mixing", "operation": "count",
///    "params": {...}, "verify": {...}, "seed": 1, "threads": 1,
///    "output_dir": "out/count"}
///
/// `fixture` is a registry name or a path to a system file.  `params` and
/// `verify` accept only the keys listed for the operation (see README).
/// Grids written as {"from", "to", "step"} are expanded on parse.
struct ExperimentConfig {
  int version = 1;
  std::string fixture;
  std::string operation;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json verify = nlohmann::json::object();
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string output_dir = "out";
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

const std::vector<std::string>& operations();
/// True for operations that read a suspension system.
bool needs_fixture(const std::string& operation);
/// Registry name or system file.
SuspensionSystem resolve_fixture(const std::string& fixture);

/// Edge function from a config value: an array of per-edge values,
/// {"indicator": e}, {"constant": c} or {"scale": s} (s times the system's
/// potential).  A missing value gives `fallback`.
EdgeFunction edge_function_param(const nlohmann::json& params, const std::string& key, const SuspensionSystem& system,
                                 const EdgeFunction& fallback);

}  // namespace orbitlink
