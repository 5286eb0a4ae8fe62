#include "orbitlink/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "orbitlink/fixtures.hpp"
#include "orbitlink/system_io.hpp"

namespace orbitlink {

using nlohmann::json;

namespace {

enum class Kind {
  Number,
  Positive,
  Count,     // positive integer
  Bool,
  String,
  Class,     // integer array
  EdgeFn,
  Offset,    // [lo, hi] with lo < hi
  Grid,      // increasing numbers, or {from, to, step}
  Grids,     // increasing positive integers
  Numbers,
  Pairs,     // [["0.1", "0.0.1"], ...] or "hopf"
};

using KeyTable = std::map<std::string, Kind>;

struct OperationSpec {
  bool fixture;
  KeyTable params;
  KeyTable verify;
};

const std::map<std::string, OperationSpec>& specs() {
  static const std::map<std::string, OperationSpec> table{
      {"pressure", {true, {{"potential", Kind::EdgeFn}}, {{"expected", Kind::Number}, {"tolerance", Kind::Positive}}}},
      {"orbits",
       {true,
        {{"max_word", Kind::Count}, {"window", Kind::Offset}, {"max_orbits", Kind::Count}},
        {{"moebius", Kind::Bool}}}},
      {"beta",
       {true,
        {{"potential", Kind::EdgeFn}},
        {{"xi", Kind::Numbers},
         {"beta", Kind::Number},
         {"hessian", Kind::Numbers},
         {"tolerance", Kind::Positive},
         {"hessian_tolerance", Kind::Positive}}}},
      {"count",
       {true,
        {{"potential", Kind::EdgeFn},
         {"alpha", Kind::Class},
         {"offset", Kind::Offset},
         {"T_grid", Kind::Grid},
         {"route", Kind::String},
         {"max_orbits", Kind::Count}},
        {{"band", Kind::Offset}, {"max_error", Kind::Positive}, {"tail_monotone", Kind::Bool}}}},
      {"equidistribute",
       {true,
        {{"potential", Kind::EdgeFn},
         {"alpha", Kind::Class},
         {"psi", Kind::EdgeFn},
         {"offset", Kind::Offset},
         {"T_grid", Kind::Grid},
         {"max_orbits", Kind::Count}},
        {{"max_gap", Kind::Positive}, {"tail_decreasing", Kind::Bool}}}},
      {"ld",
       {true,
        {{"potential", Kind::EdgeFn},
         {"alpha", Kind::Class},
         {"psi", Kind::EdgeFn},
         {"epsilon", Kind::Positive},
         {"offset", Kind::Offset},
         {"T_grid", Kind::Grid},
         {"max_orbits", Kind::Count}},
        {{"negative_slope", Kind::Bool}}}},
      {"link",
       {false,
        {{"pairs", Kind::Pairs},
         {"samples_per_symbol", Kind::Count},
         {"hopf_samples", Kind::Count},
         {"quadrature_samples", Kind::Count}},
        {{"integrality", Kind::Positive},
         {"min_distance", Kind::Positive},
         {"pair_tolerance", Kind::Positive},
         {"min_order", Kind::Positive}}}},
      {"lambda-scan",
       {false,
        {{"pairs", Kind::Count}, {"r_min", Kind::Positive}, {"decades", Kind::Count}, {"trend_tolerance", Kind::Positive}},
        {{"bounded", Kind::Bool}, {"max_K", Kind::Positive}}}},
      {"helicity",
       {false,
        {{"A", Kind::Number}, {"B", Kind::Number}, {"C", Kind::Number}, {"grids", Kind::Grids}, {"scale", Kind::Number}},
        {{"expected", Kind::Number},
         {"check_grid", Kind::Count},
         {"grid_tolerance", Kind::Positive},
         {"extrapolated_tolerance", Kind::Positive},
         {"scaling_tolerance", Kind::Positive}}}},
      {"average-link",
       {true,
        {{"potential", Kind::EdgeFn},
         {"T_grid", Kind::Grid},
         {"partner_class_zero", Kind::Bool},
         {"max_orbits", Kind::Count}},
        {}}},
      {"study",
       {true,
        {{"potential", Kind::EdgeFn},
         {"T_grid", Kind::Grid},
         {"T_ref", Kind::Positive},
         {"delta", Kind::Positive},
         {"lambda_pairs", Kind::Count},
         {"partner_class_zero", Kind::Bool},
         {"refine_check", Kind::Bool},
         {"invariance_shift", Kind::Number}},
        {{"gap_decrease", Kind::Bool}, {"invariance", Kind::Bool}, {"separation", Kind::Bool}}}},
  };
  return table;
}

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

bool is_integer(const json& v) { return v.is_number_integer() || v.is_number_unsigned(); }

double number(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(key, "must be finite");
  return x;
}

// Validates one value; may rewrite it into its resolved form.
void check_value(json& v, Kind kind, const std::string& key) {
  switch (kind) {
    case Kind::Number:
      number(v, key);
      break;
    case Kind::Positive:
      if (number(v, key) <= 0.0) fail(key, "must be positive");
      break;
    case Kind::Count:
      if (!is_integer(v) || v.get<long long>() <= 0) fail(key, "expected a positive integer");
      break;
    case Kind::Bool:
      if (!v.is_boolean()) fail(key, "expected true or false");
      break;
    case Kind::String:
      if (!v.is_string()) fail(key, "expected a string");
      break;
    case Kind::Class:
      if (!v.is_array()) fail(key, "expected an integer array");
      for (const auto& x : v)
        if (!is_integer(x)) fail(key, "expected an integer array");
      break;
    case Kind::EdgeFn:
      if (v.is_array()) {
        for (const auto& x : v) number(x, key);
      } else if (v.is_object() && v.size() == 1) {
        if (v.contains("indicator")) {
          if (!is_integer(v["indicator"]) || v["indicator"].get<long long>() < 0)
            fail(key + ".indicator", "expected an edge id");
        } else if (v.contains("constant")) {
          number(v["constant"], key + ".constant");
        } else if (v.contains("scale")) {
          number(v["scale"], key + ".scale");
        } else {
          fail(key, "expected one of indicator, constant, scale");
        }
      } else {
        fail(key, "expected an array or {indicator|constant|scale: x}");
      }
      break;
    case Kind::Offset:
      if (!v.is_array() || v.size() != 2) fail(key, "expected [lo, hi]");
      if (!(number(v[0], key) < number(v[1], key))) fail(key, "window must satisfy lo < hi");
      break;
    case Kind::Grid: {
      if (v.is_object()) {
        for (const auto& [k, x] : v.items())
          if (k != "from" && k != "to" && k != "step") fail(key + "." + k, "unknown key");
        if (!v.contains("from") || !v.contains("to") || !v.contains("step")) fail(key, "needs from, to and step");
        const double from = number(v["from"], key + ".from");
        const double to = number(v["to"], key + ".to");
        const double step = number(v["step"], key + ".step");
        if (step <= 0.0) fail(key + ".step", "must be positive");
        if (to < from) fail(key, "to < from");
        json grid = json::array();
        const auto n = static_cast<long long>(std::floor((to - from) / step + 1e-9));
        for (long long i = 0; i <= n; ++i) grid.push_back(from + static_cast<double>(i) * step);
        v = std::move(grid);
      }
      if (!v.is_array() || v.empty()) fail(key, "expected a non-empty array or {from, to, step}");
      double last = -INFINITY;
      for (const auto& x : v) {
        const double T = number(x, key);
        if (T <= 0.0) fail(key, "grid values must be positive");
        if (T <= last) fail(key, "grid must be strictly increasing");
        last = T;
      }
      break;
    }
    case Kind::Grids: {
      if (!v.is_array() || v.empty()) fail(key, "expected an array of grid sizes");
      long long last = 0;
      for (const auto& x : v) {
        if (!is_integer(x) || x.get<long long>() <= last) fail(key, "expected increasing positive integers");
        last = x.get<long long>();
      }
      break;
    }
    case Kind::Numbers:
      if (!v.is_array() || v.empty()) fail(key, "expected an array of numbers");
      for (const auto& x : v) number(x, key);
      break;
    case Kind::Pairs:
      if (v.is_string()) {
        if (v.get<std::string>() != "hopf") fail(key, "expected \"hopf\" or an array of word pairs");
        break;
      }
      if (!v.is_array() || v.empty()) fail(key, "expected \"hopf\" or an array of word pairs");
      for (const auto& p : v) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
          fail(key, "each pair is [word, word]");
        for (const auto& w : p) {
          try {
            for (EdgeId e : word_from_string(w.get<std::string>()))
              if (e > 1) fail(key, "template words use symbols 0 and 1");
          } catch (const ConfigError&) {
            throw;
          } catch (const std::exception& e) {
            fail(key, e.what());
          }
        }
      }
      break;
  }
}

void check_block(json& block, const KeyTable& table, const std::string& prefix) {
  if (!block.is_object()) fail(prefix, "expected an object");
  for (auto& [k, v] : block.items()) {
    const auto it = table.find(k);
    if (it == table.end()) fail(prefix + "." + k, "unknown key");
    check_value(v, it->second, prefix + "." + k);
  }
}

void check_edge_function(const json& v, const std::string& key, std::size_t edges) {
  if (v.is_array() && v.size() != edges)
    fail(key, "expected " + std::to_string(edges) + " values, one per edge");
  if (v.is_object() && v.contains("indicator") && v["indicator"].get<std::size_t>() >= edges)
    fail(key + ".indicator", "edge id out of range");
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

const std::vector<std::string>& operations() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, spec] : specs()) out.push_back(name);
    return out;
  }();
  return names;
}

bool needs_fixture(const std::string& operation) {
  const auto it = specs().find(operation);
  return it != specs().end() && it->second.fixture;
}

SuspensionSystem resolve_fixture(const std::string& fixture) {
  const auto names = fixtures::names();
  if (std::find(names.begin(), names.end(), fixture) != names.end()) return fixtures::by_name(fixture);
  if (fixture.ends_with(".json")) {
    if (!std::filesystem::exists(fixture)) fail("fixture", "system file '" + fixture + "' not found");
    try {
      return load_system(fixture);
    } catch (const std::exception& e) {
      fail("fixture", std::string("system file '") + fixture + "': " + e.what());
    }
  }
  std::string known;
  for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
  fail("fixture", "unknown fixture '" + fixture + "' (known: " + known + ")");
}

ExperimentConfig config_from_json(const json& input) {
  json doc = input;
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  static const std::vector<std::string> top{"version", "fixture", "operation", "params",
                                            "verify",  "seed",    "threads",   "output_dir"};
  for (const auto& [k, v] : doc.items())
    if (std::find(top.begin(), top.end(), k) == top.end()) fail(k, "unknown key");

  ExperimentConfig cfg;
  if (doc.contains("version")) {
    if (!is_integer(doc["version"])) fail("version", "expected an integer");
    cfg.version = doc["version"].get<int>();
  }
  if (cfg.version != 1) fail("version", "unsupported version " + std::to_string(cfg.version));

  if (!doc.contains("operation") || !doc["operation"].is_string()) fail("operation", "required string");
  cfg.operation = doc["operation"].get<std::string>();
  const auto spec = specs().find(cfg.operation);
  if (spec == specs().end()) fail("operation", "unknown operation '" + cfg.operation + "'");

  if (doc.contains("fixture")) {
    if (!doc["fixture"].is_string()) fail("fixture", "expected a string");
    cfg.fixture = doc["fixture"].get<std::string>();
  }
  if (spec->second.fixture && cfg.fixture.empty()) fail("fixture", "required for operation " + cfg.operation);

  if (doc.contains("params")) cfg.params = doc["params"];
  if (doc.contains("verify")) cfg.verify = doc["verify"];
  check_block(cfg.params, spec->second.params, "params");
  check_block(cfg.verify, spec->second.verify, "verify");

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !(is_integer(doc["seed"]) && doc["seed"].get<long long>() >= 0))
      fail("seed", "expected a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("threads")) {
    if (!is_integer(doc["threads"]) || doc["threads"].get<long long>() <= 0) fail("threads", "expected a positive integer");
    cfg.threads = doc["threads"].get<unsigned>();
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string() || doc["output_dir"].get<std::string>().empty())
      fail("output_dir", "expected a non-empty string");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }

  if (cfg.params.contains("route")) {
    const auto r = cfg.params["route"].get<std::string>();
    if (r != "auto" && r != "enumeration" && r != "lattice") fail("params.route", "expected auto, enumeration or lattice");
  }

  if (!cfg.fixture.empty()) {
    const SuspensionSystem system = resolve_fixture(cfg.fixture);
    const std::size_t edges = system.shift().edge_count();
    for (const auto& [k, kind] : spec->second.params)
      if (kind == Kind::EdgeFn && cfg.params.contains(k)) check_edge_function(cfg.params[k], "params." + k, edges);
    if (cfg.params.contains("alpha") && cfg.params["alpha"].size() != system.betti())
      fail("params.alpha", "expected " + std::to_string(system.betti()) + " components");
  }
  return cfg;
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) +
                      ": malformed JSON (" + e.what() + ")");
  }
  return config_from_json(doc);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

json config_to_json(const ExperimentConfig& config) {
  json out{{"version", config.version},   {"operation", config.operation}, {"params", config.params},
           {"verify", config.verify},     {"seed", config.seed},           {"threads", config.threads},
           {"output_dir", config.output_dir}};
  if (!config.fixture.empty()) out["fixture"] = config.fixture;
  return out;
}

EdgeFunction edge_function_param(const json& params, const std::string& key, const SuspensionSystem& system,
                                 const EdgeFunction& fallback) {
  if (!params.contains(key)) return fallback;
  const json& v = params[key];
  const std::size_t edges = system.shift().edge_count();
  check_edge_function(v, "params." + key, edges);
  if (v.is_array()) return EdgeFunction(v.get<std::vector<double>>());
  if (v.contains("indicator")) return EdgeFunction::indicator(edges, v["indicator"].get<EdgeId>());
  if (v.contains("constant")) return EdgeFunction::constant(edges, v["constant"].get<double>());
  return system.potential() * v["scale"].get<double>();
}

}  // namespace orbitlink
