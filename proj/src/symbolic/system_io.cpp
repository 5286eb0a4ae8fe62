#include "orbitlink/system_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "orbitlink/error.hpp"

namespace orbitlink {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw InvalidInput("unknown key '" + it.key() + "' in " + where);
  }
}

template <class T>
T require(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw InvalidInput("missing key '" + std::string(key) + "' in " + where);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput("bad value for '" + std::string(key) + "' in " + where);
  }
}

}  // namespace

SuspensionSystem parse_system(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("system file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidInput("system file must be a JSON object");
  reject_unknown(doc, {"format", "version", "name", "vertices", "betti", "edges"}, "system");
  if (require<std::string>(doc, "format", "system") != "orbitlink-system")
    throw InvalidInput("format must be 'orbitlink-system'");
  if (require<int>(doc, "version", "system") != 1) throw InvalidInput("unsupported system file version");
  const auto vertices = require<std::size_t>(doc, "vertices", "system");
  const auto betti = doc.contains("betti") ? require<std::size_t>(doc, "betti", "system") : 0;
  const std::string name = doc.contains("name") ? require<std::string>(doc, "name", "system") : "";
  if (!doc.contains("edges") || !doc["edges"].is_array()) throw InvalidInput("'edges' must be an array");

  std::vector<Edge> edges;
  std::vector<double> roof, potential;
  std::vector<std::vector<std::int64_t>> labels;
  std::size_t i = 0;
  for (const json& e : doc["edges"]) {
    const std::string where = "edge " + std::to_string(i++);
    if (!e.is_object()) throw InvalidInput(where + " must be an object");
    reject_unknown(e, {"source", "target", "roof", "potential", "label"}, where);
    edges.push_back({require<VertexId>(e, "source", where), require<VertexId>(e, "target", where)});
    roof.push_back(require<double>(e, "roof", where));
    potential.push_back(e.contains("potential") ? require<double>(e, "potential", where) : 0.0);
    auto label = e.contains("label") ? require<std::vector<std::int64_t>>(e, "label", where)
                                     : std::vector<std::int64_t>(betti, 0);
    if (label.size() != betti) throw InvalidInput(where + ": label length differs from betti");
    labels.push_back(std::move(label));
  }
  if (betti == 0) labels.clear();
  return SuspensionSystem(MarkovShift(vertices, std::move(edges)), EdgeFunction(std::move(roof)),
                          EdgeFunction(std::move(potential)), std::move(labels), name);
}

SuspensionSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open system file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

std::string system_to_json(const SuspensionSystem& system) {
  json doc;
  doc["format"] = "orbitlink-system";
  doc["version"] = 1;
  doc["name"] = system.name();
  doc["vertices"] = system.shift().vertex_count();
  doc["betti"] = system.betti();
  doc["edges"] = json::array();
  for (EdgeId e = 0; e < system.shift().edge_count(); ++e) {
    auto l = system.label(e);
    doc["edges"].push_back({{"source", system.shift().edge(e).source},
                            {"target", system.shift().edge(e).target},
                            {"roof", system.roof()[e]},
                            {"potential", system.potential()[e]},
                            {"label", std::vector<std::int64_t>(l.begin(), l.end())}});
  }
  return doc.dump(2);
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_orbits_csv(std::ostream& out, std::span<const PeriodicOrbit> orbits) {
  out << "word,length,weight,homology\n";
  for (const PeriodicOrbit& o : orbits) {
    out << word_to_string(o.word) << ',' << format_number(o.length) << ',' << format_number(o.weight) << ',';
    for (std::size_t i = 0; i < o.homology.size(); ++i) out << (i ? ";" : "") << o.homology[i];
    out << '\n';
  }
}

std::vector<PeriodicOrbit> read_orbits_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "word,length,weight,homology")
    throw InvalidInput("orbit CSV must start with header word,length,weight,homology");
  std::vector<PeriodicOrbit> orbits;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
    if (!line.empty() && line.back() == ',') cols.emplace_back();
    if (cols.size() != 4) throw InvalidInput("orbit CSV row " + std::to_string(row) + " needs 4 columns");
    PeriodicOrbit o;
    o.word = word_from_string(cols[0]);
    try {
      o.length = std::stod(cols[1]);
      o.weight = std::stod(cols[2]);
      std::stringstream hs(cols[3]);
      std::string h;
      while (std::getline(hs, h, ';')) o.homology.push_back(std::stoll(h));
    } catch (const std::exception&) {
      throw InvalidInput("orbit CSV row " + std::to_string(row) + " has a malformed number");
    }
    orbits.push_back(std::move(o));
  }
  return orbits;
}

}  // namespace orbitlink
