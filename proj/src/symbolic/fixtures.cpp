#include "orbitlink/fixtures.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "orbitlink/error.hpp"

namespace orbitlink::fixtures {
namespace {

using Labels = std::vector<std::vector<std::int64_t>>;

SuspensionSystem one_vertex(std::vector<double> roof, Labels labels, std::string name) {
  const std::size_t n = roof.size();
  return SuspensionSystem(full_shift(n), EdgeFunction(std::move(roof)), EdgeFunction::constant(n, 0.0),
                          std::move(labels), std::move(name));
}

const std::map<std::string, std::function<SuspensionSystem()>>& registry() {
  static const std::map<std::string, std::function<SuspensionSystem()>> table{
      {"symmetric", symmetric},
      {"asymmetric", asymmetric},
      {"symmetric-mixing", symmetric_mixing},
      {"golden-mean", golden_mean},
      {"full-two-shift", full_two_shift},
      {"positive-labels", positive_labels},
      {"planar-four", planar_four},
      {"three-symbol", three_symbol},
      {"lorenz-template", lorenz_template_system},
  };
  return table;
}

}  // namespace

SuspensionSystem symmetric() { return one_vertex({1.0, 1.0}, {{1}, {-1}}, "symmetric"); }

SuspensionSystem asymmetric() { return one_vertex({1.0, std::sqrt(2.0)}, {{1}, {-1}}, "asymmetric"); }

SuspensionSystem symmetric_mixing() {
  return one_vertex({std::sqrt(2.0), std::sqrt(2.0), 1.0, std::sqrt(3.0)}, {{1}, {-1}, {0}, {0}},
                    "symmetric-mixing");
}

SuspensionSystem golden_mean() {
  MarkovShift shift(2, {{0, 0}, {0, 1}, {1, 0}});
  return SuspensionSystem(std::move(shift), EdgeFunction::constant(3, 1.0), EdgeFunction::constant(3, 0.0), {},
                          "golden-mean");
}

SuspensionSystem full_two_shift() { return one_vertex({1.0, 1.0}, {}, "full-two-shift"); }

SuspensionSystem full_two_shift_roof(double c) { return one_vertex({c, c}, {}, "full-two-shift"); }

SuspensionSystem positive_labels() { return one_vertex({1.0, 1.0}, {{1}, {1}}, "positive-labels"); }

SuspensionSystem planar_four() {
  return one_vertex({1.0, 1.0, 1.0, 1.0}, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, "planar-four");
}

SuspensionSystem three_symbol() {
  std::vector<Edge> edges;
  for (VertexId i = 0; i < 3; ++i)
    for (VertexId j = 0; j < 3; ++j)
      if (!(i == 2 && j == 2)) edges.push_back({i, j});
  const std::size_t n = edges.size();
  return SuspensionSystem(MarkovShift(3, std::move(edges)), EdgeFunction::constant(n, 1.0),
                          EdgeFunction::constant(n, 0.0), {}, "three-symbol");
}

SuspensionSystem lorenz_template_system() { return one_vertex({1.0, 1.0}, {}, "lorenz-template"); }

SuspensionSystem by_name(const std::string& name) {
  const auto& table = registry();
  auto it = table.find(name);
  if (it == table.end()) throw InvalidInput("unknown fixture '" + name + "'");
  return it->second();
}

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& [name, make] : registry()) out.push_back(name);
  return out;
}

}  // namespace orbitlink::fixtures
