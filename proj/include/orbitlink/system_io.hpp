#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "orbitlink/suspension.hpp"

namespace orbitlink {

/// System files are JSON:
///
///   {"format": "orbitlink-system", "version": 1, "name": "...",
///    "vertices": 2, "betti": 1,
///    "edges": [{"source": 0, "target": 1, "roof": 1.0,
///               "potential": 0.0, "label": [1]}, ...]}
///
/// "name", "potential" (default 0) and "label" (default zeros) are optional;
/// unknown keys are rejected.
SuspensionSystem parse_system(const std::string& json_text);
SuspensionSystem load_system(const std::string& path);
std::string system_to_json(const SuspensionSystem& system);

/// 12 significant digits, the precision used for every emitted table.
std::string format_number(double x);

/// CSV with columns word,length,weight,homology.  Words are dotted edge ids,
/// homology components are ';'-separated.
void write_orbits_csv(std::ostream& out, std::span<const PeriodicOrbit> orbits);
std::vector<PeriodicOrbit> read_orbits_csv(std::istream& in);

}  // namespace orbitlink
