#pragma once

#include <string>
#include <vector>

#include "orbitlink/suspension.hpp"

namespace orbitlink::fixtures {

/// Full 2-shift, unit roof, zero potential, labels +1 / -1.  b = 1.
SuspensionSystem symmetric();
/// Full 2-shift with roofs 1 and sqrt 2, labels +1 / -1 (minimizer xi != 0).
SuspensionSystem asymmetric();
/// Weak-mixing symmetric system for counting in a class: one vertex, edges
/// (roof sqrt2, +1), (roof sqrt2, -1), (roof 1, 0), (roof sqrt3, 0).
SuspensionSystem symmetric_mixing();
/// Golden-mean shift (0->0, 0->1, 1->0) as a 3-edge graph, unit roof, b = 0.
SuspensionSystem golden_mean();
/// Full 2-shift with unit roof, b = 0.
SuspensionSystem full_two_shift();
/// Full 2-shift with constant roof c.
SuspensionSystem full_two_shift_roof(double c);
/// Full 2-shift with labels +1, +1: not homologically full.
SuspensionSystem positive_labels();
/// Full 4-shift with labels (1,0), (-1,0), (0,1), (0,-1).  b = 2.
SuspensionSystem planar_four();
/// Three-symbol vertex shift forbidding 2 -> 2, written as an 8-edge graph.
SuspensionSystem three_symbol();
/// Symbolic model used for the Lorenz-like template: full 2-shift, unit roof,
/// b = 0.  Edge 0 runs around the left ear, edge 1 around the right ear.
SuspensionSystem lorenz_template_system();

/// Registry lookup; throws InvalidInput for unknown names.
SuspensionSystem by_name(const std::string& name);
std::vector<std::string> names();

}  // namespace orbitlink::fixtures
