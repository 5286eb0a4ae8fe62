#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "orbitlink/suspension.hpp"

namespace orbitlink {

enum class FullVerdict { Full, NotFull, Inconclusive };

struct HomologyFullReport {
  FullVerdict verdict = FullVerdict::Inconclusive;
  /// Full: b+1 winding vectors forming a simplex with 0 strictly inside, or,
  /// when no such simplex exists among the sampled cycles, every distinct
  /// winding vector.
  std::vector<std::vector<double>> witness;
  /// NotFull: u with <u, h/l> >= 0 for every cycle.
  std::vector<double> separating;
  std::size_t horizon = 0;  ///< word-length horizon used
  std::size_t cycles = 0;   ///< prime cycles examined
};

/// Decides whether 0 lies in the interior of the hull of the winding vectors
/// h(gamma)/l(gamma).  Every cycle decomposes into simple cycles, whose word
/// length is at most the vertex count, so a horizon >= vertex count makes a
/// negative answer conclusive.  horizon == 0 picks max(vertex count, 4).
HomologyFullReport homologically_full_check(const SuspensionSystem& system, std::size_t horizon = 0);

const char* to_string(FullVerdict v);

}  // namespace orbitlink
