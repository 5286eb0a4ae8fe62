#pragma once

#include <cstdint>
#include <vector>

#include "orbitlink/pressure.hpp"
#include "orbitlink/suspension.hpp"

namespace orbitlink {

/// Cylinder-measure check of the Gibbs upper bound
///   mu[w] <= C exp(sum_w q - P L)
/// for the equilibrium state of q.  Cylinders play the role of Bowen balls.
struct GibbsBallReport {
  double worst_ratio = 0.0;  ///< max over sampled cylinders of mu/exp(...)
  double best_ratio = 0.0;   ///< min over sampled cylinders
  std::size_t cylinders = 0;
  bool exhaustive = false;
};

/// Every admissible word of length L when there are at most `sample_cap` of
/// them, otherwise `sample_cap` random admissible words drawn with `seed`.
GibbsBallReport gibbs_ball_bound_check(const MarkovShift& shift, const EdgeFunction& q, std::size_t L,
                                       std::size_t sample_cap = 1 << 16, std::uint64_t seed = 1);

/// Calibration of the strictly negative representative of
/// q - P(q) roof: u = q - P r + g(source) - g(target) with u <= -eps r on
/// every edge.  On a closed orbit the transfer terms cancel, so
/// int_gamma phi - P l(gamma) <= -eps l(gamma) + 2 max|g|.
struct NegativeCohomology {
  double pressure = 0.0;
  double epsilon = 0.0;
  double transfer_bound = 0.0;  ///< max |g|
  std::vector<double> transfer;  ///< g per vertex
  std::vector<double> negative;  ///< u per edge
};

NegativeCohomology negative_cohomology_calibration(const MarkovShift& shift, const EdgeFunction& roof,
                                                   const EdgeFunction& q);

}  // namespace orbitlink
