#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace orbitlink {

/// Lengths and log-weights of the orbits of one window.
struct OrbitFamily {
  std::vector<double> length;
  std::vector<double> weight;  ///< per-orbit log-weight w, e.g. the integral of phi along the orbit
  std::size_t size() const { return length.size(); }
};

/// lk of orbit i of the first family with orbit j of the second; nullopt if unknown.
using LinkingLookup = std::function<std::optional<int>(std::size_t, std::size_t)>;

struct AverageLinkingEntry {
  double T = 0.0;
  /// Both sums carry the common factor exp(-log_scale).
  double numerator = 0.0;
  double denominator = 0.0;
  double log_scale = 0.0;
  std::size_t pairs = 0;
  double value = 0.0;  ///< numerator / denominator; NaN when a family is empty
  bool empty = false;  ///< one of the families had no orbits
  double min_term = 0.0, max_term = 0.0;  ///< range of lk / (l l') over the pairs
};

/// Weighted mean of lk / (l l') over all pairs with weights exp(w + w').
/// Terms are summed in ascending order of magnitude.  Throws InvalidInput if
/// the lookup has no entry for some pair.
AverageLinkingEntry average_linking(const OrbitFamily& first, const OrbitFamily& second, const LinkingLookup& lk,
                                    double T = 0.0);

using AverageLinkingSeries = std::vector<AverageLinkingEntry>;

}  // namespace orbitlink
