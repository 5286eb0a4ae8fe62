#pragma once

#include <cstdint>
#include <vector>

#include "orbitlink/lorenz_template.hpp"

namespace orbitlink {

struct LambdaScanOptions {
  std::size_t pairs = 100000;
  double r_min = 1e-4;  ///< smallest separation probed
  std::size_t decades = 3;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double trend_tolerance = 1.1;  ///< allowed growth of a decade max over the previous one
};

struct LambdaDecade {
  double r_lo = 0.0, r_hi = 0.0;
  double max_r_lambda = 0.0;  ///< max of r |Lambda| over samples in [r_lo, r_hi)
  std::size_t samples = 0;
};

struct LambdaScanReport {
  double K_emp = 0.0;  ///< max r |Lambda| over all samples
  std::vector<LambdaDecade> decades;  ///< ordered from large r to small r
  bool bounded = false;  ///< no decade max exceeds its larger-r neighbour by more than the tolerance
};

/// Samples pairs of nearby points of the template flow at log-uniform
/// separations in [r_min, r_min * 10^decades) and records r |Lambda(x, y)|
/// with the flow's unit-speed direction field.
LambdaScanReport lambda_bound_scan(const TemplateSpec& spec, const LambdaScanOptions& options = {});

}  // namespace orbitlink
