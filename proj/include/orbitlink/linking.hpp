#pragma once

#include <cstdint>
#include <optional>

#include "orbitlink/curve.hpp"

namespace orbitlink {

struct CrossingOptions {
  Vec3 direction = Vec3(0.2311, 0.4472, 0.8641);  ///< first projection direction
  int max_retries = 20;
  std::uint64_t seed = 1;  ///< perturbation stream for retries
};

/// Linking number by signed crossings in the projection along `direction`;
/// nullopt if the projection is degenerate (parallel projected segments or a
/// crossing at a projected vertex).  Crossing sign is det(t_over, t_under, d).
std::optional<int> crossing_linking_along(const PolylineCurve& a, const PolylineCurve& b, const Vec3& direction);

/// Retries perturbed directions on degeneracy; GeometryError when the retry
/// cap is exhausted or the curves meet.
int crossing_linking(const PolylineCurve& a, const PolylineCurve& b, const CrossingOptions& options = {});

/// Gauss linking integral as an exact sum of segment-pair solid angles.
/// DomainError if the curves come closer than 1e-6 * diameter.
double gauss_linking(const PolylineCurve& a, const PolylineCurve& b);

struct LinkingResult {
  int exact = 0;
  double numeric = 0.0;
  double error = 0.0;  ///< |numeric - exact|
  double min_distance = 0.0;
};

LinkingResult link(const PolylineCurve& a, const PolylineCurve& b, const CrossingOptions& options = {});

/// (1/4pi) (Xx x Xy) . (x - y) / |x - y|^3.  DomainError for x == y.
double lambda_kernel(const Vec3& x, const Vec3& y, const Vec3& Xx, const Vec3& Xy);

/// Midpoint-rule double integral of lambda_kernel against mu_a x mu_b, the
/// time-normalized measures of the curves with their own velocities.  Each
/// segment is split into `nodes_per_segment` equal pieces.  Approaches
/// lk / (period_a * period_b) at second order.
double orbit_pair_integral(const PolylineCurve& a, const PolylineCurve& b, std::size_t nodes_per_segment = 1);

}  // namespace orbitlink
