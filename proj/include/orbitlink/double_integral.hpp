#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "orbitlink/abc_field.hpp"
#include "orbitlink/curve.hpp"

namespace orbitlink {

struct DoubleIntegralEstimate {
  double value = 0.0;  ///< integral of Lambda over pairs with r >= delta
  double delta = 0.0;
  double tail_bound = 0.0;  ///< bound on the contribution of r < delta from r |Lambda| <= K
  double quadrature_error = 0.0;
  double error = 0.0;  ///< quadrature_error + tail_bound
  double excluded_mass = 0.0;  ///< product-measure mass of r < delta
  std::size_t below_floor = 0;  ///< quadrature pairs closer than the hard floor (excluded, no kernel call)
  std::size_t evaluations = 0;
};

struct DoubleIntegralOptions {
  double delta = 0.05;  ///< near-diagonal cutoff
  double floor = 1e-9;  ///< hard floor; delta must exceed it
  double K = 1.0;  ///< constant in r |Lambda| <= K, usually twice an empirical scan value
  std::size_t nodes_per_segment = 1;  ///< line quadrature on curves
  /// Curves: estimate the quadrature error by rerunning with twice the nodes.
  bool refine_check = true;
  unsigned threads = 1;
};

/// Convex combination of time-normalized orbit measures.
struct OrbitalMixture {
  std::vector<PolylineCurve> curves;
  std::vector<double> weights;  ///< nonnegative, normalized internally
};

/// Optional closed form of the integral against mu_i x mu_j for i != j (e.g.
/// lk / (l l') for disjoint orbits); nullopt falls back to line quadrature.
using PairTerm = std::function<std::optional<double>(std::size_t, std::size_t)>;

/// Integral of Lambda against mu x nu for orbital mixtures.  Pairs of curves
/// are integrated with the midpoint line quadrature of orbit_pair_integral;
/// node pairs closer than delta are dropped and bounded per dyadic annulus
/// [delta 2^-(n+1), delta 2^-n) by K 2^(n+1) / delta times their mass.
DoubleIntegralEstimate double_integral_lambda(const OrbitalMixture& mu, const OrbitalMixture& nu,
                                              const DoubleIntegralOptions& options, const PairTerm& closed_form = {});
/// Same with mu x mu; closed_form is consulted only for i != j.
DoubleIntegralEstimate double_integral_lambda(const OrbitalMixture& mu, const DoubleIntegralOptions& options,
                                              const PairTerm& closed_form = {});

struct VolumeQuadrature {
  std::size_t base_grid = 4;  ///< points per axis for the base point x
  std::size_t radial_nodes = 4;  ///< Gauss-Legendre nodes per dyadic shell
  std::size_t polar_nodes = 8;  ///< Gauss-Legendre nodes in cos(theta)
  std::size_t azimuth_nodes = 16;
  std::size_t outer_grid = 16;  ///< points per axis for offsets outside the ball of radius pi
};

/// Integral of Lambda(x, x + d) over x ~ m and d in the periodic cell
/// [-pi, pi)^3 (nearest-image separation) with |d| >= delta.  Offsets in the
/// ball |d| < pi use dyadic spherical shells, the rest a midpoint grid.  The
/// quadrature error is the change against a rule with half the radial and
/// angular nodes.
DoubleIntegralEstimate double_integral_lambda(const AnalyticField& field, const DoubleIntegralOptions& options,
                                              const VolumeQuadrature& quadrature = {});

/// Empirical sup of r |Lambda(x, y)| over pairs at separations in
/// [r_min, r_min 10^decades) on the field (base points uniform on the torus).
double field_lambda_constant(const AnalyticField& field, std::size_t pairs = 20000, double r_min = 1e-4,
                             std::size_t decades = 3, std::uint64_t seed = 1);

/// Mass of {|d| < delta} in the normalized torus measure: (4/3) pi delta^3 / (2 pi)^3.
double torus_ball_mass(double delta);

}  // namespace orbitlink
