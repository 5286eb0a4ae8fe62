#pragma once

#include <span>
#include <utility>
#include <vector>

#include "orbitlink/orbits.hpp"
#include "orbitlink/suspension.hpp"

namespace orbitlink {

/// Normalized orbital measure sum_i w_i mu_{gamma_i}, where mu_gamma is the
/// time-normalized measure on the orbit.
class OrbitalMeasure {
 public:
  OrbitalMeasure() = default;
  /// Weights e^{log_weights[i] - max}; normalized to sum 1.
  OrbitalMeasure(std::vector<PeriodicOrbit> orbits, std::span<const double> log_weights);

  const std::vector<PeriodicOrbit>& orbits() const { return orbits_; }
  const std::vector<double>& weights() const { return weights_; }
  bool empty() const { return orbits_.empty(); }

  /// sum_i w_i (1/l_i) int_{gamma_i} psi, psi a time density.
  double integrate_density(const SuspensionSystem& system, const EdgeFunction& psi) const;
  /// Winding cycle sum_i w_i h_i / l_i.
  std::vector<double> winding_cycle() const;

 private:
  std::vector<PeriodicOrbit> orbits_;
  std::vector<double> weights_;
};

/// Per-orbit time averages of psi and the weighted count over a window.
struct OrbitStatistics {
  std::vector<double> averages;  ///< (1/l) int_gamma psi, one per orbit
  double log_pi = 0.0;           ///< log sum e^{weight} over orbits in window
  double pi = 0.0;               ///< exp(log_pi) (may be +inf for huge sums)
  std::size_t count = 0;
};

/// psi is a time density.  Weights are the orbits' stored potential sums
/// scaled by `potential_scale`.
OrbitStatistics orbit_statistics(const SuspensionSystem& system, std::span<const PeriodicOrbit> orbits,
                                 const EdgeFunction& psi, LengthWindow window,
                                 double potential_scale = 1.0);

struct GrowthPoint {
  double T = 0.0;
  double log_pi = 0.0;
  double estimate = 0.0;  ///< (1/T) log pi
  std::size_t count = 0;
};

enum class GrowthRoute { Enumeration, LatticeTrace, Automatic };

/// (1/T) log pi_phi(T, 1_window) on a grid, where the window is
/// (T + offset.lo, T + offset.hi] and phi = potential (symbolic).
/// The lattice-trace route requires a constant roof and evaluates the same
/// sums through traces of weighted matrix powers; Automatic picks it when
/// the roof is constant.
std::vector<GrowthPoint> growth_rate_estimate(const SuspensionSystem& system, const EdgeFunction& potential,
                                              LengthWindow offset, std::span<const double> T_grid,
                                              GrowthRoute route = GrowthRoute::Automatic,
                                              const EnumerationOptions& options = {});

}  // namespace orbitlink
