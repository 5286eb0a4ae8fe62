#include "orbitlink/orbit_stats.hpp"

#include <algorithm>
#include <cmath>

#include "orbitlink/lattice_count.hpp"
#include "orbitlink/numerics.hpp"

namespace orbitlink {

OrbitalMeasure::OrbitalMeasure(std::vector<PeriodicOrbit> orbits, std::span<const double> log_weights)
    : orbits_(std::move(orbits)) {
  if (log_weights.size() != orbits_.size()) throw InvalidInput("one weight per orbit required");
  if (orbits_.empty()) return;
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  weights_.resize(orbits_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < orbits_.size(); ++i) total += weights_[i] = std::exp(log_weights[i] - top);
  for (double& w : weights_) w /= total;
}

double OrbitalMeasure::integrate_density(const SuspensionSystem& system, const EdgeFunction& psi) const {
  double s = 0.0;
  for (std::size_t i = 0; i < orbits_.size(); ++i)
    s += weights_[i] * orbit_integral(system, orbits_[i].word, psi) / orbits_[i].length;
  return s;
}

std::vector<double> OrbitalMeasure::winding_cycle() const {
  std::vector<double> phi(orbits_.empty() ? 0 : orbits_[0].homology.size(), 0.0);
  for (std::size_t i = 0; i < orbits_.size(); ++i) {
    for (std::size_t j = 0; j < phi.size(); ++j)
      phi[j] += weights_[i] * static_cast<double>(orbits_[i].homology[j]) / orbits_[i].length;
  }
  return phi;
}

OrbitStatistics orbit_statistics(const SuspensionSystem& system, std::span<const PeriodicOrbit> orbits,
                                 const EdgeFunction& psi, LengthWindow window, double potential_scale) {
  OrbitStatistics out;
  LogSumExp pi;
  out.averages.reserve(orbits.size());
  for (const PeriodicOrbit& o : orbits) {
    out.averages.push_back(orbit_integral(system, o.word, psi) / o.length);
    if (window.contains(o.length)) pi.add(potential_scale * o.weight);
  }
  out.log_pi = pi.value();
  out.pi = std::exp(out.log_pi);
  out.count = static_cast<std::size_t>(pi.count());
  return out;
}

std::vector<GrowthPoint> growth_rate_estimate(const SuspensionSystem& system, const EdgeFunction& potential,
                                              LengthWindow offset, std::span<const double> T_grid,
                                              GrowthRoute route, const EnumerationOptions& options) {
  const EdgeFunction& roof = system.roof();
  const bool constant_roof = roof.max() - roof.min() <= 1e-15 * roof.max();
  if (route == GrowthRoute::Automatic) route = constant_roof ? GrowthRoute::LatticeTrace : GrowthRoute::Enumeration;
  if (route == GrowthRoute::LatticeTrace && !constant_roof)
    throw InvalidInput("lattice-trace growth route needs a constant roof");
  for (std::size_t i = 1; i < T_grid.size(); ++i) {
    if (!(T_grid[i] > T_grid[i - 1])) throw InvalidInput("T grid must be increasing");
  }

  std::vector<GrowthPoint> out;
  for (double T : T_grid) {
    const LengthWindow window{T + offset.lo, T + offset.hi};
    GrowthPoint point;
    point.T = T;
    if (route == GrowthRoute::LatticeTrace) {
      const double c = roof.max();
      LogSumExp pi;
      const auto n_lo = static_cast<std::size_t>(std::max(0.0, std::floor(window.lo / c)));
      for (std::size_t n = std::max<std::size_t>(1, n_lo); n * c <= window.hi * (1 + 1e-12); ++n) {
        if (!window.contains(static_cast<double>(n) * c)) continue;
        const double z = log_prime_weighted_sum(system.shift(), potential, n);
        if (std::isfinite(z)) {
          pi.add(z);
          point.count += static_cast<std::size_t>(std::min(1e18, std::round(std::exp(
              log_prime_weighted_sum(system.shift(), EdgeFunction::constant(potential.size(), 0.0), n)))));
        }
      }
      point.log_pi = pi.value();
    } else {
      struct Acc {
        LogSumExp pi;
      };
      Acc acc = reduce_orbits<Acc>(
          system, window, options, [] { return Acc{}; },
          [&](Acc& a, const OrbitView& v) {
            double w = 0.0;
            for (EdgeId e : v.word) w += potential[e];
            a.pi.add(w);
          },
          [](Acc& total, const Acc& part) { total.pi.merge(part.pi); });
      point.log_pi = acc.pi.value();
      point.count = static_cast<std::size_t>(acc.pi.count());
    }
    point.estimate = point.log_pi / T;
    out.push_back(point);
  }
  return out;
}

}  // namespace orbitlink
