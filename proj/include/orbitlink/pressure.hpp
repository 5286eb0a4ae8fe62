#pragma once

#include <vector>

#include "orbitlink/markov_shift.hpp"
#include "orbitlink/suspension.hpp"

namespace orbitlink {

struct EigenOptions {
  double tolerance = 1e-13;  ///< on successive eigenvalue estimates (relative)
  int max_iterations = 200000;
};

/// Leading eigen-data of the edge-weighted vertex matrix
/// A[u][v] = sum_{e: u->v} exp(q(e)).
struct LeadingEigen {
  double log_lambda = 0.0;
  std::vector<double> right;  ///< A r = lambda r, sum r = 1
  std::vector<double> left;   ///< l A = lambda l, sum l r = 1
  int iterations = 0;
};

LeadingEigen leading_eigen(const MarkovShift& shift, const EdgeFunction& q,
                           const EigenOptions& options = {});

/// Markov measure on edges: the equilibrium state of a depth-1 potential.
struct MarkovMeasure {
  std::vector<double> vertex_distribution;  ///< stationary, strictly positive
  std::vector<double> transition;           ///< p(e), rows sum to 1
  std::vector<double> edge_mass;            ///< mu([e]) = pi(source e) p(e)
  double log_lambda = 0.0;
  std::vector<double> left, right;

  /// Kolmogorov-Sinai entropy -sum mu(e) log p(e).
  double entropy() const;
  /// sum mu(e) f(e)
  double integrate(const EdgeFunction& f) const;
};

/// log spectral radius of the transfer matrix with weights e^{q}.
double shift_pressure(const MarkovShift& shift, const EdgeFunction& q,
                      const EigenOptions& options = {});

MarkovMeasure equilibrium_state(const MarkovShift& shift, const EdgeFunction& q,
                                const EigenOptions& options = {});

struct RootOptions {
  double tolerance = 1e-12;  ///< on |P_sigma(q - s r)|
  int max_iterations = 200;
  int max_expansions = 60;
  EigenOptions eigen;
};

/// Unique s with P_sigma(q - s*roof) = 0, i.e. the pressure of the flow
/// potential whose symbolic integral is q.
double flow_pressure(const MarkovShift& shift, const EdgeFunction& roof, const EdgeFunction& q,
                     const RootOptions& options = {});
/// Pressure of scale * system.potential().
double flow_pressure(const SuspensionSystem& system, double scale = 1.0,
                     const RootOptions& options = {});

/// Flow-invariant equilibrium state of the symbolic potential q: the shift
/// equilibrium state of q - P(q)*roof, together with P(q).
struct FlowEquilibrium {
  double pressure = 0.0;
  MarkovMeasure base;
  double mean_roof = 0.0;  ///< integral of the roof under the base measure

  /// Flow-measure integral of a time density psi: sum mu psi r / sum mu r.
  double integrate_density(const EdgeFunction& roof, const EdgeFunction& psi) const;
  /// Flow-measure average of a point-mass edge quantity: sum mu f / sum mu r.
  double integrate_point_mass(const EdgeFunction& f) const;
};

FlowEquilibrium flow_equilibrium(const MarkovShift& shift, const EdgeFunction& roof,
                                 const EdgeFunction& q, const RootOptions& options = {});

}  // namespace orbitlink
