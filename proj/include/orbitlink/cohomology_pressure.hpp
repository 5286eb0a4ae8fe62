#pragma once

#include <vector>

#include "orbitlink/pressure.hpp"
#include "orbitlink/suspension.hpp"

namespace orbitlink {

struct NewtonOptions {
  double gradient_tolerance = 1e-9;
  int max_iterations = 100;
  double hessian_step = 1e-4;  ///< central differences of the analytic gradient
  RootOptions root;
};

/// beta(t) = P(phi + sum t_i f_i) on R^b, where f_i places the i-th homology
/// label component on each edge as a point mass.  Holds the minimizer xi,
/// beta(xi) and the Hessian there.
class CohomologyPressure {
 public:
  CohomologyPressure(const SuspensionSystem& system, EdgeFunction potential, const NewtonOptions& options = {});

  std::size_t dimension() const { return b_; }
  const SuspensionSystem& system() const { return *system_; }
  const EdgeFunction& potential() const { return potential_; }
  /// Symbolic potential q + sum t_i h_i.
  EdgeFunction shifted_potential(const std::vector<double>& t) const;
  double value(const std::vector<double>& t) const;
  /// Analytic gradient: the winding cycle of the equilibrium state at t.
  std::vector<double> gradient(const std::vector<double>& t) const;
  /// Central-difference Hessian of the analytic gradient, row-major b x b.
  std::vector<double> hessian(const std::vector<double>& t) const;
  FlowEquilibrium equilibrium(const std::vector<double>& t) const;

  const std::vector<double>& minimizer() const { return xi_; }
  double minimum() const { return beta_; }
  const std::vector<double>& hessian_at_minimizer() const { return hessian_; }
  double hessian_determinant() const;
  /// Gradient norms of the Newton iterates.
  const std::vector<double>& trace() const { return trace_; }

 private:
  const SuspensionSystem* system_;
  EdgeFunction potential_;
  std::vector<EdgeFunction> components_;
  NewtonOptions options_;
  std::size_t b_ = 0;
  std::vector<double> xi_;
  double beta_ = 0.0;
  std::vector<double> hessian_;
  std::vector<double> trace_;
};

/// Minimizes beta by damped Newton.  Throws InvalidInput if the system is not
/// homologically full and ConvergenceError (with the gradient-norm trace) if
/// Newton fails within the iteration budget.  The system must outlive the
/// result.
CohomologyPressure build_cohomology_pressure(const SuspensionSystem& system, const EdgeFunction& potential,
                                             const NewtonOptions& options = {});

/// Winding cycle of a flow equilibrium: sum mu h_i / sum mu r.
std::vector<double> winding_cycle(const SuspensionSystem& system, const FlowEquilibrium& eq);

}  // namespace orbitlink
