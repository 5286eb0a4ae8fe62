#pragma once

#include <cstdint>
#include <vector>

#include "orbitlink/average_linking.hpp"
#include "orbitlink/double_integral.hpp"
#include "orbitlink/lorenz_template.hpp"
#include "orbitlink/orbits.hpp"
#include "orbitlink/suspension.hpp"

namespace orbitlink {

struct StudyOptions {
  TemplateSpec spec;
  double T_ref = 0.0;  ///< window (T_ref - 1, T_ref] for the reference measure; 0 means max(T) + 2
  double delta = 0.05;  ///< near-diagonal cutoff for the reference self terms
  double floor = 1e-6;  ///< hard floor for the expansivity check and quadrature
  std::size_t lambda_pairs = 100000;  ///< Lambda-bound scan supplying K (inflated x2)
  /// Restrict the partner window (T, T+1] to homology class 0 as well.
  /// Experimental; a no-op on systems without homology labels.
  bool partner_class_zero = false;
  bool refine_check = false;  ///< quadrature error estimate for the reference (4x cost)
  std::uint64_t seed = 1;
  unsigned threads = 1;
  EnumerationOptions enumeration;
};

struct StudyRow {
  double T = 0.0;
  AverageLinkingEntry average;  ///< L_phi(T)
  double reference = 0.0;
  double gap = 0.0;  ///< |L_phi(T) - reference|
  double min_separation = 0.0;  ///< section separation between the two windows
};

enum class GapVerdict { NoVerdict, NonIncreasing, Increasing };

struct StudyReport {
  std::vector<StudyRow> rows;
  DoubleIntegralEstimate reference;
  std::size_t reference_orbits = 0;
  double K_emp = 0.0;
  double min_separation = 0.0;  ///< over all rows
  bool separation_ok = false;  ///< min_separation > floor
  GapVerdict verdict = GapVerdict::NoVerdict;  ///< over the final three T
};

/// Weighted average linking L_phi(T) of template orbits between the windows
/// (T-1, T] (class 0) and (T, T+1], compared with the reference integral of
/// Lambda against mu x mu, mu the orbital measure of the window
/// (T_ref - 1, T_ref] weighted by exp(integral of phi).  Orbit weights use
/// the symbolic integral of phi.  The system must be the two-symbol shift on
/// one vertex; linking numbers come from template_linking.
StudyReport convergence_study(const SuspensionSystem& system, const EdgeFunction& phi, const std::vector<double>& T_grid,
                              const StudyOptions& options = {});

const char* to_string(GapVerdict v);

}  // namespace orbitlink
