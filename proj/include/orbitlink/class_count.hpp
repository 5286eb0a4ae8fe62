#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "orbitlink/cohomology_pressure.hpp"
#include "orbitlink/orbits.hpp"

namespace orbitlink {

using HomologyClass = std::vector<std::int64_t>;

struct ClassCount {
  double log_pi = 0.0;  ///< log of the weighted count (-inf when empty)
  double pi = 0.0;
  std::size_t count = 0;
};

/// pi_phi(T, alpha, 1_window): sum of e^{int phi} over prime orbits in class
/// alpha with length in the window.
ClassCount count_in_class(const SuspensionSystem& system, const EdgeFunction& potential, const HomologyClass& alpha,
                          LengthWindow window, const EnumerationOptions& options = {});

/// Weighted counts of every attained class in the window.
std::map<HomologyClass, ClassCount> class_histogram(const SuspensionSystem& system, const EdgeFunction& potential,
                                                    LengthWindow window, const EnumerationOptions& options = {});

struct ClassCountPrediction {
  HomologyClass alpha;
  double T = 0.0;
  double predicted = 0.0;
  double observed = 0.0;
  double ratio = 0.0;  ///< observed / predicted
};

/// (2 pi)^{-b/2} det(H)^{-1/2} (int_a^b e^{beta x} dx) e^{-<alpha, xi>} e^{beta T} / T^{1 + b/2}
/// for the window offset (a, b] around T.
double predict_in_class(const CohomologyPressure& cp, const HomologyClass& alpha, LengthWindow offset, double T);

/// Per-T statistics of the class-alpha orbits in (T + offset.lo, T + offset.hi].
struct ClassWindowStats {
  double T = 0.0;
  ClassCount total;
  double mean_psi = 0.0;  ///< e^{w}-weighted mean of the orbit time averages of psi
  ClassCount deviating;   ///< orbits with |average - reference| >= epsilon
};

/// One enumeration pass over the union of the windows, binning each orbit into
/// every grid window that contains it.
std::vector<ClassWindowStats> class_window_sweep(const SuspensionSystem& system, const EdgeFunction& potential,
                                                 const HomologyClass& alpha, const EdgeFunction& psi,
                                                 double reference, double epsilon, std::span<const double> T_grid,
                                                 LengthWindow offset, const EnumerationOptions& options = {});

struct EquidistributionPoint {
  double T = 0.0;
  double orbital = 0.0;
  double reference = 0.0;
  double gap = 0.0;
  std::size_t count = 0;
  bool empty = false;  ///< class not attained in the window; gap undefined
};

/// |int psi d mu^0_{phi,T} - int psi d mu_{phi + f_xi}| on a T grid; psi is a
/// time density.
std::vector<EquidistributionPoint> equidistribute_in_class(const SuspensionSystem& system, const CohomologyPressure& cp,
                                                           const HomologyClass& alpha, const EdgeFunction& psi,
                                                           std::span<const double> T_grid, LengthWindow offset,
                                                           const EnumerationOptions& options = {});

struct LargeDeviationSeries {
  std::vector<double> T;
  std::vector<double> ratio;  ///< Xi / pi
  double reference = 0.0;
  double slope = 0.0;  ///< least-squares slope of log ratio against T
  bool exact_zero = false;  ///< every numerator vanished
};

LargeDeviationSeries large_deviation_ratio(const SuspensionSystem& system, const CohomologyPressure& cp,
                                           const HomologyClass& alpha, const EdgeFunction& psi, double epsilon,
                                           std::span<const double> T_grid, LengthWindow offset,
                                           const EnumerationOptions& options = {});

}  // namespace orbitlink
