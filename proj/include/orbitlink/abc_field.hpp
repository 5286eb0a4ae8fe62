#pragma once

#include <functional>
#include <string>
#include <vector>

#include "orbitlink/curve.hpp"

namespace orbitlink {

/// Closed-form vector field on the flat torus [0, 2pi)^3, integrated against
/// the normalized volume measure.
class AnalyticField {
 public:
  AnalyticField(std::function<Vec3(const Vec3&)> value, std::string name);
  /// Beltrami ABC flow X = (A sin z + C cos y, B sin x + A cos z, C sin y + B cos x).
  static AnalyticField abc(double A, double B, double C);

  Vec3 operator()(const Vec3& x) const { return value_(x); }
  const std::string& name() const { return name_; }
  AnalyticField scaled(double s) const;

 private:
  std::function<Vec3(const Vec3&)> value_;
  std::string name_;
};

/// Central-difference curl and divergence at step h.
Vec3 curl_fd(const AnalyticField& field, const Vec3& x, double h);
double divergence_fd(const AnalyticField& field, const Vec3& x, double h);

/// Largest |div X| and |curl X - X| over an n^3 grid (finite differences at step h).
double max_divergence(const AnalyticField& field, std::size_t n = 20, double h = 1e-4);
double max_beltrami_defect(const AnalyticField& field, std::size_t n = 20, double h = 1e-4);

struct HelicityEstimate {
  double value = 0.0;  ///< Richardson extrapolation of the two finest grids
  double error = 0.0;  ///< |value - finest grid value|
  std::vector<std::size_t> grids;
  std::vector<double> grid_values;  ///< mean of X . curl_h X on each grid
  double observed_order = 0.0;  ///< from the three grid values (NaN if fewer)
};

struct HelicityOptions {
  std::vector<std::size_t> grids{20, 40, 80};
  double beltrami_tolerance = 1e-6;  ///< relative to max |X| on the check grid
};

/// Helicity of a Beltrami field: with alpha = X^flat and d alpha = i_X Omega,
/// H = mean of X . curl X over the torus.  The curl is the periodic central
/// difference at the grid spacing, so each grid value is second order.
/// Throws InvalidInput if curl X = X fails on the check grid.
HelicityEstimate helicity_analytic(const AnalyticField& field, const HelicityOptions& options = {});

/// Grid mean of X . curl_h X on an n^3 periodic grid.
double helicity_on_grid(const AnalyticField& field, std::size_t n);

}  // namespace orbitlink
