#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <iosfwd>
#include <string>
#include <vector>

namespace orbitlink {

using Vec3 = Eigen::Vector3d;

/// Closed polygon in R^3 traversed in time.  Segment i runs from point i to
/// point i+1 (mod n) in time dt[i]; the velocity on it is constant.  Without
/// explicit times the curve is parameterized by arc length (unit speed).
class PolylineCurve {
 public:
  PolylineCurve() = default;
  /// Throws GeometryError for fewer than 3 points, repeated consecutive
  /// points or a self-intersection (non-adjacent segments closer than
  /// 1e-9 * diameter).
  PolylineCurve(std::vector<Vec3> points, std::vector<double> segment_time = {}, std::string label = {});

  std::size_t size() const { return points_.size(); }
  const std::vector<Vec3>& points() const { return points_; }
  const Vec3& point(std::size_t i) const { return points_[i]; }
  const Vec3& next(std::size_t i) const { return points_[(i + 1) % points_.size()]; }
  double segment_time(std::size_t i) const { return dt_[i]; }
  Vec3 velocity(std::size_t i) const { return (next(i) - point(i)) / dt_[i]; }
  double arc_length() const { return arc_length_; }
  /// Total traversal time, the orbit length l(gamma) for realized orbits.
  double period() const { return period_; }
  /// Bounding-box diagonal, used as the length scale for tolerances.
  double diameter() const;
  const std::string& label() const { return label_; }

  /// Same points, unit-speed timing.
  PolylineCurve unit_speed() const;
  /// x -> s * R x + t; times scale with s so the speed is preserved.
  PolylineCurve transformed(const Eigen::Matrix3d& rotation, const Vec3& translation, double scale = 1.0) const;
  PolylineCurve reversed() const;

 private:
  std::vector<Vec3> points_;
  std::vector<double> dt_;
  double arc_length_ = 0.0;
  double period_ = 0.0;
  std::string label_;
};

/// Distance between segments [a0,a1] and [b0,b1].
double segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1);
double min_distance(const PolylineCurve& a, const PolylineCurve& b);

/// Regular n-gon inscribed in the circle centre + r (cos t e1 + sin t e2).
PolylineCurve circle(const Vec3& centre, const Vec3& e1, const Vec3& e2, double radius, std::size_t n,
                     std::string label = {});

/// Standard Hopf pair: unit circle in the xy-plane about the origin and unit
/// circle in the xz-plane about (1,0,0), oriented so the linking number is +1.
std::pair<PolylineCurve, PolylineCurve> hopf_pair(std::size_t n);

/// CSV with columns x,y,z, one row per vertex.
void write_curve_csv(std::ostream& out, const PolylineCurve& curve);
PolylineCurve read_curve_csv(std::istream& in);

}  // namespace orbitlink
