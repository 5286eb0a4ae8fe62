#include "orbitlink/curve.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "orbitlink/error.hpp"
#include "orbitlink/numerics.hpp"
#include "orbitlink/system_io.hpp"

namespace orbitlink {

PolylineCurve::PolylineCurve(std::vector<Vec3> points, std::vector<double> segment_time, std::string label)
    : points_(std::move(points)), dt_(std::move(segment_time)), label_(std::move(label)) {
  const std::size_t n = points_.size();
  if (n < 3) throw GeometryError("curve needs at least 3 points");
  if (!dt_.empty() && dt_.size() != n) throw GeometryError("one segment time per segment required");
  const double diam = diameter();
  if (!(diam > 0.0) || !std::isfinite(diam)) throw GeometryError("degenerate curve");
  const bool unit = dt_.empty();
  if (unit) dt_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double len = (next(i) - point(i)).norm();
    if (len <= 1e-14 * diam) throw GeometryError("repeated consecutive point in curve '" + label_ + "'");
    arc_length_ += len;
    if (unit) dt_[i] = len;
    if (!(dt_[i] > 0.0)) throw GeometryError("segment times must be positive");
    period_ += dt_[i];
  }
  const double tol = 1e-9 * diam;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the closing segment
      if (segment_distance(point(i), next(i), point(j), next(j)) <= tol)
        throw GeometryError("curve '" + label_ + "' intersects itself");
    }
  }
}

double PolylineCurve::diameter() const {
  Vec3 lo = points_[0], hi = points_[0];
  for (const Vec3& p : points_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

PolylineCurve PolylineCurve::unit_speed() const { return PolylineCurve(points_, {}, label_); }

PolylineCurve PolylineCurve::transformed(const Eigen::Matrix3d& rotation, const Vec3& translation, double scale) const {
  std::vector<Vec3> pts;
  pts.reserve(points_.size());
  for (const Vec3& p : points_) pts.push_back(scale * (rotation * p) + translation);
  std::vector<double> dt(dt_);
  for (double& t : dt) t *= scale;
  return PolylineCurve(std::move(pts), std::move(dt), label_);
}

PolylineCurve PolylineCurve::reversed() const {
  std::vector<Vec3> pts(points_.rbegin(), points_.rend());
  // reversed segment i joins old points n-1-i and n-2-i, i.e. old segment n-2-i
  const std::size_t n = points_.size();
  std::vector<double> dt(n);
  for (std::size_t i = 0; i < n; ++i) dt[i] = dt_[(2 * n - 2 - i) % n];
  return PolylineCurve(std::move(pts), std::move(dt), label_);
}

double segment_distance(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2) {
  // closest points of two segments (Ericson, Real-Time Collision Detection 5.1.9)
  const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  double s = 0.0, t = 0.0;
  const double eps = 1e-300;
  if (a <= eps && e <= eps) return r.norm();
  if (a <= eps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= eps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p1 + d1 * s) - (p2 + d2 * t)).norm();
}

double min_distance(const PolylineCurve& a, const PolylineCurve& b) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      best = std::min(best, segment_distance(a.point(i), a.next(i), b.point(j), b.next(j)));
  return best;
}

PolylineCurve circle(const Vec3& centre, const Vec3& e1, const Vec3& e2, double radius, std::size_t n,
                     std::string label) {
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2 * kPi * static_cast<double>(k) / static_cast<double>(n);
    pts.push_back(centre + radius * (std::cos(t) * e1 + std::sin(t) * e2));
  }
  return PolylineCurve(std::move(pts), {}, std::move(label));
}

std::pair<PolylineCurve, PolylineCurve> hopf_pair(std::size_t n) {
  // the second circle crosses the disc of the first upwards at the origin
  return {circle(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), 1.0, n, "hopf-a"),
          circle(Vec3(1, 0, 0), Vec3::UnitX(), -Vec3::UnitZ(), 1.0, n, "hopf-b")};
}

void write_curve_csv(std::ostream& out, const PolylineCurve& curve) {
  out << "x,y,z\n";
  for (const Vec3& p : curve.points())
    out << format_number(p.x()) << ',' << format_number(p.y()) << ',' << format_number(p.z()) << '\n';
}

PolylineCurve read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "x,y,z") throw InvalidInput("curve CSV must start with header x,y,z");
  std::vector<Vec3> pts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    Vec3 p;
    char c1 = 0, c2 = 0;
    if (!(ss >> p.x() >> c1 >> p.y() >> c2 >> p.z()) || c1 != ',' || c2 != ',')
      throw InvalidInput("malformed curve CSV row: " + line);
    pts.push_back(p);
  }
  return PolylineCurve(std::move(pts));
}

}  // namespace orbitlink
