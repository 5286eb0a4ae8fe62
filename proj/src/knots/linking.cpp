#include "orbitlink/linking.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "orbitlink/error.hpp"
#include "orbitlink/numerics.hpp"

namespace orbitlink {
namespace {

using Vec2 = Eigen::Vector2d;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

struct Projected {
  std::vector<Vec2> p;
  std::vector<double> h;
  Eigen::Vector4d box(std::size_t i) const {  // xmin, xmax, ymin, ymax of segment i
    const Vec2& a = p[i];
    const Vec2& b = p[(i + 1) % p.size()];
    return {std::min(a.x(), b.x()), std::max(a.x(), b.x()), std::min(a.y(), b.y()), std::max(a.y(), b.y())};
  }
};

Projected project(const PolylineCurve& c, const Vec3& e1, const Vec3& e2, const Vec3& d) {
  Projected out;
  out.p.reserve(c.size());
  out.h.reserve(c.size());
  for (const Vec3& x : c.points()) {
    out.p.emplace_back(x.dot(e1), x.dot(e2));
    out.h.push_back(x.dot(d));
  }
  return out;
}

void check_separation(const PolylineCurve& a, const PolylineCurve& b, double& dist) {
  dist = min_distance(a, b);
  const double floor = 1e-6 * std::max(a.diameter(), b.diameter());
  if (dist < floor) throw DomainError("curves too close for a stable linking evaluation");
}

double lambda_ordered(const Vec3& x, const Vec3& y, const Vec3& Xx, const Vec3& Xy) {
  const Vec3 d = x - y;
  const double r2 = d.squaredNorm();
  if (r2 == 0.0) throw DomainError("lambda kernel evaluated at coincident points");
  return Xx.cross(Xy).dot(d) / (4 * kPi * r2 * std::sqrt(r2));
}

}  // namespace

std::optional<int> crossing_linking_along(const PolylineCurve& a, const PolylineCurve& b, const Vec3& direction) {
  const Vec3 d = direction.normalized();
  Vec3 e1 = std::fabs(d.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  e1 = (e1 - e1.dot(d) * d).normalized();
  const Vec3 e2 = d.cross(e1);
  const Projected pa = project(a, e1, e2, d), pb = project(b, e1, e2, d);
  const double scale = std::max(a.diameter(), b.diameter());
  const double eps = 1e-10;

  std::vector<Eigen::Vector4d> boxes_b(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) boxes_b[j] = pb.box(j);

  int twice = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Eigen::Vector4d ba = pa.box(i);
    const Vec2 A0 = pa.p[i], r = pa.p[(i + 1) % a.size()] - A0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Eigen::Vector4d& bb = boxes_b[j];
      if (ba(1) < bb(0) || bb(1) < ba(0) || ba(3) < bb(2) || bb(3) < ba(2)) continue;
      const Vec2 B0 = pb.p[j], s = pb.p[(j + 1) % b.size()] - B0;
      const double denom = cross2(r, s);
      if (std::fabs(denom) <= eps * r.norm() * s.norm()) {
        // parallel in projection: degenerate only if they touch
        const Vec3 a0(A0.x(), A0.y(), 0), a1(A0.x() + r.x(), A0.y() + r.y(), 0);
        const Vec3 b0(B0.x(), B0.y(), 0), b1(B0.x() + s.x(), B0.y() + s.y(), 0);
        if (segment_distance(a0, a1, b0, b1) <= eps * scale) return std::nullopt;
        continue;
      }
      const Vec2 w = B0 - A0;
      const double t = cross2(w, s) / denom, u = cross2(w, r) / denom;
      if (t < -eps || t > 1 + eps || u < -eps || u > 1 + eps) continue;
      if (t < eps || t > 1 - eps || u < eps || u > 1 - eps) return std::nullopt;  // through a projected vertex
      const double ha = pa.h[i] + t * (pa.h[(i + 1) % a.size()] - pa.h[i]);
      const double hb = pb.h[j] + u * (pb.h[(j + 1) % b.size()] - pb.h[j]);
      if (std::fabs(ha - hb) <= eps * scale) return std::nullopt;
      const Vec3 ta = a.next(i) - a.point(i), tb = b.next(j) - b.point(j);
      const double det = ha > hb ? ta.cross(tb).dot(d) : tb.cross(ta).dot(d);
      twice += det > 0 ? 1 : -1;
    }
  }
  if (twice % 2 != 0) return std::nullopt;
  return twice / 2;
}

int crossing_linking(const PolylineCurve& a, const PolylineCurve& b, const CrossingOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Vec3 d = options.direction;
  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    if (auto lk = crossing_linking_along(a, b, d)) return *lk;
    d = options.direction.normalized() + 0.3 * Vec3(normal(rng), normal(rng), normal(rng));
  }
  throw GeometryError("no generic projection found for crossing count");
}

double gauss_linking(const PolylineCurve& a, const PolylineCurve& b) {
  double dist = 0.0;
  check_separation(a, b, dist);
  // Klenin & Langowski segment-pair solid angle
  auto unit_cross = [](const Vec3& x, const Vec3& y, bool& ok) {
    Vec3 c = x.cross(y);
    const double n = c.norm();
    ok = ok && n > 0.0;
    return n > 0.0 ? Vec3(c / n) : Vec3::Zero();
  };
  // asin(n.m) as pi/2 - angle(n, m); the atan2 form keeps precision near +-1
  auto asin_dot = [](const Vec3& n, const Vec3& m) { return 0.5 * kPi - std::atan2(n.cross(m).norm(), n.dot(m)); };
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec3& p1 = a.point(i);
    const Vec3& p2 = a.next(i);
    double row = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const Vec3& p3 = b.point(j);
      const Vec3& p4 = b.next(j);
      const Vec3 r13 = p3 - p1, r14 = p4 - p1, r23 = p3 - p2, r24 = p4 - p2;
      bool ok = true;
      const Vec3 n1 = unit_cross(r13, r14, ok), n2 = unit_cross(r14, r24, ok);
      const Vec3 n3 = unit_cross(r24, r23, ok), n4 = unit_cross(r23, r13, ok);
      if (!ok) continue;  // coplanar quadrilateral: zero solid angle
      const double omega = asin_dot(n1, n2) + asin_dot(n2, n3) + asin_dot(n3, n4) + asin_dot(n4, n1);
      const double orient = (p4 - p3).cross(p2 - p1).dot(r13);
      row += orient > 0 ? omega : (orient < 0 ? -omega : 0.0);
    }
    total += row;
  }
  return total / (4 * kPi);
}

LinkingResult link(const PolylineCurve& a, const PolylineCurve& b, const CrossingOptions& options) {
  LinkingResult r;
  r.numeric = gauss_linking(a, b);
  r.exact = crossing_linking(a, b, options);
  r.error = std::fabs(r.numeric - r.exact);
  r.min_distance = min_distance(a, b);
  return r;
}

double lambda_kernel(const Vec3& x, const Vec3& y, const Vec3& Xx, const Vec3& Xy) {
  // evaluate in a canonical argument order so swapping is bit-exact
  const bool ordered = std::lexicographical_compare(x.data(), x.data() + 3, y.data(), y.data() + 3);
  return ordered ? lambda_ordered(x, y, Xx, Xy) : lambda_ordered(y, x, Xy, Xx);
}

double orbit_pair_integral(const PolylineCurve& a, const PolylineCurve& b, std::size_t nodes_per_segment) {
  if (nodes_per_segment == 0) throw InvalidInput("need at least one node per segment");
  double dist = 0.0;
  check_separation(a, b, dist);
  struct Node {
    Vec3 x, v;
    double w;
  };
  auto nodes = [nodes_per_segment](const PolylineCurve& c) {
    std::vector<Node> out;
    out.reserve(c.size() * nodes_per_segment);
    const double k = static_cast<double>(nodes_per_segment);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Vec3 step = c.next(i) - c.point(i);
      for (std::size_t m = 0; m < nodes_per_segment; ++m)
        out.push_back({c.point(i) + (static_cast<double>(m) + 0.5) / k * step, c.velocity(i), c.segment_time(i) / k});
    }
    return out;
  };
  const auto na = nodes(a), nb = nodes(b);
  double total = 0.0;
  for (const Node& p : na) {
    double row = 0.0;
    for (const Node& q : nb) row += lambda_kernel(p.x, q.x, p.v, q.v) * q.w;
    total += row * p.w;
  }
  return total / (a.period() * b.period());
}

}  // namespace orbitlink
