#include <doctest.h>

#include <Eigen/Geometry>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "orbitlink/error.hpp"
#include "orbitlink/fixtures.hpp"
#include "orbitlink/orbits.hpp"
#include "orbitlink/lambda_scan.hpp"
#include "orbitlink/linking.hpp"
#include "orbitlink/lorenz_template.hpp"
#include "orbitlink/numerics.hpp"

using namespace orbitlink;

namespace {

using Param = std::function<Vec3(double)>;

// Gauss integral of two smooth closed curves by the periodic trapezoid rule,
// derivatives by central differences.
double smooth_gauss(const Param& a, const Param& b, int n) {
  const double h = 2 * kPi / n, d = 1e-5;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = i * h;
    const Vec3 x = a(s), dx = (a(s + d) - a(s - d)) / (2 * d);
    for (int j = 0; j < n; ++j) {
      const double t = j * h;
      const Vec3 y = b(t), dy = (b(t + d) - b(t - d)) / (2 * d);
      const Vec3 r = x - y;
      sum += dx.cross(dy).dot(r) / std::pow(r.norm(), 3);
    }
  }
  return sum * h * h / (4 * kPi);
}

Param torus_component(int k) {
  return [k](double t) {
    const double phase = 2 * t + k * kPi;
    return Vec3((2 + std::cos(phase)) * std::cos(t), (2 + std::cos(phase)) * std::sin(t), std::sin(phase));
  };
}

PolylineCurve sample(const Param& p, int n) {
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i) pts.push_back(p(2 * kPi * i / n));
  return PolylineCurve(pts);
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  return q.normalized().toRotationMatrix();
}

std::vector<EdgeId> w(std::initializer_list<EdgeId> e) { return e; }

}  // namespace

TEST_CASE("curve construction rejects bad input") {
  CHECK_THROWS_AS(PolylineCurve({Vec3(0, 0, 0), Vec3(1, 0, 0)}), GeometryError);
  CHECK_THROWS_AS(PolylineCurve({Vec3(0, 0, 0), Vec3(0, 0, 0), Vec3(1, 0, 0)}), GeometryError);
  // figure-eight through the origin
  CHECK_THROWS_AS(PolylineCurve({Vec3(-1, -1, 0), Vec3(1, 1, 0), Vec3(1, -1, 0), Vec3(-1, 1, 0)}), GeometryError);
  const auto c = circle(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), 2.0, 6);
  CHECK(c.arc_length() == doctest::Approx(12.0));
  CHECK(c.period() == doctest::Approx(12.0));
  CHECK(c.diameter() == doctest::Approx(std::sqrt(16.0 + 12.0)));
  std::stringstream ss;
  write_curve_csv(ss, c);
  const auto back = read_curve_csv(ss);
  REQUIRE(back.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) CHECK((back.point(i) - c.point(i)).norm() < 1e-11);
}

TEST_CASE("segment distance") {
  CHECK(segment_distance(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, -1, 1), Vec3(0.5, 1, 1)) == doctest::Approx(1.0));
  CHECK(segment_distance(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(3, 0, 0)) == doctest::Approx(1.0));
  CHECK(segment_distance(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("Hopf link has linking number +1") {
  const auto [a, b] = hopf_pair(64);
  CHECK(crossing_linking(a, b) == 1);
  CHECK(gauss_linking(a, b) == doctest::Approx(1.0).epsilon(1e-10));
  // smooth oracle on the exact circles
  const Param ca = [](double t) { return Vec3(std::cos(t), std::sin(t), 0); };
  const Param cb = [](double t) { return Vec3(1 + std::cos(t), 0, -std::sin(t)); };
  CHECK(smooth_gauss(ca, cb, 200) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(crossing_linking(a, b.reversed()) == -1);
  CHECK(gauss_linking(a.reversed(), b) == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("split circles do not link") {
  const auto a = circle(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), 1.0, 40);
  const auto b = circle(Vec3(3, 0, 0), Vec3::UnitY(), Vec3::UnitZ(), 1.0, 40);
  CHECK(crossing_linking(a, b) == 0);
  CHECK(std::fabs(gauss_linking(a, b)) < 1e-10);
  CHECK(std::fabs(orbit_pair_integral(a, b)) < 1e-6);
}

TEST_CASE("(2,4) torus link") {
  const auto a = sample(torus_component(0), 120), b = sample(torus_component(1), 120);
  const int lk = crossing_linking(a, b);
  CHECK(std::abs(lk) == 2);
  CHECK(gauss_linking(a, b) == doctest::Approx(lk).epsilon(1e-9));
  CHECK(smooth_gauss(torus_component(0), torus_component(1), 200) == doctest::Approx(lk).epsilon(1e-5));
  CHECK(crossing_linking(b, a) == lk);
  CHECK(gauss_linking(b, a) == doctest::Approx(gauss_linking(a, b)).epsilon(1e-12));
}

TEST_CASE("linking is invariant under rigid motions and projection choice") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  const auto a = sample(torus_component(0), 90), b = sample(torus_component(1), 90);
  const int lk = crossing_linking(a, b);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Matrix3d R = random_rotation(rng);
    const Vec3 t(g(rng), g(rng), g(rng));
    const double s = std::exp(g(rng));
    const auto ra = a.transformed(R, t, s), rb = b.transformed(R, t, s);
    CHECK(crossing_linking(ra, rb) == lk);
    CHECK(gauss_linking(ra, rb) == doctest::Approx(lk).epsilon(1e-9));
    CrossingOptions opts;
    opts.direction = Vec3(g(rng), g(rng), g(rng));
    opts.seed = 100 + trial;
    CHECK(crossing_linking(a, b, opts) == lk);
  }
}

TEST_CASE("degenerate projections are retried") {
  // axis-aligned squares seen along z: a vertex of one projects onto an edge of the other
  const PolylineCurve a({Vec3(-1, -1, 0), Vec3(1, -1, 0), Vec3(1, 1, 0), Vec3(-1, 1, 0)});
  const PolylineCurve b({Vec3(1, 0, -1), Vec3(1, 0, 1), Vec3(3, 0, 1), Vec3(3, 0, -1)});
  CHECK_FALSE(crossing_linking_along(a, b, Vec3::UnitY()).has_value());
  CrossingOptions opts;
  opts.direction = Vec3::UnitY();
  CHECK_THROWS_AS(gauss_linking(a, b), DomainError);  // the curves touch
  const PolylineCurve c({Vec3(1.5, 0, -1), Vec3(1.5, 0, 1), Vec3(3, 0, 1), Vec3(3, 0, -1)});
  CHECK(crossing_linking(a, c, opts) == 0);
}

TEST_CASE("Gauss sum is exact under refinement") {
  // inserting midpoints does not change the polygons
  const auto [a, b] = hopf_pair(50);
  std::vector<Vec3> fine;
  for (std::size_t i = 0; i < a.size(); ++i) {
    fine.push_back(a.point(i));
    fine.push_back(0.5 * (a.point(i) + a.next(i)));
  }
  CHECK(std::fabs(gauss_linking(PolylineCurve(fine), b) - gauss_linking(a, b)) < 1e-9);
  // doubling the sampling of the true circles changes the value by less than 1e-9
  const auto [a2, b2] = hopf_pair(100);
  CHECK(std::fabs(gauss_linking(a2, b2) - gauss_linking(a, b)) < 1e-9);
}

TEST_CASE("lambda kernel") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  auto rv = [&] { return Vec3(g(rng), g(rng), g(rng)); };
  for (int i = 0; i < 1000; ++i) {
    const Vec3 x = rv(), y = rv(), X = rv(), Y = rv();
    const double l1 = lambda_kernel(x, y, X, Y), l2 = lambda_kernel(y, x, Y, X);
    CHECK(l1 == l2);
  }
  // orthogonal unit vectors at unit separation along their cross product
  CHECK(lambda_kernel(Vec3(0, 0, 1), Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY()) ==
        doctest::Approx(1.0 / (4 * kPi)));
  CHECK(lambda_kernel(Vec3(0, 0, -2), Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY()) ==
        doctest::Approx(-1.0 / (16 * kPi)));
  CHECK(lambda_kernel(Vec3(1, 0, 0), Vec3::Zero(), Vec3::UnitX(), Vec3::UnitX()) == 0.0);
  CHECK_THROWS_AS(lambda_kernel(Vec3::Zero(), Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY()), DomainError);
}

TEST_CASE("pair integral approaches lk over the product of lengths") {
  const auto [a, b] = hopf_pair(400);
  const double lk = crossing_linking(a, b);
  CHECK(std::fabs(orbit_pair_integral(a, b) - lk / (4 * kPi * kPi)) < 1e-4);
  CHECK(std::fabs(orbit_pair_integral(a, b) - lk / (a.period() * b.period())) < 1e-5);

  // second order in the node spacing
  const auto [c, d] = hopf_pair(32);
  const double exact = crossing_linking(c, d) / (c.period() * d.period());
  const double e1 = orbit_pair_integral(c, d, 1) - exact;
  const double e2 = orbit_pair_integral(c, d, 2) - exact;
  const double e4 = orbit_pair_integral(c, d, 4) - exact;
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(e2 / e4 == doctest::Approx(4.0).epsilon(0.1));

  // value times the length product is scale invariant
  const double s = 3.7;
  const auto cs = c.transformed(Eigen::Matrix3d::Identity(), Vec3(1, 2, 3), s);
  const auto ds = d.transformed(Eigen::Matrix3d::Identity(), Vec3(1, 2, 3), s);
  CHECK(orbit_pair_integral(cs, ds) * cs.period() * ds.period() ==
        doctest::Approx(orbit_pair_integral(c, d) * c.period() * d.period()).epsilon(1e-10));
}

TEST_CASE("pair integral uses the curve timing") {
  // doubling every segment time halves the velocity and doubles the period
  const auto [a, b] = hopf_pair(64);
  std::vector<double> slow(a.size(), 2.0 * a.segment_time(0));
  const PolylineCurve a2(a.points(), slow);
  CHECK(a2.period() == doctest::Approx(2 * a.period()));
  CHECK(orbit_pair_integral(a2, b) == doctest::Approx(orbit_pair_integral(a, b) / 2).epsilon(1e-12));
}

TEST_CASE("template section coordinates") {
  const auto s = section_points(w({0, 1}));
  REQUIRE(s.size() == 2);
  CHECK(s[0].first == doctest::Approx(1.0 / 3));
  CHECK(s[1].first == doctest::Approx(2.0 / 3));
  // past of position 0 is ...0101 with the last symbol 1
  CHECK(s[0].second == doctest::Approx(1.0 / 4));
  CHECK(s[1].second == doctest::Approx(3.0 / 4));
  // the return map sends section point k to k+1
  for (const auto& word : {w({0, 0, 1}), w({0, 1, 1, 0, 1})}) {
    const auto p = section_points(word);
    for (std::size_t k = 0; k < word.size(); ++k) {
      const auto [u, v] = p[k];
      const double u1 = word[k] == 0 ? 2 * u : 2 * u - 1;
      const double v1 = word[k] == 0 ? v / 3 + 2.0 / 3 : v / 3;
      CHECK(u1 == doctest::Approx(p[(k + 1) % word.size()].first).epsilon(1e-12));
      CHECK(v1 == doctest::Approx(p[(k + 1) % word.size()].second).epsilon(1e-12));
    }
  }
}

TEST_CASE("template flow is continuous through the section") {
  TemplateSpec spec;
  for (double u : {0.1, 0.3, 0.6, 0.9}) {
    for (double v : {0.2, 0.7}) {
      const TemplateState s{u, v, 1.0 - 1e-9};
      const double u1 = u < 0.5 ? 2 * u : 2 * u - 1, v1 = u < 0.5 ? v / 3 + 2.0 / 3 : v / 3;
      const TemplateState r{u1, v1, 0.0};
      CHECK((template_position(spec, s) - template_position(spec, r)).norm() < 1e-6);
      CHECK((template_velocity(spec, s).normalized() - template_velocity(spec, r).normalized()).norm() < 1e-6);
    }
  }
  // velocity is the time derivative of position
  const TemplateState s{0.3, 0.4, 0.37};
  const double h = 1e-6;
  const Vec3 fd = (template_position(spec, {s.u, s.v, s.tau + h}) - template_position(spec, {s.u, s.v, s.tau - h})) / (2 * h);
  CHECK((fd - template_velocity(spec, s)).norm() < 1e-6);
}

TEST_CASE("realized template orbits") {
  TemplateSpec spec;
  const std::vector<std::vector<EdgeId>> words = {w({0}), w({1}), w({0, 1}), w({0, 0, 1}), w({0, 1, 1}),
                                                  w({0, 0, 0, 1}), w({0, 0, 1, 1}), w({0, 1, 1, 1})};
  std::vector<PolylineCurve> curves;
  for (const auto& word : words) curves.push_back(realize_orbit(spec, word));
  CHECK(curves[2].period() == doctest::Approx(2.0));
  CHECK(curves[2].size() == 2 * spec.samples_per_symbol);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    for (std::size_t j = i + 1; j < curves.size(); ++j) {
      CHECK(min_distance(curves[i], curves[j]) > 1e-3);
      const auto r = link(curves[i], curves[j]);
      CHECK(r.error < 1e-6);
      CHECK(crossing_linking(curves[j], curves[i]) == r.exact);
      // Lorenz links are positive braids
      CHECK(r.exact >= 0);
    }
  }
  CHECK(crossing_linking(curves[2], curves[6]) == static_cast<int>(std::lround(gauss_linking(curves[2], curves[6]))));
  // refining the sampling keeps the linking number
  CHECK(crossing_linking(realize_orbit(spec, words[2], 32), realize_orbit(spec, words[6], 32)) ==
        crossing_linking(curves[2], curves[6]));
  CHECK_THROWS_AS(realize_orbit(spec, w({0, 2})), InvalidInput);
}

TEST_CASE("lambda bound scan") {
  LambdaScanOptions opts;
  opts.pairs = 20000;
  const auto r = lambda_bound_scan({}, opts);
  REQUIRE(r.decades.size() == 3);
  CHECK(r.decades.front().r_lo == doctest::Approx(1e-2));
  CHECK(r.decades.back().r_lo == doctest::Approx(1e-4));
  for (const auto& d : r.decades) CHECK(d.samples > 1000);
  CHECK(r.bounded);
  CHECK(r.K_emp > 0);
  CHECK(r.K_emp < 10);
  opts.threads = 3;
  const auto r3 = lambda_bound_scan({}, opts);
  CHECK(r3.K_emp == r.K_emp);
}

TEST_CASE("combinatorial template linking matches the realized curves") {
  TemplateSpec spec;
  std::vector<std::vector<EdgeId>> words;
  for (const auto& o : enumerate_by_word_length(fixtures::lorenz_template_system(), 6)) words.push_back(o.word);
  REQUIRE(words.size() == 23);
  std::vector<PolylineCurve> curves;
  for (const auto& word : words) curves.push_back(realize_orbit(spec, word));
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      const int lk = template_linking(words[i], words[j]);
      CHECK(lk == crossing_linking(curves[i], curves[j]));
      CHECK(lk == template_linking(words[j], words[i]));
    }
  }
  std::vector<EdgeId> long_word(40, 0);
  long_word.back() = 1;
  CHECK_THROWS_AS(template_linking(long_word, long_word), InvalidInput);
}

TEST_CASE("section separation bounds the curve distance") {
  TemplateSpec spec;
  const std::vector<std::vector<EdgeId>> a = {w({0, 0, 1, 1, 1}), w({0, 1, 0, 1, 1})};
  const std::vector<std::vector<EdgeId>> b = {w({0, 0, 1, 0, 1, 1}), w({0, 1, 1, 1, 1, 1})};
  const double sep = section_separation(spec, a, b);
  double direct = 1e9, curves = 1e9;
  for (const auto& x : a)
    for (const auto& y : b) {
      for (const auto& [u, v] : section_points(x))
        for (const auto& [u2, v2] : section_points(y))
          direct = std::min(direct, std::hypot((u - u2) * spec.branch_length, 2 * spec.lift * (v - v2)));
      curves = std::min(curves, min_distance(realize_orbit(spec, x), realize_orbit(spec, y)));
    }
  CHECK(sep == doctest::Approx(direct).epsilon(1e-12));
  CHECK(curves <= sep + 1e-12);
  CHECK(curves > 0.1 * sep);
}
