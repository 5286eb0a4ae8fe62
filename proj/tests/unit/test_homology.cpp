#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "orbitlink/class_count.hpp"
#include "orbitlink/cohomology_pressure.hpp"
#include "orbitlink/fixtures.hpp"
#include "orbitlink/homology_full.hpp"
#include "orbitlink/numerics.hpp"
#include "orbitlink/orbits.hpp"

using namespace orbitlink;

namespace {

// beta(t) for the asymmetric fixture solves e^{t - b} + e^{-t - sqrt2 b} = 1.
double asymmetric_beta(double t) {
  return oracle::bisect_decreasing([t](double b) { return std::exp(t - b) + std::exp(-t - std::sqrt(2.0) * b) - 1.0; },
                                   -10.0, 10.0);
}

}  // namespace

TEST_CASE("orbit homology is additive") {
  const SuspensionSystem sys(full_shift(3), EdgeFunction::constant(3, 1.0), EdgeFunction::constant(3, 0.0),
                             {{1}, {-1}, {2}});
  CHECK(make_orbit(sys, std::vector<EdgeId>{0, 1}).homology == HomologyClass{0});
  CHECK(make_orbit(sys, std::vector<EdgeId>{2}).homology == HomologyClass{2});
  CHECK(make_orbit(sys, std::vector<EdgeId>{0, 0, 1}).homology == HomologyClass{1});
  const auto a = make_orbit(sys, std::vector<EdgeId>{0, 2});
  const auto b = make_orbit(sys, std::vector<EdgeId>{1, 1, 2});
  const auto ab = make_orbit(sys, std::vector<EdgeId>{0, 2, 1, 1, 2});
  CHECK(ab.homology[0] == a.homology[0] + b.homology[0]);
}

TEST_CASE("homologically full check") {
  auto r = homologically_full_check(fixtures::positive_labels());
  CHECK(r.verdict == FullVerdict::NotFull);
  CHECK(r.separating == std::vector<double>{1.0});

  r = homologically_full_check(fixtures::symmetric());
  CHECK(r.verdict == FullVerdict::Full);
  CHECK(r.witness.size() == 2);

  r = homologically_full_check(fixtures::planar_four());
  CHECK(r.verdict == FullVerdict::Full);
  REQUIRE(r.witness.size() == 3);
  // the witness simplex contains 0: solve for barycentric weights independently
  Eigen::Matrix3d m;
  for (int j = 0; j < 3; ++j) m.col(j) << r.witness[j][0], r.witness[j][1], 1.0;
  const Eigen::Vector3d lambda = m.fullPivLu().solve(Eigen::Vector3d(0, 0, 1));
  CHECK((lambda.array() > 0).all());

  // labels (1,0), (0,1), (-1,-1): full; labels (1,0), (0,1): not full in b = 2
  const SuspensionSystem tri(full_shift(3), EdgeFunction::constant(3, 1.0), EdgeFunction::constant(3, 0.0),
                             {{1, 0}, {0, 1}, {-1, -1}});
  CHECK(homologically_full_check(tri).verdict == FullVerdict::Full);
  const SuspensionSystem quadrant(full_shift(2), EdgeFunction::constant(2, 1.0), EdgeFunction::constant(2, 0.0),
                                  {{1, 0}, {0, 1}});
  r = homologically_full_check(quadrant);
  CHECK(r.verdict == FullVerdict::NotFull);
  REQUIRE(r.separating.size() == 2);
  CHECK(r.separating[0] >= 0.0);
  CHECK(r.separating[1] >= 0.0);
  // all labels on a line: the hull has empty interior in R^2
  const SuspensionSystem line(full_shift(2), EdgeFunction::constant(2, 1.0), EdgeFunction::constant(2, 0.0),
                              {{1, 1}, {-1, -1}});
  CHECK(homologically_full_check(line).verdict == FullVerdict::NotFull);

  // a two-vertex graph with horizon 1 sees no cycle through vertex 1
  const SuspensionSystem two(MarkovShift(2, {{0, 1}, {1, 0}, {0, 0}}), EdgeFunction::constant(3, 1.0),
                             EdgeFunction::constant(3, 0.0), {{1}, {1}, {1}});
  CHECK(homologically_full_check(two, 1).verdict == FullVerdict::Inconclusive);
  CHECK(homologically_full_check(two).verdict == FullVerdict::NotFull);
}

TEST_CASE("beta on the symmetric fixture is log(2 cosh t)") {
  const auto sys = fixtures::symmetric();
  const auto cp = build_cohomology_pressure(sys, sys.potential());
  REQUIRE(cp.dimension() == 1);
  CHECK(std::fabs(cp.minimizer()[0]) < 1e-9);
  CHECK(std::fabs(cp.minimum() - std::log(2.0)) < 1e-10);
  // d^2/dt^2 log(2 cosh t) = 1 / cosh^2 t
  CHECK(std::fabs(cp.hessian_at_minimizer()[0] - 1.0) < 1e-4);
  for (double t : {-1.3, -0.2, 0.5, 2.0}) {
    CHECK(std::fabs(cp.value({t}) - std::log(2 * std::cosh(t))) < 1e-10);
    CHECK(std::fabs(cp.gradient({t})[0] - std::tanh(t)) < 1e-9);
    CHECK(std::fabs(cp.hessian({t})[0] - 1.0 / (std::cosh(t) * std::cosh(t))) < 1e-6);
  }
}

TEST_CASE("asymmetric fixture minimizer against a dense scan") {
  const auto sys = fixtures::asymmetric();
  const auto cp = build_cohomology_pressure(sys, sys.potential());
  double best_t = 0.0, best = 1e300;
  for (int i = -4000; i <= 4000; ++i) {
    const double t = i * 1e-4;
    const double v = asymmetric_beta(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  CHECK(std::fabs(cp.minimizer()[0] - best_t) < 2e-4);
  CHECK(std::fabs(cp.minimizer()[0]) > 0.05);
  CHECK(std::fabs(cp.minimum() - best) < 1e-8);
  CHECK(std::fabs(cp.gradient(cp.minimizer())[0]) < 1e-9);
  CHECK(cp.minimum() <= cp.value({0.0}));
  for (double t : {-0.7, 0.1, 0.9}) CHECK(std::fabs(cp.value({t}) - asymmetric_beta(t)) < 1e-10);
}

TEST_CASE("convexity and gradient identity") {
  for (const auto& sys : {fixtures::asymmetric(), fixtures::planar_four(), fixtures::symmetric_mixing()}) {
    const auto cp = build_cohomology_pressure(sys, sys.potential());
    const std::size_t b = cp.dimension();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.5, 1.5), lam(0.01, 0.99);
    for (int k = 0; k < 30; ++k) {
      std::vector<double> t(b), s(b), mid(b);
      for (std::size_t i = 0; i < b; ++i) {
        t[i] = u(rng);
        s[i] = u(rng);
      }
      const double l = lam(rng);
      for (std::size_t i = 0; i < b; ++i) mid[i] = l * t[i] + (1 - l) * s[i];
      CHECK(cp.value(mid) <= l * cp.value(t) + (1 - l) * cp.value(s) + 1e-10);

      const auto g = cp.gradient(t);
      for (std::size_t i = 0; i < b; ++i) {
        auto p = t, m = t;
        p[i] += 1e-5;
        m[i] -= 1e-5;
        CHECK(std::fabs((cp.value(p) - cp.value(m)) / 2e-5 - g[i]) < 1e-6);
      }
    }
    for (double x : cp.gradient(cp.minimizer())) CHECK(std::fabs(x) < 1e-9);
    CHECK(cp.hessian_determinant() > 0.0);
  }
  CHECK_THROWS_AS(build_cohomology_pressure(fixtures::positive_labels(), fixtures::positive_labels().potential()),
                  InvalidInput);
}

TEST_CASE("count in class examples") {
  const auto sys = fixtures::symmetric();
  const EdgeFunction zero = EdgeFunction::constant(2, 0.0);
  CHECK(count_in_class(sys, zero, {0}, {2.0, 3.0}).count == 0);
  auto c = count_in_class(sys, zero, {0}, {3.0, 4.0});
  CHECK(c.count == 1);
  CHECK(c.pi == doctest::Approx(1.0));
  CHECK(count_in_class(sys, zero, {9}, {3.0, 4.0}).count == 0);

  // phi = c shifts every term by e^{c l}
  const auto shifted = count_in_class(sys, EdgeFunction::constant(2, 0.3), {0}, {9.0, 10.0});
  const auto base = count_in_class(sys, zero, {0}, {9.0, 10.0});
  CHECK(shifted.log_pi == doctest::Approx(base.log_pi + 0.3 * 10));

  // classes partition the unconstrained count
  const auto mixing = fixtures::symmetric_mixing();
  const EdgeFunction q({0.1, -0.2, 0.3, 0.0});
  const LengthWindow w{7.0, 8.0};
  LogSumExp total;
  std::size_t n = 0;
  for (const auto& [alpha, cc] : class_histogram(mixing, q, w)) {
    total.add(cc.log_pi);
    n += cc.count;
    CHECK(cc.count == count_in_class(mixing, q, alpha, w).count);
  }
  LogSumExp direct;
  const auto orbits = enumerate_orbits(mixing, w);
  for (const auto& o : orbits) {
    double s = 0.0;
    for (EdgeId e : o.word) s += q[e];
    direct.add(s);
  }
  CHECK(n == orbits.size());
  CHECK(total.value() == doctest::Approx(direct.value()).epsilon(1e-13));
}

TEST_CASE("class count prediction formula") {
  const auto sys = fixtures::symmetric();
  const auto cp = build_cohomology_pressure(sys, sys.potential());
  for (double T : {10.0, 15.0}) {
    const double integral = (1.0 - std::exp(-std::log(2.0))) / std::log(2.0);
    const double expected = integral * std::pow(2.0, T) / (std::sqrt(2 * kPi) * std::pow(T, 1.5));
    CHECK(predict_in_class(cp, {0}, {-1.0, 0.0}, T) == doctest::Approx(expected).epsilon(1e-4));
    CHECK(predict_in_class(cp, {3}, {-1.0, 0.0}, T) ==
          doctest::Approx(predict_in_class(cp, {0}, {-1.0, 0.0}, T)).epsilon(1e-8));
  }
  const auto asym = fixtures::asymmetric();
  const auto ca = build_cohomology_pressure(asym, asym.potential());
  const double xi = ca.minimizer()[0];
  CHECK(predict_in_class(ca, {2}, {-1.0, 0.0}, 12.0) / predict_in_class(ca, {-2}, {-1.0, 0.0}, 12.0) ==
        doctest::Approx(std::exp(-4.0 * xi)).epsilon(1e-12));
}

TEST_CASE("equidistribution in a class") {
  const auto sys = fixtures::symmetric_mixing();
  const auto cp = build_cohomology_pressure(sys, sys.potential());
  std::vector<double> grid{8, 9, 10};
  for (const auto& p : equidistribute_in_class(sys, cp, {0}, EdgeFunction::constant(4, 1.0), grid, {-1.0, 0.0}))
    CHECK(p.gap < 1e-13);
  // label component as a time density: h / roof per edge
  std::vector<double> density(4);
  for (EdgeId e = 0; e < 4; ++e) density[e] = static_cast<double>(sys.label(e)[0]) / sys.roof()[e];
  for (const auto& p : equidistribute_in_class(sys, cp, {0}, EdgeFunction(density), grid, {-1.0, 0.0})) {
    CHECK(std::fabs(p.orbital) < 1e-13);
    CHECK(std::fabs(p.reference) < 1e-9);
  }
  const auto empty = equidistribute_in_class(sys, cp, {40}, EdgeFunction::constant(4, 1.0), grid, {-1.0, 0.0});
  CHECK(empty[0].empty);
}

TEST_CASE("large deviation ratios") {
  const auto sys = fixtures::symmetric_mixing();
  const auto cp = build_cohomology_pressure(sys, sys.potential());
  std::vector<double> grid{8, 9, 10, 11};
  const EdgeFunction psi = EdgeFunction::indicator(4, 0);
  auto ld = large_deviation_ratio(sys, cp, {0}, psi, 2.0, grid, {-1.0, 0.0});
  CHECK(ld.exact_zero);
  ld = large_deviation_ratio(sys, cp, {0}, psi, 0.2, grid, {-1.0, 0.0});
  CHECK_FALSE(ld.exact_zero);
  for (double r : ld.ratio) {
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
  }
  CHECK_THROWS_AS(large_deviation_ratio(sys, cp, {0}, psi, 0.0, grid, {-1.0, 0.0}), InvalidInput);
}
