#include <doctest.h>

#include <cmath>
#include <random>

#include "orbitlink/abc_field.hpp"
#include "orbitlink/average_linking.hpp"
#include "orbitlink/convergence_study.hpp"
#include "orbitlink/double_integral.hpp"
#include "orbitlink/error.hpp"
#include "orbitlink/fixtures.hpp"
#include "orbitlink/linking.hpp"
#include "orbitlink/numerics.hpp"

using namespace orbitlink;

namespace {

OrbitFamily family(std::vector<double> len, std::vector<double> w) { return {std::move(len), std::move(w)}; }

}  // namespace

TEST_CASE("ABC field is divergence free and Beltrami") {
  for (const auto& f : {AnalyticField::abc(1, 1, 1), AnalyticField::abc(1, 0, 0), AnalyticField::abc(0.3, -2, 1.5)}) {
    CHECK(max_divergence(f) < 1e-6);
    CHECK(max_beltrami_defect(f) < 1e-6);
  }
  const auto f = AnalyticField::abc(1, 2, 3);
  CHECK((f(Vec3(0.1, 0.2, 0.3)) - Vec3(std::sin(0.3) + 3 * std::cos(0.2), 2 * std::sin(0.1) + std::cos(0.3),
                                       3 * std::sin(0.2) + 2 * std::cos(0.1)))
            .norm() < 1e-15);
}

TEST_CASE("helicity of Beltrami fields") {
  // X . curl_h X = (sin h / h) |X|^2 for a single Fourier shell; the grid mean of |X|^2 is exact
  const auto f = AnalyticField::abc(1, 1, 1);
  for (std::size_t n : {20u, 40u}) {
    const double h = 2 * kPi / n;
    CHECK(helicity_on_grid(f, n) == doctest::Approx(3 * std::sin(h) / h).epsilon(1e-12));
  }
  const auto est = helicity_analytic(f);
  CHECK(std::fabs(est.grid_values[1] - 3) < 0.03);
  CHECK(std::fabs(est.value - 3) < 3e-3);
  CHECK(est.observed_order == doctest::Approx(2.0).epsilon(0.02));
  CHECK(std::fabs(helicity_analytic(AnalyticField::abc(1, 0, 0)).value - 1) < 1e-5);
  CHECK(helicity_analytic(AnalyticField::abc(0, 0, 0)).value == 0.0);
  // A^2 + B^2 + C^2 in the continuum limit
  CHECK(helicity_analytic(AnalyticField::abc(0.5, 2, -1)).value == doctest::Approx(5.25).epsilon(1e-5));
  for (double s : {0.5, 2.0, 3.3}) {
    const double hs = helicity_analytic(f.scaled(s)).value;
    CHECK(std::fabs(hs - s * s * est.value) < 1e-9 * s * s * est.value);
  }
}

TEST_CASE("helicity rejects non-Beltrami fields") {
  const AnalyticField shear([](const Vec3& x) { return Vec3(std::sin(x.y()), 0, 0); }, "shear");
  CHECK(max_divergence(shear) < 1e-6);
  CHECK_THROWS_AS(helicity_analytic(shear), InvalidInput);
  // eigenvalue 2 instead of 1
  const AnalyticField k2([](const Vec3& x) { return Vec3(std::sin(2 * x.z()), std::cos(2 * x.z()), 0); }, "k2");
  CHECK_THROWS_AS(helicity_analytic(k2), InvalidInput);
}

TEST_CASE("average linking") {
  auto one = [](std::size_t, std::size_t) -> std::optional<int> { return 1; };
  auto e = average_linking(family({2}, {0}), family({2}, {0}), one);
  CHECK(e.value == 0.25);
  CHECK(e.pairs == 1);

  auto zero = [](std::size_t, std::size_t) -> std::optional<int> { return 0; };
  CHECK(average_linking(family({2, 3}, {0, 1}), family({4}, {0}), zero).value == 0.0);

  auto missing = [](std::size_t i, std::size_t j) -> std::optional<int> {
    if (i == 1 && j == 0) return std::nullopt;
    return 1;
  };
  CHECK_THROWS_AS(average_linking(family({2, 3}, {0, 0}), family({4}, {0}), missing), InvalidInput);

  e = average_linking(family({}, {}), family({4}, {0}), one);
  CHECK(e.empty);
  CHECK(std::isnan(e.value));

  // brute-force weighted mean and shift invariance on random data
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> lk_dist(-3, 6);
  std::uniform_int_distribution<int> w_dist(-8, 8);
  std::uniform_real_distribution<double> len_dist(3.0, 4.0);
  OrbitFamily a, b;
  for (int i = 0; i < 30; ++i) a.length.push_back(len_dist(rng)), a.weight.push_back(w_dist(rng) * 0.25);
  for (int i = 0; i < 40; ++i) b.length.push_back(len_dist(rng)), b.weight.push_back(w_dist(rng) * 0.25);
  std::vector<int> table(30 * 40);
  for (int& x : table) x = lk_dist(rng);
  auto lookup = [&](std::size_t i, std::size_t j) -> std::optional<int> { return table[i * 40 + j]; };
  e = average_linking(a, b, lookup);
  long double num = 0, den = 0;
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 40; ++j) {
      const long double w = std::exp(static_cast<long double>(a.weight[i] + b.weight[j]));
      num += w * table[i * 40 + j] / (a.length[i] * b.length[j]);
      den += w;
    }
  CHECK(e.value == doctest::Approx(static_cast<double>(num / den)).epsilon(1e-13));
  CHECK(e.value >= e.min_term);
  CHECK(e.value <= e.max_term);
  OrbitFamily a2 = a, b2 = b;
  for (double& w : a2.weight) w += 3.5;
  for (double& w : b2.weight) w -= 1.25;
  CHECK(average_linking(a2, b2, lookup).value == e.value);
}

TEST_CASE("double integral on orbital measures") {
  const auto [a, b] = hopf_pair(64);
  DoubleIntegralOptions o;
  o.delta = 0.1 * min_distance(a, b);
  o.nodes_per_segment = 2;
  const OrbitalMixture ma{{a}, {1.0}}, mb{{b}, {1.0}};
  const auto e = double_integral_lambda(ma, mb, o);
  CHECK(e.value == orbit_pair_integral(a, b, 2));
  CHECK(e.tail_bound == 0.0);
  CHECK(e.excluded_mass == 0.0);
  CHECK(e.quadrature_error > 0.0);
  CHECK(e.quadrature_error < 1e-4);

  // closed form for cross terms matches quadrature of the same mixture
  const OrbitalMixture both{{a, b}, {1.0, 3.0}};
  o.delta = 0.05;
  o.nodes_per_segment = 4;
  const auto quad = double_integral_lambda(both, o);
  const auto closed = double_integral_lambda(both, o, [&](std::size_t i, std::size_t j) -> std::optional<double> {
    const auto& ci = both.curves[i];
    const auto& cj = both.curves[j];
    return crossing_linking(ci, cj) / (ci.period() * cj.period());
  });
  CHECK(closed.value == doctest::Approx(quad.value).epsilon(1e-4));
  // self terms of planar circles vanish
  CHECK(std::fabs(quad.value - 2 * 0.75 * 0.25 / (a.period() * b.period())) < 1e-5);

  // excluded mass of the self terms shrinks with delta
  double last = 1.0;
  for (double d : {0.4, 0.2, 0.1, 0.05}) {
    o.delta = d;
    const auto s = double_integral_lambda(OrbitalMixture{{a}, {1.0}}, o);
    CHECK(s.excluded_mass < last);
    CHECK(s.below_floor == a.size() * o.nodes_per_segment);
    last = s.excluded_mass;
  }
  o.delta = 1e-12;
  CHECK_THROWS_AS(double_integral_lambda(ma, mb, o), InvalidInput);
}

TEST_CASE("double integral on the ABC volume measure") {
  const auto zero = AnalyticField::abc(0, 0, 0);
  DoubleIntegralOptions o;
  o.delta = 0.1;
  CHECK(double_integral_lambda(zero, o).value == 0.0);

  const auto f = AnalyticField::abc(1, 1, 1);
  const double K = field_lambda_constant(f);
  CHECK(K > 0);
  o.K = 2 * K;
  std::vector<DoubleIntegralEstimate> ladder;
  for (double d : {0.2, 0.1, 0.05, 0.025}) {
    o.delta = d;
    ladder.push_back(double_integral_lambda(f, o));
  }
  for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
    CHECK(std::fabs(ladder[k + 1].value - ladder[k].value) < ladder[k].tail_bound);
    CHECK(ladder[k + 1].tail_bound < ladder[k].tail_bound);
    CHECK(ladder[k + 1].excluded_mass <= 0.5 * ladder[k].excluded_mass);
  }
  CHECK(ladder[0].excluded_mass == doctest::Approx(torus_ball_mass(0.2)));
  CHECK(torus_ball_mass(kPi) == doctest::Approx(kPi / 6));  // ball of radius pi in the cube of side 2 pi
  // the integrand is odd in A, B, C jointly: Lambda is quadratic in X
  o.delta = 0.1;
  CHECK(double_integral_lambda(f.scaled(-1), o).value == doctest::Approx(ladder[1].value).epsilon(1e-12));
}

TEST_CASE("convergence study on the template") {
  const auto sys = fixtures::lorenz_template_system();
  StudyOptions opts;
  opts.T_ref = 11;
  opts.lambda_pairs = 20000;
  const std::vector<double> grid{6, 7, 8, 9};
  const auto r = convergence_study(sys, EdgeFunction::constant(2, 0.0), grid, opts);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows[0].average.pairs == 9 * 18);
  CHECK(r.reference_orbits == 186);
  // lk / (l l') tends to 1/8 for the uniform measure on the template
  CHECK(std::fabs(r.reference.value - 0.125) < 2e-3);
  CHECK(r.rows.back().gap < r.rows.front().gap);
  CHECK(r.separation_ok);
  CHECK(r.min_separation < 1e-2);
  CHECK(r.verdict != GapVerdict::NoVerdict);
  for (const auto& row : r.rows) {
    CHECK(row.average.value >= row.average.min_term);
    CHECK(row.average.value <= row.average.max_term);
  }

  const auto c = convergence_study(sys, EdgeFunction::constant(2, 1.7), grid, opts);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(c.rows[i].average.value == r.rows[i].average.value);
    CHECK(c.rows[i].gap == r.rows[i].gap);
  }

  const auto single = convergence_study(sys, EdgeFunction::constant(2, 0.0), {7}, opts);
  CHECK(single.rows.size() == 1);
  CHECK(single.verdict == GapVerdict::NoVerdict);
  CHECK_THROWS_AS(convergence_study(fixtures::three_symbol(), EdgeFunction::constant(3, 0.0), grid, opts),
                  InvalidInput);
}
