#include "orbitlink/double_integral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "orbitlink/error.hpp"
#include "orbitlink/linking.hpp"
#include "orbitlink/numerics.hpp"
#include "orbitlink/parallel.hpp"

namespace orbitlink {
namespace {

struct Node {
  Vec3 x, v;
  double dt;
};

std::vector<Node> line_nodes(const PolylineCurve& c, std::size_t k) {
  std::vector<Node> out;
  out.reserve(c.size() * k);
  const double kk = static_cast<double>(k);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec3 step = c.next(i) - c.point(i);
    for (std::size_t m = 0; m < k; ++m)
      out.push_back({c.point(i) + (static_cast<double>(m) + 0.5) / kk * step, c.velocity(i), c.segment_time(i) / kk});
  }
  return out;
}

// Accumulators for one pair of curves, in units of the product of their periods.
struct PairSums {
  double value = 0.0, tail = 0.0, excluded = 0.0;
  std::size_t below_floor = 0, evaluations = 0;
};

PairSums integrate_pair(const std::vector<Node>& na, const std::vector<Node>& nb, const DoubleIntegralOptions& o) {
  PairSums s;
  for (const Node& p : na) {
    double row = 0.0, tail = 0.0, excluded = 0.0;
    for (const Node& q : nb) {
      const double r = (p.x - q.x).norm();
      if (r >= o.delta) {
        row += lambda_kernel(p.x, q.x, p.v, q.v) * q.dt;
        ++s.evaluations;
        continue;
      }
      excluded += q.dt;
      if (r < o.floor) {
        ++s.below_floor;
        continue;
      }
      const double n = std::floor(std::log2(o.delta / r));
      tail += o.K * std::exp2(n + 1) / o.delta * q.dt;
    }
    s.value += row * p.dt;
    s.tail += tail * p.dt;
    s.excluded += excluded * p.dt;
  }
  return s;
}

std::vector<double> normalized(const OrbitalMixture& m) {
  if (m.curves.size() != m.weights.size() || m.curves.empty())
    throw InvalidInput("orbital mixture needs one weight per curve");
  const double total = std::accumulate(m.weights.begin(), m.weights.end(), 0.0);
  if (!(total > 0)) throw InvalidInput("orbital mixture weights must have positive sum");
  std::vector<double> p;
  for (double w : m.weights) {
    if (w < 0) throw InvalidInput("orbital mixture weights must be nonnegative");
    p.push_back(w / total);
  }
  return p;
}

void check_options(const DoubleIntegralOptions& o) {
  if (!(o.delta > o.floor) || !(o.floor >= 0)) throw InvalidInput("cutoff delta must exceed the hard floor");
  if (!(o.K >= 0)) throw InvalidInput("tail constant K must be nonnegative");
  if (o.nodes_per_segment == 0) throw InvalidInput("need at least one node per segment");
}

DoubleIntegralEstimate mixture_integral(const OrbitalMixture& mu, const OrbitalMixture& nu, bool same,
                                        const DoubleIntegralOptions& o, const PairTerm& closed_form) {
  check_options(o);
  const auto p = normalized(mu), q = normalized(nu);
  const std::size_t k = o.nodes_per_segment;
  auto build = [](const OrbitalMixture& m, std::size_t kk) {
    std::vector<std::vector<Node>> out;
    for (const auto& c : m.curves) out.push_back(line_nodes(c, kk));
    return out;
  };
  const auto nodes_mu = build(mu, k), nodes_nu = same ? nodes_mu : build(nu, k);
  std::vector<std::vector<Node>> fine_mu, fine_nu;
  if (o.refine_check) {
    fine_mu = build(mu, 2 * k);
    fine_nu = same ? fine_mu : build(nu, 2 * k);
  }

  struct Row {
    double value = 0.0, fine = 0.0, tail = 0.0, excluded = 0.0;
    std::size_t below_floor = 0, evaluations = 0;
  };
  std::vector<Row> rows(mu.curves.size());
  parallel_for(mu.curves.size(), o.threads, [&](std::size_t i) {
    Row& row = rows[i];
    for (std::size_t j = 0; j < nu.curves.size(); ++j) {
      const double w = p[i] * q[j];
      if (w == 0.0) continue;
      if (!(same && i == j) && closed_form) {
        if (auto v = closed_form(i, j)) {
          row.value += w * *v;
          row.fine += w * *v;
          continue;
        }
      }
      const double periods = mu.curves[i].period() * nu.curves[j].period();
      const PairSums s = integrate_pair(nodes_mu[i], nodes_nu[j], o);
      row.value += w * (s.value / periods);
      row.tail += w * (s.tail / periods);
      row.excluded += w * (s.excluded / periods);
      row.below_floor += s.below_floor;
      row.evaluations += s.evaluations;
      if (o.refine_check) row.fine += w * (integrate_pair(fine_mu[i], fine_nu[j], o).value / periods);
    }
  });

  DoubleIntegralEstimate e;
  e.delta = o.delta;
  double fine = 0.0;
  for (const Row& r : rows) {
    e.value += r.value;
    fine += r.fine;
    e.tail_bound += r.tail;
    e.excluded_mass += r.excluded;
    e.below_floor += r.below_floor;
    e.evaluations += r.evaluations;
  }
  e.quadrature_error = o.refine_check ? std::fabs(fine - e.value) : 0.0;
  e.error = e.quadrature_error + e.tail_bound;
  return e;
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton on P_n.
void gauss_legendre(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double z = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2 / ((1 - z * z) * dp * dp);
  }
}

struct Offset {
  Vec3 d;
  double w;  // already divided by (2 pi)^3
};

std::vector<Offset> offsets(double delta, const VolumeQuadrature& q) {
  std::vector<Offset> out;
  const double cell = std::pow(2 * kPi, 3);
  std::vector<double> gr, gw, pc, pw;
  gauss_legendre(q.radial_nodes, gr, gw);
  gauss_legendre(q.polar_nodes, pc, pw);
  std::vector<Vec3> dirs;
  std::vector<double> dir_w;
  for (std::size_t a = 0; a < q.polar_nodes; ++a) {
    const double ct = pc[a], st = std::sqrt(std::max(0.0, 1 - ct * ct));
    for (std::size_t b = 0; b < q.azimuth_nodes; ++b) {
      const double ph = 2 * kPi * static_cast<double>(b) / static_cast<double>(q.azimuth_nodes);
      dirs.emplace_back(st * std::cos(ph), st * std::sin(ph), ct);
      dir_w.push_back(pw[a] * 2 * kPi / static_cast<double>(q.azimuth_nodes));
    }
  }
  // dyadic shells from pi down to delta
  double hi = kPi;
  while (hi > delta) {
    const double lo = std::max(delta, hi / 2);
    for (std::size_t m = 0; m < q.radial_nodes; ++m) {
      const double r = 0.5 * (hi + lo) + 0.5 * (hi - lo) * gr[m];
      const double wr = 0.5 * (hi - lo) * gw[m] * r * r;
      for (std::size_t a = 0; a < dirs.size(); ++a) out.push_back({r * dirs[a], wr * dir_w[a] / cell});
    }
    hi = lo;
  }
  const std::size_t n = q.outer_grid;
  const double h = 2 * kPi / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const Vec3 d(-kPi + (i + 0.5) * h, -kPi + (j + 0.5) * h, -kPi + (k + 0.5) * h);
        if (d.norm() >= kPi) out.push_back({d, h * h * h / cell});
      }
  return out;
}

double volume_rule(const AnalyticField& field, double delta, const VolumeQuadrature& q, unsigned threads,
                   std::size_t& evaluations) {
  const auto offs = offsets(delta, q);
  const std::size_t n = q.base_grid;
  const double h = 2 * kPi / static_cast<double>(n);
  std::vector<double> rows(n * n * n, 0.0);
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const Vec3 x((idx / (n * n) + 0.5) * h, ((idx / n) % n + 0.5) * h, (idx % n + 0.5) * h);
    const Vec3 X = field(x);
    double s = 0.0;
    for (const Offset& o : offs) {
      const Vec3 y = x + o.d;
      s += o.w * lambda_kernel(x, y, X, field(y));
    }
    rows[idx] = s;
  });
  evaluations += rows.size() * offs.size();
  double total = 0.0;
  for (double r : rows) total += r;
  return total / static_cast<double>(rows.size());
}

}  // namespace

DoubleIntegralEstimate double_integral_lambda(const OrbitalMixture& mu, const OrbitalMixture& nu,
                                              const DoubleIntegralOptions& options, const PairTerm& closed_form) {
  return mixture_integral(mu, nu, false, options, closed_form);
}

DoubleIntegralEstimate double_integral_lambda(const OrbitalMixture& mu, const DoubleIntegralOptions& options,
                                              const PairTerm& closed_form) {
  return mixture_integral(mu, mu, true, options, closed_form);
}

double torus_ball_mass(double delta) { return 4.0 / 3.0 * kPi * delta * delta * delta / std::pow(2 * kPi, 3); }

DoubleIntegralEstimate double_integral_lambda(const AnalyticField& field, const DoubleIntegralOptions& options,
                                              const VolumeQuadrature& quadrature) {
  check_options(options);
  if (options.delta >= kPi) throw InvalidInput("volume cutoff must be below pi");
  if (quadrature.base_grid == 0 || quadrature.radial_nodes < 2 || quadrature.polar_nodes < 2 ||
      quadrature.azimuth_nodes < 2 || quadrature.outer_grid < 2)
    throw InvalidInput("volume quadrature too coarse");
  DoubleIntegralEstimate e;
  e.delta = options.delta;
  e.value = volume_rule(field, options.delta, quadrature, options.threads, e.evaluations);
  VolumeQuadrature coarse = quadrature;
  coarse.radial_nodes = std::max<std::size_t>(2, quadrature.radial_nodes / 2);
  coarse.polar_nodes = std::max<std::size_t>(2, quadrature.polar_nodes / 2);
  coarse.azimuth_nodes = std::max<std::size_t>(2, quadrature.azimuth_nodes / 2);
  coarse.outer_grid = std::max<std::size_t>(2, quadrature.outer_grid / 2);
  std::size_t unused = 0;
  e.quadrature_error = std::fabs(e.value - volume_rule(field, options.delta, coarse, options.threads, unused));
  for (int n = 0; n < 64; ++n) {
    const double outer = options.delta * std::exp2(-n), inner = outer / 2;
    e.tail_bound += options.K * std::exp2(n + 1) / options.delta * (torus_ball_mass(outer) - torus_ball_mass(inner));
  }
  e.excluded_mass = torus_ball_mass(options.delta);
  e.error = e.quadrature_error + e.tail_bound;
  return e;
}

double field_lambda_constant(const AnalyticField& field, std::size_t pairs, double r_min, std::size_t decades,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal;
  const double span = static_cast<double>(decades) * std::log(10.0);
  double best = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const Vec3 x(2 * kPi * unif(rng), 2 * kPi * unif(rng), 2 * kPi * unif(rng));
    const Vec3 dir = Vec3(normal(rng), normal(rng), normal(rng)).normalized();
    const double r = r_min * std::exp(span * unif(rng));
    const Vec3 y = x + r * dir;
    best = std::max(best, r * std::fabs(lambda_kernel(x, y, field(x), field(y))));
  }
  return best;
}

}  // namespace orbitlink
