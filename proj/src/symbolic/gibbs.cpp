#include "orbitlink/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "orbitlink/error.hpp"

namespace orbitlink {
namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

EdgeId draw(std::span<const EdgeId> choices, const std::vector<double>& prob, double total, std::mt19937_64& rng) {
  double x = uniform01(rng) * total;
  for (EdgeId e : choices) {
    x -= prob[e];
    if (x < 0.0) return e;
  }
  return choices.back();
}

// Longest-path potentials d(v) for weights w when every cycle is negative;
// returns false if a positive cycle exists.
bool longest_potentials(const MarkovShift& shift, const std::vector<double>& w, std::vector<double>& d) {
  const std::size_t V = shift.vertex_count();
  d.assign(V, 0.0);
  for (std::size_t round = 0; round <= V; ++round) {
    bool changed = false;
    for (EdgeId e = 0; e < shift.edge_count(); ++e) {
      const Edge& edge = shift.edge(e);
      const double cand = d[edge.source] + w[e];
      if (cand > d[edge.target] + 1e-14 * (1.0 + std::fabs(cand))) {
        d[edge.target] = cand;
        changed = true;
      }
    }
    if (!changed) return true;
  }
  return false;
}

}  // namespace

GibbsBallReport gibbs_ball_bound_check(const MarkovShift& shift, const EdgeFunction& q, std::size_t L,
                                       std::size_t sample_cap, std::uint64_t seed) {
  if (L == 0) throw InvalidInput("cylinder length must be positive");
  const MarkovMeasure mu = equilibrium_state(shift, q);
  const double P = mu.log_lambda;
  GibbsBallReport report;
  report.best_ratio = std::numeric_limits<double>::infinity();

  auto record = [&](const std::vector<EdgeId>& w) {
    double log_mu = std::log(mu.vertex_distribution[shift.edge(w[0]).source]);
    double sum_q = 0.0;
    for (EdgeId e : w) {
      log_mu += std::log(mu.transition[e]);
      sum_q += q[e];
    }
    const double ratio = std::exp(log_mu - (sum_q - P * static_cast<double>(L)));
    report.worst_ratio = std::max(report.worst_ratio, ratio);
    report.best_ratio = std::min(report.best_ratio, ratio);
    ++report.cylinders;
  };

  // number of admissible L-words, ending at each vertex
  std::vector<double> ending(shift.vertex_count(), 0.0);
  for (EdgeId e = 0; e < shift.edge_count(); ++e) ending[shift.edge(e).target] += 1.0;
  for (std::size_t k = 1; k < L; ++k) {
    std::vector<double> next(shift.vertex_count(), 0.0);
    for (EdgeId e = 0; e < shift.edge_count(); ++e) next[shift.edge(e).target] += ending[shift.edge(e).source];
    ending = std::move(next);
  }
  double total = 0.0;
  for (double c : ending) total += c;

  std::vector<EdgeId> w(L);
  if (total <= static_cast<double>(sample_cap)) {
    report.exhaustive = true;
    auto recurse = [&](auto&& self, std::size_t k) -> void {
      if (k == L) {
        record(w);
        return;
      }
      for (EdgeId e : shift.out_edges(shift.edge(w[k - 1]).target)) {
        w[k] = e;
        self(self, k + 1);
      }
    };
    for (EdgeId e = 0; e < shift.edge_count(); ++e) {
      w[0] = e;
      recurse(recurse, 1);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::vector<EdgeId> all(shift.edge_count());
    for (EdgeId e = 0; e < all.size(); ++e) all[e] = e;
    for (std::size_t s = 0; s < sample_cap; ++s) {
      w[0] = draw(all, mu.edge_mass, 1.0, rng);
      for (std::size_t k = 1; k < L; ++k) w[k] = draw(shift.out_edges(shift.edge(w[k - 1]).target), mu.transition, 1.0, rng);
      record(w);
    }
  }
  return report;
}

NegativeCohomology negative_cohomology_calibration(const MarkovShift& shift, const EdgeFunction& roof,
                                                   const EdgeFunction& q) {
  NegativeCohomology out;
  out.pressure = flow_pressure(shift, roof, q);
  const std::size_t E = shift.edge_count();
  std::vector<double> phi(E), w(E), d;
  double hi = 0.0;
  for (EdgeId e = 0; e < E; ++e) {
    phi[e] = q[e] - out.pressure * roof[e];
    hi = std::max(hi, -phi[e] / roof[e]);
  }
  // eps* = -max cycle mean of phi/r, by bisection on positive-cycle detection
  auto feasible = [&](double eps) {
    for (EdgeId e = 0; e < E; ++e) w[e] = phi[e] + eps * roof[e];
    return longest_potentials(shift, w, d);
  };
  double lo = 0.0;
  if (!feasible(lo)) throw ConvergenceError("pressure root too inaccurate for calibration", 0.0);
  for (int it = 0; it < 100 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) lo = mid; else hi = mid;
  }
  out.epsilon = 0.5 * lo;
  feasible(out.epsilon);
  const auto [mn, mx] = std::minmax_element(d.begin(), d.end());
  const double centre = 0.5 * (*mn + *mx);
  out.transfer.resize(d.size());
  for (std::size_t v = 0; v < d.size(); ++v) out.transfer[v] = d[v] - centre;
  out.transfer_bound = 0.5 * (*mx - *mn);
  out.negative.resize(E);
  for (EdgeId e = 0; e < E; ++e) {
    const Edge& edge = shift.edge(e);
    out.negative[e] = phi[e] + out.transfer[edge.source] - out.transfer[edge.target];
  }
  return out;
}

}  // namespace orbitlink
