#include "orbitlink/orbits.hpp"

#include <algorithm>
#include <cmath>

#include "orbitlink/parallel.hpp"

namespace orbitlink {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PathBounds {
  // best[m * V + v]: min / max roof sum of an m-edge path from v into `home`
  std::vector<double> shortest, longest;
};

PathBounds path_bounds(const SuspensionSystem& system, VertexId home, std::size_t steps) {
  const MarkovShift& shift = system.shift();
  const std::size_t V = shift.vertex_count();
  PathBounds b;
  b.shortest.assign((steps + 1) * V, kInf);
  b.longest.assign((steps + 1) * V, -kInf);
  b.shortest[home] = 0.0;
  b.longest[home] = 0.0;
  for (std::size_t m = 1; m <= steps; ++m) {
    for (VertexId v = 0; v < V; ++v) {
      double lo = kInf, hi = -kInf;
      for (EdgeId e : shift.out_edges(v)) {
        const std::size_t t = (m - 1) * V + shift.edge(e).target;
        lo = std::min(lo, system.roof()[e] + b.shortest[t]);
        hi = std::max(hi, system.roof()[e] + b.longest[t]);
      }
      b.shortest[m * V + v] = lo;
      b.longest[m * V + v] = hi;
    }
  }
  return b;
}

}  // namespace

std::size_t max_word_length(const SuspensionSystem& system, double max_length) {
  if (!(max_length > 0.0)) return 0;
  return static_cast<std::size_t>(std::floor(max_length / system.roof().min() * (1.0 + 1e-12)));
}

std::size_t visit_level(const SuspensionSystem& system, std::size_t n, EdgeId first, LengthWindow window,
                        const std::function<void(const OrbitView&)>& visit) {
  const MarkovShift& shift = system.shift();
  const std::size_t V = shift.vertex_count();
  const std::size_t b = system.betti();
  const EdgeFunction& roof = system.roof();
  const EdgeFunction& potential = system.potential();
  if (n == 0 || window.empty()) return 0;
  const VertexId home = shift.edge(first).source;
  const PathBounds bounds = path_bounds(system, home, n - 1);
  const double slack = 1e-9 * std::max(1.0, std::fabs(window.hi));

  // a[k]: word letters; len/wt: prefix sums; hom: prefix homology, (n+1) x b
  std::vector<EdgeId> a(n);
  std::vector<double> len(n + 1, 0.0), wt(n + 1, 0.0);
  std::vector<std::int64_t> hom((n + 1) * b, 0);
  std::size_t visited = 0;

  auto push = [&](std::size_t k, EdgeId e) {
    a[k] = e;
    len[k + 1] = len[k] + roof[e];
    wt[k + 1] = wt[k] + potential[e];
    auto l = system.label(e);
    for (std::size_t i = 0; i < b; ++i) hom[(k + 1) * b + i] = hom[k * b + i] + l[i];
  };
  // prune when no completion of the prefix (k letters, ending at v) can land in the window
  auto feasible = [&](std::size_t k, VertexId v) {
    const std::size_t rest = n - k;
    const double lo = bounds.shortest[rest * V + v];
    if (lo == kInf) return false;
    if (len[k] + lo > window.hi + slack) return false;
    if (len[k] + bounds.longest[rest * V + v] < window.lo - slack) return false;
    return true;
  };

  // Duval / FKM generation of prenecklaces: letter k must be >= a[k - p]; the
  // prefix is Lyndon-so-far with period p.  Complete words with p == n are
  // exactly the Lyndon words, i.e. canonical prime orbits.
  auto recurse = [&](auto&& self, std::size_t k, std::size_t p) -> void {
    if (k == n) {
      if (p != n || shift.edge(a[n - 1]).target != home) return;
      if (!window.contains(len[n])) return;
      ++visited;
      visit(OrbitView{std::span<const EdgeId>(a.data(), n), len[n], wt[n],
                      std::span<const std::int64_t>(hom.data() + n * b, b)});
      return;
    }
    const EdgeId floor_letter = a[k - p];
    for (EdgeId e : shift.out_edges(shift.edge(a[k - 1]).target)) {
      if (e < floor_letter) continue;
      push(k, e);
      if (!feasible(k + 1, shift.edge(e).target)) continue;
      self(self, k + 1, e == floor_letter ? p : k + 1);
    }
  };

  push(0, first);
  if (feasible(1, shift.edge(first).target)) recurse(recurse, 1, 1);
  return visited;
}

std::vector<PeriodicOrbit> enumerate_orbits(const SuspensionSystem& system, LengthWindow window,
                                            const EnumerationOptions& options) {
  using Bucket = std::vector<PeriodicOrbit>;
  std::vector<PeriodicOrbit> out;
  if (window.empty()) return out;
  const std::size_t levels = max_word_length(system, window.hi);
  const std::size_t edges = system.shift().edge_count();
  for (std::size_t n = 1; n <= levels; ++n) {
    std::vector<Bucket> parts(edges);
    std::vector<std::size_t> counts(edges, 0);
    parallel_for(edges, options.threads, [&](std::size_t e) {
      Bucket& bucket = parts[e];
      counts[e] = visit_level(system, n, static_cast<EdgeId>(e), window, [&](const OrbitView& v) {
        if (bucket.size() <= options.max_orbits)
          bucket.push_back({{v.word.begin(), v.word.end()}, v.length, v.weight, {v.homology.begin(), v.homology.end()}});
      });
    });
    std::size_t level_total = 0;
    for (auto c : counts) level_total += c;
    if (out.size() + level_total > options.max_orbits) throw BudgetExceeded(n - 1, std::move(out));
    for (auto& part : parts) {
      out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
  }
  return out;
}

std::vector<PeriodicOrbit> enumerate_by_word_length(const SuspensionSystem& system, std::size_t max_word,
                                                    const EnumerationOptions& options) {
  std::vector<PeriodicOrbit> out;
  const std::size_t edges = system.shift().edge_count();
  const LengthWindow all{0.0, kInf};
  for (std::size_t n = 1; n <= max_word; ++n) {
    std::vector<std::vector<PeriodicOrbit>> parts(edges);
    parallel_for(edges, options.threads, [&](std::size_t e) {
      visit_level(system, n, static_cast<EdgeId>(e), all, [&](const OrbitView& v) {
        if (parts[e].size() <= options.max_orbits)
          parts[e].push_back({{v.word.begin(), v.word.end()}, v.length, v.weight, {v.homology.begin(), v.homology.end()}});
      });
    });
    std::size_t level_total = 0;
    for (auto& p : parts) level_total += p.size();
    if (out.size() + level_total > options.max_orbits) throw BudgetExceeded(n - 1, std::move(out));
    for (auto& part : parts) {
      out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
  }
  return out;
}

}  // namespace orbitlink
