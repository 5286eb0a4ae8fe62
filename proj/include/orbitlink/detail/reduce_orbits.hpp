#pragma once

#include <atomic>
#include <vector>

#include "orbitlink/parallel.hpp"

namespace orbitlink {

namespace detail {
struct LevelAbort {};
}  // namespace detail

template <class Acc, class Make, class Visit, class Merge>
Acc reduce_orbits(const SuspensionSystem& system, LengthWindow window, const EnumerationOptions& options,
                  Make make, Visit visit, Merge merge) {
  Acc total = make();
  if (window.empty()) return total;
  const std::size_t levels = max_word_length(system, window.hi);
  const std::size_t edges = system.shift().edge_count();
  std::size_t visited = 0;
  for (std::size_t n = 1; n <= levels; ++n) {
    std::vector<Acc> parts;
    parts.reserve(edges);
    for (std::size_t e = 0; e < edges; ++e) parts.push_back(make());
    std::vector<std::size_t> counts(edges, 0);
    // running only counts real visits, so an early abort implies the level
    // total would exceed the budget too: the outcome is thread-independent
    std::atomic<std::size_t> running{visited};
    try {
      parallel_for(edges, options.threads, [&](std::size_t e) {
        Acc& acc = parts[e];
        std::size_t local = 0;
        counts[e] = visit_level(system, n, static_cast<EdgeId>(e), window, [&](const OrbitView& orbit) {
          if ((++local & 0xFFF) == 0 && running.fetch_add(0x1000) + 0x1000 > options.max_orbits)
            throw detail::LevelAbort{};
          visit(acc, orbit);
        });
      });
    } catch (const detail::LevelAbort&) {
      throw BudgetExceeded(n - 1, {});
    }
    for (auto c : counts) visited += c;
    if (visited > options.max_orbits) throw BudgetExceeded(n - 1, {});
    for (auto& part : parts) merge(total, part);
  }
  return total;
}

}  // namespace orbitlink
