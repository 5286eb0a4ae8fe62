#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "orbitlink/error.hpp"
#include "orbitlink/suspension.hpp"

namespace orbitlink {

/// Half-open interval (lo, hi] of orbit lengths.
struct LengthWindow {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x > lo && x <= hi; }
  bool empty() const { return !(hi > lo); }
};

struct EnumerationOptions {
  std::size_t max_orbits = 50'000'000;  ///< budget on prime orbits visited
  unsigned threads = 1;
};

/// Read-only view of an orbit handed to streaming visitors.  Spans are only
/// valid during the callback.
struct OrbitView {
  std::span<const EdgeId> word;
  double length;
  double weight;
  std::span<const std::int64_t> homology;
};

/// Enumeration stopped because the budget was exhausted.  Carries the orbits of
/// every fully enumerated word length (1..frontier).
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::size_t frontier, std::vector<PeriodicOrbit> partial)
      : Error("orbit enumeration budget exceeded"), frontier_(frontier), partial_(std::move(partial)) {}
  std::size_t frontier() const { return frontier_; }
  const std::vector<PeriodicOrbit>& partial() const { return partial_; }

 private:
  std::size_t frontier_;
  std::vector<PeriodicOrbit> partial_;
};

/// Visits every prime periodic orbit with word length exactly n and length in
/// the window whose canonical word starts with `first`.  Visit order is
/// lexicographic in the word.  Returns the number of orbits visited.
std::size_t visit_level(const SuspensionSystem& system, std::size_t n, EdgeId first, LengthWindow window,
                        const std::function<void(const OrbitView&)>& visit);

/// Longest word length an orbit of length <= max_length can have.
std::size_t max_word_length(const SuspensionSystem& system, double max_length);

/// All prime orbits with length in the window, canonical, sorted by
/// (word length, word).  Throws BudgetExceeded.
std::vector<PeriodicOrbit> enumerate_orbits(const SuspensionSystem& system, LengthWindow window,
                                            const EnumerationOptions& options = {});

/// Prime orbits with word length in [1, max_word] regardless of roof, sorted.
std::vector<PeriodicOrbit> enumerate_by_word_length(const SuspensionSystem& system,
                                                    std::size_t max_word,
                                                    const EnumerationOptions& options = {});

/// Streaming reduction over all prime orbits with length in the window.
/// One accumulator is created per (word length, first edge) task; tasks are
/// merged in (word length, first edge) order so the result does not depend
/// on the thread count.
template <class Acc, class Make, class Visit, class Merge>
Acc reduce_orbits(const SuspensionSystem& system, LengthWindow window, const EnumerationOptions& options,
                  Make make, Visit visit, Merge merge);

}  // namespace orbitlink

#include "orbitlink/detail/reduce_orbits.hpp"
