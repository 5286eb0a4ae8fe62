#pragma once

#include <cstdint>
#include <vector>

#include "orbitlink/markov_shift.hpp"
#include "orbitlink/suspension.hpp"

namespace orbitlink {

/// Exact trace tr(A^n) of the vertex adjacency-count matrix.
std::int64_t adjacency_trace(const MarkovShift& shift, std::size_t n);

/// Number of prime cycles of word length n by Moebius inversion of traces:
/// (1/n) sum_{d|n} mu(d) tr(A^{n/d}).
std::int64_t moebius_prime_count(const MarkovShift& shift, std::size_t n);

int moebius(std::size_t n);

/// log sum over prime cycles of word length n of exp(scale * sum q), from
///   tr(M_s^n) = sum_{d|n} d Z_d(s n / d),  M_s = vertex matrix of e^{s q}.
double log_prime_weighted_sum(const MarkovShift& shift, const EdgeFunction& q, std::size_t n,
                              double scale = 1.0);

}  // namespace orbitlink
