#include "orbitlink/lattice_count.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <map>

#include "orbitlink/error.hpp"

namespace orbitlink {
namespace {

using Matrix = Eigen::MatrixXd;

// log tr(M^n) for the vertex matrix of e^{scale q}, with the matrix kept
// normalized during repeated squaring.
double log_trace_power(const MarkovShift& shift, const EdgeFunction& q, double scale, std::size_t n) {
  const auto V = static_cast<Eigen::Index>(shift.vertex_count());
  double top = -std::numeric_limits<double>::infinity();
  for (EdgeId e = 0; e < shift.edge_count(); ++e) top = std::max(top, scale * q[e]);
  Matrix m = Matrix::Zero(V, V);
  for (EdgeId e = 0; e < shift.edge_count(); ++e) {
    const Edge& edge = shift.edge(e);
    m(edge.source, edge.target) += std::exp(scale * q[e] - top);
  }
  Matrix result = Matrix::Identity(V, V);
  double log_result = 0.0, log_base = top;
  bool have = false;
  for (std::size_t k = n; k > 0; k >>= 1) {
    if (k & 1) {
      result = have ? Matrix(result * m) : m;
      log_result = have ? log_result + log_base : log_base;
      have = true;
      const double s = result.maxCoeff();
      if (s == 0.0) return -std::numeric_limits<double>::infinity();
      result /= s;
      log_result += std::log(s);
    }
    if (k > 1) {
      m = m * m;
      log_base *= 2.0;
      const double s = m.maxCoeff();
      if (s == 0.0) return -std::numeric_limits<double>::infinity();
      m /= s;
      log_base += std::log(s);
    }
  }
  const double tr = result.trace();
  if (!(tr > 0.0)) return -std::numeric_limits<double>::infinity();
  return log_result + std::log(tr);
}

std::vector<std::size_t> proper_divisors(std::size_t n) {
  std::vector<std::size_t> d;
  for (std::size_t k = 1; k < n; ++k)
    if (n % k == 0) d.push_back(k);
  return d;
}

}  // namespace

std::int64_t adjacency_trace(const MarkovShift& shift, std::size_t n) {
  const std::size_t V = shift.vertex_count();
  const auto a = shift.adjacency_counts();
  std::vector<std::int64_t> p(V * V, 0), next(V * V);
  for (std::size_t i = 0; i < V; ++i) p[i * V + i] = 1;
  for (std::size_t step = 0; step < n; ++step) {
    for (std::size_t i = 0; i < V; ++i) {
      for (std::size_t j = 0; j < V; ++j) {
        std::int64_t s = 0;
        for (std::size_t k = 0; k < V; ++k) {
          std::int64_t t;
          if (__builtin_mul_overflow(p[i * V + k], a[k * V + j], &t) || __builtin_add_overflow(s, t, &s))
            throw InvalidInput("adjacency trace overflows 64 bits");
        }
        next[i * V + j] = s;
      }
    }
    p.swap(next);
  }
  std::int64_t tr = 0;
  for (std::size_t i = 0; i < V; ++i) tr += p[i * V + i];
  return tr;
}

int moebius(std::size_t n) {
  if (n == 0) throw InvalidInput("moebius(0) undefined");
  int mu = 1;
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

std::int64_t moebius_prime_count(const MarkovShift& shift, std::size_t n) {
  if (n == 0) throw InvalidInput("word length must be positive");
  std::int64_t s = 0;
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d) continue;
    s += moebius(d) * adjacency_trace(shift, n / d);
  }
  return s / static_cast<std::int64_t>(n);
}

double log_prime_weighted_sum(const MarkovShift& shift, const EdgeFunction& q, std::size_t n, double scale) {
  if (n == 0) throw InvalidInput("word length must be positive");
  // Z_d is needed at scale * n / d only, so one value per divisor.
  std::map<std::size_t, double> memo;
  auto solve = [&](auto&& self, std::size_t d) -> double {
    if (auto it = memo.find(d); it != memo.end()) return it->second;
    const double s = scale * static_cast<double>(n) / static_cast<double>(d);
    const double log_tr = log_trace_power(shift, q, s, d);
    double value = -std::numeric_limits<double>::infinity();
    if (std::isfinite(log_tr)) {
      double removed = 0.0;
      for (std::size_t k : proper_divisors(d)) {
        const double z = self(self, k);
        if (std::isfinite(z)) removed += std::exp(std::log(static_cast<double>(k)) + z - log_tr);
      }
      const double rest = 1.0 - removed;
      if (rest > 1e-12) value = log_tr + std::log(rest) - std::log(static_cast<double>(d));
    }
    memo[d] = value;
    return value;
  };
  return solve(solve, n);
}

}  // namespace orbitlink
