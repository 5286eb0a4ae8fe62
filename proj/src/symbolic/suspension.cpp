#include "orbitlink/suspension.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "orbitlink/error.hpp"

namespace orbitlink {

EdgeFunction::EdgeFunction(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("edge function values must be finite");
  }
}

EdgeFunction EdgeFunction::indicator(std::size_t edges, EdgeId edge) {
  if (edge >= edges) throw InvalidInput("indicator edge out of range");
  std::vector<double> v(edges, 0.0);
  v[edge] = 1.0;
  return EdgeFunction(std::move(v));
}

double EdgeFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double EdgeFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

EdgeFunction EdgeFunction::operator+(const EdgeFunction& other) const { return axpy(1.0, other); }
EdgeFunction EdgeFunction::operator-(const EdgeFunction& other) const { return axpy(-1.0, other); }

EdgeFunction EdgeFunction::operator*(double s) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= s;
  return EdgeFunction(std::move(v));
}

EdgeFunction EdgeFunction::axpy(double s, const EdgeFunction& other) const {
  if (other.size() != size()) throw InvalidInput("edge function sizes differ");
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += s * other.values_[i];
  return EdgeFunction(std::move(v));
}

namespace {

// Real gcd by the Euclidean algorithm; returns 0 when the remainders fall
// below `floor` without terminating (incommensurable inputs).
double real_gcd(double a, double b, double floor) {
  a = std::fabs(a);
  b = std::fabs(b);
  if (a < b) std::swap(a, b);
  while (b > floor) {
    double r = std::fmod(a, b);
    if (b - r <= floor) r = 0.0;
    a = b;
    b = r;
  }
  return a;
}

// Lattice span of the cycle-length group.  With g(v) the roof distance from
// vertex 0 along a BFS tree, c(e) = g(s) + r(e) - g(t) vanishes on tree edges
// and cycle lengths are sums of c over the cycle, so the group is generated by
// the c values.
std::optional<double> compute_lattice_span(const MarkovShift& shift, const EdgeFunction& roof) {
  const std::size_t V = shift.vertex_count();
  std::vector<double> g(V, 0.0);
  std::vector<bool> seen(V, false);
  std::queue<VertexId> queue;
  seen[0] = true;
  queue.push(0);
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop();
    for (EdgeId e : shift.out_edges(v)) {
      VertexId w = shift.edge(e).target;
      if (!seen[w]) {
        seen[w] = true;
        g[w] = g[v] + roof[e];
        queue.push(w);
      }
    }
  }
  double scale = roof.max();
  for (double x : g) scale = std::max(scale, std::fabs(x));
  const double tol = 1e-9 * scale;
  double span = 0.0;
  for (EdgeId e = 0; e < shift.edge_count(); ++e) {
    double c = g[shift.edge(e).source] + roof[e] - g[shift.edge(e).target];
    if (std::fabs(c) <= tol) continue;
    span = span == 0.0 ? std::fabs(c) : real_gcd(span, c, tol);
    if (span <= tol) return std::nullopt;
  }
  // accept only spans that are not absurdly fine compared with the roof
  if (span < 1e-6 * scale) return std::nullopt;
  return span;
}

}  // namespace

SuspensionSystem::SuspensionSystem(MarkovShift shift, EdgeFunction roof, EdgeFunction potential,
                                   std::vector<std::vector<std::int64_t>> labels, std::string name)
    : shift_(std::move(shift)), roof_(std::move(roof)), potential_(std::move(potential)), name_(std::move(name)) {
  const std::size_t E = shift_.edge_count();
  if (roof_.size() != E) throw InvalidInput("roof must have one value per edge");
  if (potential_.size() != E) throw InvalidInput("potential must have one value per edge");
  if (roof_.min() <= 0.0) throw InvalidInput("roof must be strictly positive");
  if (!labels.empty()) {
    if (labels.size() != E) throw InvalidInput("labels must have one vector per edge");
    betti_ = labels[0].size();
    for (const auto& l : labels) {
      if (l.size() != betti_) throw InvalidInput("all labels must have length b");
    }
    labels_.reserve(E * betti_);
    for (const auto& l : labels) labels_.insert(labels_.end(), l.begin(), l.end());
  }
  lattice_span_ = compute_lattice_span(shift_, roof_);
}

EdgeFunction SuspensionSystem::label_component(std::size_t i) const {
  if (i >= betti_) throw InvalidInput("label component out of range");
  std::vector<double> v(shift_.edge_count());
  for (EdgeId e = 0; e < v.size(); ++e) v[e] = static_cast<double>(labels_[e * betti_ + i]);
  return EdgeFunction(std::move(v));
}

SuspensionSystem SuspensionSystem::with_potential(EdgeFunction potential) const {
  SuspensionSystem copy = *this;
  if (potential.size() != shift_.edge_count()) throw InvalidInput("potential must have one value per edge");
  copy.potential_ = std::move(potential);
  return copy;
}

std::size_t least_rotation(std::span<const EdgeId> word) {
  // Booth's algorithm
  const std::size_t n = word.size();
  if (n == 0) return 0;
  std::vector<long> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    EdgeId sj = word[j % n];
    long i = f[j - k - 1];
    while (i != -1 && sj != word[(k + i + 1) % n]) {
      if (sj < word[(k + i + 1) % n]) k = j - i - 1;
      i = f[i];
    }
    if (sj != word[(k + i + 1) % n]) {
      if (sj < word[k % n]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return k % n;
}

bool is_prime_word(std::span<const EdgeId> word) {
  const std::size_t n = word.size();
  if (n == 0) return false;
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool repeats = true;
    for (std::size_t i = p; i < n && repeats; ++i) repeats = word[i] == word[i - p];
    if (repeats) return false;
  }
  return true;
}

PeriodicOrbit make_orbit(const SuspensionSystem& system, std::span<const EdgeId> word) {
  if (!system.shift().is_cycle(word)) throw InvalidInput("word is not a closed path: " + word_to_string(word));
  PeriodicOrbit orbit;
  const std::size_t start = least_rotation(word);
  orbit.word.reserve(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) orbit.word.push_back(word[(start + i) % word.size()]);
  orbit.homology.assign(system.betti(), 0);
  for (EdgeId e : orbit.word) {
    orbit.length += system.roof()[e];
    orbit.weight += system.potential()[e];
    auto l = system.label(e);
    for (std::size_t i = 0; i < l.size(); ++i) orbit.homology[i] += l[i];
  }
  return orbit;
}

std::string word_to_string(std::span<const EdgeId> word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(word[i]);
  }
  return out;
}

std::vector<EdgeId> word_from_string(const std::string& text) {
  std::vector<EdgeId> word;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, '.')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidInput("bad word: '" + text + "'");
    word.push_back(static_cast<EdgeId>(std::stoul(item)));
  }
  if (word.empty()) throw InvalidInput("empty word");
  return word;
}

double orbit_integral(const SuspensionSystem& system, std::span<const EdgeId> word,
                      const EdgeFunction& density) {
  double s = 0.0;
  for (EdgeId e : word) s += density[e] * system.roof()[e];
  return s;
}

}  // namespace orbitlink
