#include "orbitlink/markov_shift.hpp"

#include <map>
#include <numeric>
#include <queue>
#include <string>

#include "orbitlink/error.hpp"

namespace orbitlink {
namespace {

std::vector<bool> reachable(std::size_t n, const std::vector<EdgeId>& adj, const std::vector<std::size_t>& offset,
                            const std::vector<Edge>& edges, bool forward) {
  std::vector<bool> seen(n, false);
  std::queue<VertexId> queue;
  seen[0] = true;
  queue.push(0);
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop();
    for (std::size_t i = offset[v]; i < offset[v + 1]; ++i) {
      const Edge& e = edges[adj[i]];
      VertexId w = forward ? e.target : e.source;
      if (!seen[w]) {
        seen[w] = true;
        queue.push(w);
      }
    }
  }
  return seen;
}

}  // namespace

MarkovShift::MarkovShift(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ == 0) throw InvalidInput("shift needs at least one vertex");
  if (edges_.empty()) throw InvalidInput("shift needs at least one edge");
  for (const Edge& e : edges_) {
    if (e.source >= vertex_count_ || e.target >= vertex_count_)
      throw InvalidInput("edge endpoint out of range");
  }
  out_offset_.assign(vertex_count_ + 1, 0);
  in_offset_.assign(vertex_count_ + 1, 0);
  for (const Edge& e : edges_) {
    ++out_offset_[e.source + 1];
    ++in_offset_[e.target + 1];
  }
  std::partial_sum(out_offset_.begin(), out_offset_.end(), out_offset_.begin());
  std::partial_sum(in_offset_.begin(), in_offset_.end(), in_offset_.begin());
  out_.resize(edges_.size());
  in_.resize(edges_.size());
  std::vector<std::size_t> out_fill(out_offset_.begin(), out_offset_.end() - 1);
  std::vector<std::size_t> in_fill(in_offset_.begin(), in_offset_.end() - 1);
  for (EdgeId i = 0; i < edges_.size(); ++i) {
    out_[out_fill[edges_[i].source]++] = i;
    in_[in_fill[edges_[i].target]++] = i;
  }
  for (VertexId v = 0; v < vertex_count_; ++v) {
    if (out_offset_[v] == out_offset_[v + 1])
      throw InvalidInput("vertex " + std::to_string(v) + " has no outgoing edge");
    if (in_offset_[v] == in_offset_[v + 1])
      throw InvalidInput("vertex " + std::to_string(v) + " has no incoming edge");
  }
  auto fwd = reachable(vertex_count_, out_, out_offset_, edges_, true);
  auto bwd = reachable(vertex_count_, in_, in_offset_, edges_, false);
  for (VertexId v = 0; v < vertex_count_; ++v) {
    if (!fwd[v] || !bwd[v]) throw InvalidInput("shift is not strongly connected");
  }

  // period = gcd of (level(s) + 1 - level(t)) over edges, levels from a BFS tree
  std::vector<long long> level(vertex_count_, -1);
  std::queue<VertexId> queue;
  level[0] = 0;
  queue.push(0);
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop();
    for (EdgeId e : out_edges(v)) {
      VertexId w = edges_[e].target;
      if (level[w] < 0) {
        level[w] = level[v] + 1;
        queue.push(w);
      }
    }
  }
  long long g = 0;
  for (const Edge& e : edges_) g = std::gcd(g, std::llabs(level[e.source] + 1 - level[e.target]));
  period_ = static_cast<std::size_t>(g == 0 ? 1 : g);
}

bool MarkovShift::is_cycle(std::span<const EdgeId> word) const {
  if (word.empty()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] >= edges_.size()) return false;
    if (!follows(word[i], word[(i + 1) % word.size()])) return false;
  }
  return true;
}

std::vector<std::int64_t> MarkovShift::adjacency_counts() const {
  std::vector<std::int64_t> a(vertex_count_ * vertex_count_, 0);
  for (const Edge& e : edges_) ++a[e.source * vertex_count_ + e.target];
  return a;
}

MarkovShift full_shift(std::size_t symbols) {
  std::vector<Edge> edges(symbols, Edge{0, 0});
  return MarkovShift(1, std::move(edges));
}

BlockRecoding block_recode(const MarkovShift& shift, std::size_t k) {
  if (k == 0) throw InvalidInput("block length must be positive");
  if (k == 1) {
    std::vector<std::vector<EdgeId>> paths;
    for (EdgeId e = 0; e < shift.edge_count(); ++e) paths.push_back({e});
    return {shift, std::move(paths)};
  }
  // enumerate admissible paths of k-1 edges (new vertices) and k edges (new edges)
  auto extend = [&](const std::vector<std::vector<EdgeId>>& shorter) {
    std::vector<std::vector<EdgeId>> longer;
    for (const auto& p : shorter) {
      for (EdgeId e : shift.out_edges(shift.edge(p.back()).target)) {
        auto q = p;
        q.push_back(e);
        longer.push_back(std::move(q));
      }
    }
    return longer;
  };
  std::vector<std::vector<EdgeId>> vertices;
  for (EdgeId e = 0; e < shift.edge_count(); ++e) vertices.push_back({e});
  for (std::size_t len = 1; len < k - 1; ++len) vertices = extend(vertices);
  std::map<std::vector<EdgeId>, VertexId> index;
  for (VertexId i = 0; i < vertices.size(); ++i) index[vertices[i]] = i;
  std::vector<std::vector<EdgeId>> paths = extend(vertices);
  std::vector<Edge> edges;
  edges.reserve(paths.size());
  for (const auto& p : paths) {
    std::vector<EdgeId> head(p.begin(), p.end() - 1), tail(p.begin() + 1, p.end());
    edges.push_back({index.at(head), index.at(tail)});
  }
  return {MarkovShift(vertices.size(), std::move(edges)), std::move(paths)};
}

}  // namespace orbitlink
