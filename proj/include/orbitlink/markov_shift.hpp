#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace orbitlink {

using EdgeId = std::uint32_t;
using VertexId = std::uint32_t;

struct Edge {
  VertexId source;
  VertexId target;
};

/// Edge shift of a finite directed multigraph.  Symbols are edges; a word
/// e1 e2 ... is admissible when target(e_i) == source(e_{i+1}).
///
/// Construction rejects graphs that are not strongly connected or that have a
/// vertex without incoming or outgoing edges.  The period (gcd of cycle word
/// lengths) is computed once; the shift is mixing iff the period is 1.
class MarkovShift {
 public:
  MarkovShift(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  /// Outgoing edge ids of v in increasing order.
  std::span<const EdgeId> out_edges(VertexId v) const {
    return {out_.data() + out_offset_[v], out_.data() + out_offset_[v + 1]};
  }
  std::span<const EdgeId> in_edges(VertexId v) const {
    return {in_.data() + in_offset_[v], in_.data() + in_offset_[v + 1]};
  }

  bool follows(EdgeId first, EdgeId second) const {
    return edges_[first].target == edges_[second].source;
  }
  /// True if the word is a closed admissible path.
  bool is_cycle(std::span<const EdgeId> word) const;

  std::size_t period() const { return period_; }
  bool is_mixing() const { return period_ == 1; }

  /// Vertex adjacency counts A[u][v] = #edges u -> v, row-major.
  std::vector<std::int64_t> adjacency_counts() const;

 private:
  std::size_t vertex_count_;
  std::vector<Edge> edges_;
  std::vector<EdgeId> out_, in_;
  std::vector<std::size_t> out_offset_, in_offset_;
  std::size_t period_ = 1;
};

/// Full shift on n symbols (one vertex, n loops).
MarkovShift full_shift(std::size_t symbols);

/// Result of recoding a shift by paths of k edges.
struct BlockRecoding {
  MarkovShift shift;
  /// For each new edge, the original k-edge path it stands for.
  std::vector<std::vector<EdgeId>> paths;
};

/// k-block presentation: vertices are admissible (k-1)-edge paths, edges are
/// k-edge paths.  Depth-k data becomes depth-1 data on the recoded shift.
/// k == 1 returns the shift unchanged.
BlockRecoding block_recode(const MarkovShift& shift, std::size_t k);

}  // namespace orbitlink
