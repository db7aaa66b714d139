#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace parlab {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  VertexId from = 0;
  VertexId to = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Kahn ordering of every vertex that is not in `sources`, ties broken by
// ascending id. Throws CycleDetected if some vertex can never be scheduled.
std::vector<VertexId> topological_order(std::size_t vertex_count,
                                        std::span<const Edge> edges,
                                        std::span<const VertexId> sources);

// Acyclic weighted-digraph skeleton of a neural net: a constant vertex, n
// input vertices (exactly the in-degree-0 vertices), and an output vertex
// reachable from every other vertex. Edge ids are positions in edges().
// Immutable after construction; the constructor validates every invariant.
class NetGraph {
 public:
  NetGraph(std::size_t vertex_count, VertexId constant, std::vector<VertexId> inputs,
           VertexId output, std::vector<Edge> edges);

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t input_size() const { return inputs_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  VertexId constant_vertex() const { return constant_; }
  std::span<const VertexId> input_vertices() const { return inputs_; }
  VertexId output_vertex() const { return output_; }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  // Deterministic evaluation order over the non-source vertices.
  std::span<const VertexId> order() const { return order_; }

  // Incoming edge ids of v, ascending.
  std::span<const EdgeId> incoming(VertexId v) const {
    return {in_edges_.data() + in_offsets_[v], in_edges_.data() + in_offsets_[v + 1]};
  }

  bool is_source(VertexId v) const { return is_source_[v] != 0; }

  // True if `order` lists every non-source vertex once with no edge pointing
  // backwards.
  bool is_valid_order(std::span<const VertexId> order) const;

 private:
  std::size_t vertex_count_;
  VertexId constant_;
  std::vector<VertexId> inputs_;
  VertexId output_;
  std::vector<Edge> edges_;
  std::vector<VertexId> order_;
  std::vector<std::uint32_t> in_offsets_;
  std::vector<EdgeId> in_edges_;
  std::vector<std::uint8_t> is_source_;
};

}  // namespace parlab
