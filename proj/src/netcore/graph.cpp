#include "parlab/netcore/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <string>

#include "parlab/common/error.hpp"

namespace parlab {

std::vector<VertexId> topological_order(std::size_t vertex_count,
                                        std::span<const Edge> edges,
                                        std::span<const VertexId> sources) {
  std::vector<std::uint32_t> indegree(vertex_count, 0);
  std::vector<std::vector<VertexId>> out(vertex_count);
  for (const Edge& e : edges) {
    if (e.from >= vertex_count || e.to >= vertex_count) {
      throw InvalidGraph("edge endpoint out of range");
    }
    out[e.from].push_back(e.to);
    ++indegree[e.to];
  }
  std::vector<std::uint8_t> source(vertex_count, 0);
  for (VertexId s : sources) source.at(s) = 1;

  std::priority_queue<VertexId, std::vector<VertexId>, std::greater<>> ready;
  for (VertexId s : sources) {
    for (VertexId t : out[s]) {
      if (--indegree[t] == 0 && !source[t]) ready.push(t);
    }
  }
  for (VertexId v = 0; v < vertex_count; ++v) {
    // Non-source vertices without any incoming edge are still evaluated.
    if (!source[v] && indegree[v] == 0) {
      bool has_in = false;
      for (const Edge& e : edges) has_in |= (e.to == v);
      if (!has_in) ready.push(v);
    }
  }

  std::vector<VertexId> order;
  order.reserve(vertex_count);
  std::vector<std::uint8_t> scheduled(vertex_count, 0);
  while (!ready.empty()) {
    const VertexId v = ready.top();
    ready.pop();
    if (scheduled[v]) continue;
    scheduled[v] = 1;
    order.push_back(v);
    for (VertexId t : out[v]) {
      if (--indegree[t] == 0 && !source[t]) ready.push(t);
    }
  }
  const std::size_t expected =
      vertex_count - static_cast<std::size_t>(std::count(source.begin(), source.end(), 1));
  if (order.size() != expected) throw CycleDetected("graph contains a directed cycle");
  return order;
}

NetGraph::NetGraph(std::size_t vertex_count, VertexId constant, std::vector<VertexId> inputs,
                   VertexId output, std::vector<Edge> edges)
    : vertex_count_(vertex_count),
      constant_(constant),
      inputs_(std::move(inputs)),
      output_(output),
      edges_(std::move(edges)) {
  if (constant_ >= vertex_count_ || output_ >= vertex_count_) {
    throw InvalidGraph("special vertex out of range");
  }
  is_source_.assign(vertex_count_, 0);
  is_source_[constant_] = 1;
  for (VertexId v : inputs_) {
    if (v >= vertex_count_) throw InvalidGraph("input vertex out of range");
    if (is_source_[v]) throw InvalidGraph("special vertices must be distinct");
    is_source_[v] = 1;
  }
  if (is_source_[output_]) throw InvalidGraph("output vertex cannot be a source");

  std::set<std::pair<VertexId, VertexId>> seen;
  std::vector<std::uint32_t> indegree(vertex_count_, 0);
  for (const Edge& e : edges_) {
    if (e.from >= vertex_count_ || e.to >= vertex_count_) {
      throw InvalidGraph("edge endpoint out of range");
    }
    if (!seen.emplace(e.from, e.to).second) throw InvalidGraph("duplicate edge");
    ++indegree[e.to];
  }
  for (VertexId v = 0; v < vertex_count_; ++v) {
    if (is_source_[v] && indegree[v] != 0) {
      throw InvalidGraph("constant and input vertices must have in-degree 0");
    }
    if (!is_source_[v] && indegree[v] == 0) {
      throw InvalidGraph("vertex " + std::to_string(v) + " has in-degree 0 but is not a source");
    }
  }

  std::vector<VertexId> sources{constant_};
  sources.insert(sources.end(), inputs_.begin(), inputs_.end());
  order_ = topological_order(vertex_count_, edges_, sources);

  // Every vertex other than the output must reach it.
  std::vector<std::vector<VertexId>> rev(vertex_count_);
  for (const Edge& e : edges_) rev[e.to].push_back(e.from);
  std::vector<std::uint8_t> reaches(vertex_count_, 0);
  std::vector<VertexId> stack{output_};
  reaches[output_] = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (VertexId u : rev[v]) {
      if (!reaches[u]) {
        reaches[u] = 1;
        stack.push_back(u);
      }
    }
  }
  for (VertexId v = 0; v < vertex_count_; ++v) {
    if (!reaches[v]) {
      throw InvalidGraph("vertex " + std::to_string(v) + " has no path to the output");
    }
  }

  in_offsets_.assign(vertex_count_ + 1, 0);
  for (const Edge& e : edges_) ++in_offsets_[e.to + 1];
  for (std::size_t v = 0; v < vertex_count_; ++v) in_offsets_[v + 1] += in_offsets_[v];
  in_edges_.resize(edges_.size());
  std::vector<std::uint32_t> fill(in_offsets_.begin(), in_offsets_.end() - 1);
  for (EdgeId e = 0; e < edges_.size(); ++e) in_edges_[fill[edges_[e].to]++] = e;
}

bool NetGraph::is_valid_order(std::span<const VertexId> order) const {
  if (order.size() != order_.size()) return false;
  std::vector<std::int64_t> position(vertex_count_, -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const VertexId v = order[i];
    if (v >= vertex_count_ || is_source_[v] || position[v] != -1) return false;
    position[v] = static_cast<std::int64_t>(i);
  }
  for (const Edge& e : edges_) {
    if (!is_source_[e.from] && position[e.from] >= position[e.to]) return false;
  }
  return true;
}

}  // namespace parlab
