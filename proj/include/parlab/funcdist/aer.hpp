#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace parlab {

// Simple undirected graph; edges stored as (u, v) with u < v, sorted.
struct UndirectedGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
};

void normalize(UndirectedGraph& g);

// Erdos-Renyi graph with edge probability min(1, m/n), then repeatedly: pick
// a uniform edge among those on a cycle shorter than r, pick a uniform
// shortest cycle through it, delete a uniform edge of that cycle. Stops when
// the girth is at least r.
UndirectedGraph aer_sample(int n, double m, int r, std::uint64_t seed);

// Length of the shortest cycle, nullopt for a forest.
std::optional<int> girth(const UndirectedGraph& g);

bool connectivity_label(const UndirectedGraph& g);

// Vertices of b are shifted by a.n.
UndirectedGraph disjoint_union(const UndirectedGraph& a, const UndirectedGraph& b);

// "n <count>" followed by one "u v" line per edge.
std::string edge_list_text(const UndirectedGraph& g);
UndirectedGraph parse_edge_list(const std::string& text);

}  // namespace parlab
