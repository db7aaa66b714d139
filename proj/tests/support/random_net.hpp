#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "parlab/common/rng.hpp"
#include "parlab/netcore/net.hpp"

namespace parlab::fixtures {

// Random DAG net: n inputs, `interior` hidden vertices and an output, with
// vertex ids shuffled so that id order is usually not a topological order.
inline NeuralNet random_net(Rng& rng, int n, int interior, std::size_t max_edges,
                            Activation act) {
  const int count = 1 + n + interior + 1;
  // Logical positions: 0 constant, 1..n inputs, then interior, then output.
  std::vector<VertexId> id(count);
  std::iota(id.begin(), id.end(), 0);
  rng.shuffle(id.begin(), id.end());

  std::vector<std::pair<int, int>> logical;
  std::vector<int> out_degree(count, 0);
  auto connect = [&](int a, int b) {
    for (auto& p : logical) {
      if (p.first == a && p.second == b) return;
    }
    logical.emplace_back(a, b);
    ++out_degree[a];
  };
  for (int v = n + 1; v < count; ++v) {
    const int preds = 1 + static_cast<int>(rng.below(3));
    for (int p = 0; p < preds; ++p) connect(static_cast<int>(rng.below(v)), v);
  }
  for (int v = 0; v < count - 1; ++v) {
    if (out_degree[v] == 0) {
      const int lo = std::max(v + 1, n + 1);
      connect(v, lo + static_cast<int>(rng.below(count - lo)));
    }
  }
  if (logical.size() > max_edges) {
    // Too dense: retry with fewer hidden vertices.
    return random_net(rng, n, std::max(0, interior - 1), max_edges, act);
  }

  std::vector<Edge> edges;
  for (auto [a, b] : logical) edges.push_back({id[a], id[b]});
  std::vector<VertexId> inputs(id.begin() + 1, id.begin() + 1 + n);
  NeuralNet net;
  net.activation = act;
  net.output_activation = act;
  net.graph = std::make_shared<const NetGraph>(count, id[0], inputs, id[count - 1], edges);
  net.weights.resize(edges.size());
  for (double& w : net.weights) w = rng.uniform(-1.5, 1.5);
  return net;
}

inline std::vector<double> random_input(Rng& rng, std::size_t n) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  return x;
}

}  // namespace parlab::fixtures
