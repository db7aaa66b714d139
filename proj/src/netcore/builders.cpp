#include "parlab/netcore/builders.hpp"

#include <cmath>
#include <numbers>

#include "parlab/common/error.hpp"

namespace parlab {

MonomialNet build_monomial_net(int n, int k, std::size_t max_units) {
  if (n < 1 || n > 63 || k < 1 || k > n) {
    throw InvalidArgument("build_monomial_net needs 1 <= k <= n <= 63");
  }
  if (binomial_capped(n, k, max_units) > max_units) {
    throw BudgetExceeded("C(" + std::to_string(n) + "," + std::to_string(k) +
                         ") units exceed the budget of " + std::to_string(max_units));
  }
  MonomialNet out;
  out.subsets = subsets_of_size(n, k);
  const auto units = out.subsets.size();
  const VertexId constant = 0;
  std::vector<VertexId> inputs(n);
  for (int i = 0; i < n; ++i) inputs[i] = static_cast<VertexId>(i + 1);
  const auto first_unit = static_cast<VertexId>(n + 1);
  const auto output = static_cast<VertexId>(first_unit + units);

  std::vector<Edge> edges;
  WeightVector w;
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (std::size_t j = 0; j < units; ++j) {
    const VertexId u = first_unit + static_cast<VertexId>(j);
    const Mask s = out.subsets[j];
    edges.push_back({constant, u});
    w.push_back(half_pi * std::popcount(s));
    for (int i = 0; i < n; ++i) {
      if ((s >> i) & 1) {
        edges.push_back({inputs[i], u});
        w.push_back(-half_pi);
      }
    }
  }
  for (std::size_t j = 0; j < units; ++j) {
    out.readout_edges.push_back(static_cast<EdgeId>(edges.size()));
    edges.push_back({first_unit + static_cast<VertexId>(j), output});
    w.push_back(0.0);
  }
  out.readout_bias = static_cast<EdgeId>(edges.size());
  edges.push_back({constant, output});
  w.push_back(0.0);

  out.net.activation = Activation::Cosine;
  out.net.output_activation = Activation::Identity;
  out.net.graph = std::make_shared<const NetGraph>(output + 1, constant, std::move(inputs), output,
                                                   std::move(edges));
  out.net.weights = std::move(w);
  return out;
}

NeuralNet build_mlp(const MlpSpec& spec, Rng& rng) {
  if (spec.inputs < 1) throw InvalidArgument("MLP needs at least one input");
  for (int width : spec.hidden) {
    if (width < 1) throw InvalidArgument("MLP layer widths must be positive");
  }
  const VertexId constant = 0;
  std::vector<VertexId> inputs(spec.inputs);
  for (int i = 0; i < spec.inputs; ++i) inputs[i] = static_cast<VertexId>(i + 1);

  std::vector<Edge> edges;
  std::vector<VertexId> prev = inputs;
  VertexId next = static_cast<VertexId>(spec.inputs + 1);
  std::vector<int> widths = spec.hidden;
  widths.push_back(1);
  for (int width : widths) {
    std::vector<VertexId> layer;
    for (int j = 0; j < width; ++j) {
      const VertexId v = next++;
      if (spec.bias) edges.push_back({constant, v});
      for (VertexId u : prev) edges.push_back({u, v});
      layer.push_back(v);
    }
    prev = std::move(layer);
  }
  if (!spec.bias) {
    // The constant vertex must still reach the output.
    edges.push_back({constant, prev.front()});
  }
  NeuralNet net;
  net.activation = spec.activation;
  net.output_activation = spec.output_activation;
  net.graph = std::make_shared<const NetGraph>(next, constant, std::move(inputs), prev.front(),
                                               std::move(edges));
  net.weights.assign(net.graph->edge_count(), 0.0);
  init_weights(net, spec.init, rng);
  return net;
}

void init_weights(NeuralNet& net, InitScheme scheme, Rng& rng) {
  const NetGraph& g = *net.graph;
  net.weights.assign(g.edge_count(), 0.0);
  if (scheme == InitScheme::Zero) return;
  for (VertexId v : g.order()) {
    const auto in = g.incoming(v);
    // Fan-in counts the non-constant predecessors (the previous layer width).
    std::size_t fan_in = 0;
    for (EdgeId e : in) fan_in += g.edge(e).from != g.constant_vertex();
    const double scale = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(fan_in, 1)));
    for (EdgeId e : in) {
      net.weights[e] = scheme == InitScheme::UniformFanIn ? rng.uniform(-scale, scale)
                                                          : scale * rng.normal();
    }
  }
}

}  // namespace parlab
