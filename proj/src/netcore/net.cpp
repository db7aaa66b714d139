#include "parlab/netcore/net.hpp"

#include <algorithm>
#include <cmath>

#include "parlab/common/error.hpp"

namespace parlab {

namespace {

constexpr double kProbEps = 1e-12;

void check_input(const NeuralNet& net, std::span<const double> x) {
  if (net.weights.size() != net.graph->edge_count()) {
    throw DimensionMismatch("weight vector does not match the edge set");
  }
  if (x.size() != net.input_size()) {
    throw DimensionMismatch("input has " + std::to_string(x.size()) + " entries, net expects " +
                            std::to_string(net.input_size()));
  }
}

double forward(const NeuralNet& net, std::span<const double> x,
               std::span<const VertexId> order, Workspace& ws) {
  const NetGraph& g = *net.graph;
  ws.resize(g.vertex_count());
  ws.post[g.constant_vertex()] = 1.0;
  const auto inputs = g.input_vertices();
  for (std::size_t i = 0; i < inputs.size(); ++i) ws.post[inputs[i]] = x[i];
  const auto edges = g.edges();
  const double* w = net.weights.data();
  for (VertexId v : order) {
    double z = 0.0;
    for (EdgeId e : g.incoming(v)) z += w[e] * ws.post[edges[e].from];
    ws.pre[v] = z;
    ws.post[v] = activate(net.activation_at(v), z);
  }
  return ws.post[g.output_vertex()];
}

// dL/d(pre-activation of the output vertex).
double output_delta(LossKind loss, Activation out_act, double pre, double out, double y) {
  if (loss == LossKind::SquaredError) {
    return 2.0 * (out - y) * activate_derivative(out_act, pre);
  }
  if (out_act == Activation::Sigmoid) return out - y;
  const double p = std::clamp(out, kProbEps, 1.0 - kProbEps);
  return (p - y) / (p * (1.0 - p)) * activate_derivative(out_act, pre);
}

}  // namespace

void Workspace::resize(std::size_t vertices) {
  if (pre.size() != vertices) {
    pre.assign(vertices, 0.0);
    post.assign(vertices, 0.0);
    adjoint.assign(vertices, 0.0);
  }
}

void validate(const NeuralNet& net) {
  if (!net.graph) throw InvalidArgument("net has no graph");
  if (net.weights.size() != net.graph->edge_count()) {
    throw DimensionMismatch("weight vector does not match the edge set");
  }
  if (net.quantization) validate(*net.quantization);
}

double evaluate(const NeuralNet& net, std::span<const double> x, Workspace& ws) {
  check_input(net, x);
  return forward(net, x, net.graph->order(), ws);
}

double evaluate(const NeuralNet& net, std::span<const double> x) {
  Workspace ws;
  return evaluate(net, x, ws);
}

double evaluate(const NeuralNet& net, std::span<const double> x,
                std::span<const VertexId> order) {
  check_input(net, x);
  if (!net.graph->is_valid_order(order)) throw InvalidArgument("not a valid topological order");
  Workspace ws;
  return forward(net, x, order, ws);
}

double loss_value(LossKind loss, const NeuralNet& net, double output_pre, double output,
                  double y) {
  if (loss == LossKind::SquaredError) return (output - y) * (output - y);
  if (net.output_activation == Activation::Sigmoid) {
    // softplus(z) - y z, stable for large |z|.
    const double z = output_pre;
    const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    return softplus - y * z;
  }
  const double p = std::clamp(output, kProbEps, 1.0 - kProbEps);
  return -y * std::log(p) - (1.0 - y) * std::log(1.0 - p);
}

SampleGradient sample_gradient(const NeuralNet& net, std::span<const double> x, double y,
                               LossKind loss, Workspace& ws, std::span<double> grad) {
  check_input(net, x);
  if (grad.size() != net.edge_count()) throw DimensionMismatch("gradient buffer size");
  const NetGraph& g = *net.graph;
  const auto order = g.order();
  const double out = forward(net, x, order, ws);
  const VertexId out_v = g.output_vertex();
  const double out_pre = ws.pre[out_v];

  std::fill(ws.adjoint.begin(), ws.adjoint.end(), 0.0);
  const auto edges = g.edges();
  const double* w = net.weights.data();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VertexId v = *it;
    const double delta =
        v == out_v ? output_delta(loss, net.output_activation, out_pre, out, y)
                   : ws.adjoint[v] * activate_derivative(net.activation, ws.pre[v]);
    for (EdgeId e : g.incoming(v)) {
      const VertexId u = edges[e].from;
      grad[e] = delta * ws.post[u];
      if (!g.is_source(u)) ws.adjoint[u] += delta * w[e];
    }
  }
  return {out, loss_value(loss, net, out_pre, out, y)};
}

WeightVector gradient(const NeuralNet& net, std::span<const double> x, double y, LossKind loss) {
  validate(net);
  Workspace ws;
  WeightVector grad(net.edge_count(), 0.0);
  sample_gradient(net, x, y, loss, ws, grad);
  return grad;
}

}  // namespace parlab
