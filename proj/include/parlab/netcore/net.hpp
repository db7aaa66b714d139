#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "parlab/netcore/activation.hpp"
#include "parlab/netcore/graph.hpp"
#include "parlab/netcore/quantize.hpp"

namespace parlab {

// One real weight per edge, indexed by EdgeId.
using WeightVector = std::vector<double>;

enum class LossKind {
  SquaredError,  // L(d) = d^2 with d = eval(x) - y
  LogisticBCE,   // -y log p - (1 - y) log(1 - p) with p = eval(x), y in [0, 1]
};

// (f, G) plus weights. `activation` is applied at every interior vertex and
// `output_activation` at the output vertex; they coincide for the classic
// single-nonlinearity net.
struct NeuralNet {
  Activation activation = Activation::Sigmoid;
  Activation output_activation = Activation::Sigmoid;
  std::shared_ptr<const NetGraph> graph;
  WeightVector weights;
  std::optional<QuantizationSpec> quantization;

  std::size_t input_size() const { return graph->input_size(); }
  std::size_t edge_count() const { return graph->edge_count(); }
  Activation activation_at(VertexId v) const {
    return v == graph->output_vertex() ? output_activation : activation;
  }
};

// Throws if the weight vector does not match the edge set.
void validate(const NeuralNet& net);

// Scratch space reused across forward/backward passes of one net shape.
struct Workspace {
  std::vector<double> pre;
  std::vector<double> post;
  std::vector<double> adjoint;
  void resize(std::size_t vertices);
};

double evaluate(const NeuralNet& net, std::span<const double> x);
// Same, but visits the interior vertices in a caller-supplied valid order.
double evaluate(const NeuralNet& net, std::span<const double> x,
                std::span<const VertexId> order);
double evaluate(const NeuralNet& net, std::span<const double> x, Workspace& ws);

double loss_value(LossKind loss, const NeuralNet& net, double output_pre, double output,
                  double y);

struct SampleGradient {
  double output = 0.0;
  double loss = 0.0;
};

// Reverse-mode derivative of the loss on (x, y) with respect to every edge
// weight, written into `grad` (size edge_count()).
SampleGradient sample_gradient(const NeuralNet& net, std::span<const double> x, double y,
                               LossKind loss, Workspace& ws, std::span<double> grad);

WeightVector gradient(const NeuralNet& net, std::span<const double> x, double y, LossKind loss);

}  // namespace parlab
