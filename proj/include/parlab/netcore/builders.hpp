#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "parlab/common/bits.hpp"
#include "parlab/common/rng.hpp"
#include "parlab/netcore/net.hpp"

namespace parlab {

// One cosine unit per size-k subset s, pre-activation
// (pi/2)|s| - (pi/2) sum_{i in s} x_i, so that on {+1,-1}^n the unit equals
// p_s(x) exactly. The readout (unit -> output plus a bias edge) is linear and
// starts at zero.
struct MonomialNet {
  NeuralNet net;
  std::vector<Mask> subsets;          // subset of unit j
  std::vector<EdgeId> readout_edges;  // unit j -> output
  EdgeId readout_bias = 0;            // constant -> output
};

inline constexpr std::size_t kDefaultMonomialBudget = 1u << 14;

MonomialNet build_monomial_net(int n, int k, std::size_t max_units = kDefaultMonomialBudget);

enum class InitScheme {
  Zero,
  UniformFanIn,   // U(-1/sqrt(fan_in), 1/sqrt(fan_in)), the torch.nn.Linear default
  GaussianFanIn,  // N(0, 1/fan_in)
};

struct MlpSpec {
  int inputs = 0;
  std::vector<int> hidden;  // widths of the hidden layers
  Activation activation = Activation::Sigmoid;
  Activation output_activation = Activation::Sigmoid;
  InitScheme init = InitScheme::UniformFanIn;
  bool bias = true;  // constant-vertex edge into every non-input vertex
};

// Layered fully-connected net with a single output vertex.
NeuralNet build_mlp(const MlpSpec& spec, Rng& rng);

// Fresh weights for an existing MLP-shaped graph, drawn layer by layer.
void init_weights(NeuralNet& net, InitScheme scheme, Rng& rng);

}  // namespace parlab
