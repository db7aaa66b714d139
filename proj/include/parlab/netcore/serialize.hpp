#pragma once

#include <string>

#include "json.hpp"
#include "parlab/netcore/net.hpp"

namespace parlab {

// {activation, output_activation, n, vertices, edges:[{from,to,weight}],
//  special:{constant,inputs,output}, quantization?}. Quantized nets store
// each weight as the exact decimal string of its lattice value.
nlohmann::json net_to_json(const NeuralNet& net);
NeuralNet net_from_json(const nlohmann::json& j);

std::string dump_net(const NeuralNet& net);
NeuralNet parse_net(const std::string& text);

}  // namespace parlab
