#include "parlab/netcore/serialize.hpp"

#include <cmath>
#include <cstdlib>

#include "parlab/common/error.hpp"

namespace parlab {

using nlohmann::json;

json net_to_json(const NeuralNet& net) {
  validate(net);
  const NetGraph& g = *net.graph;
  json j;
  j["activation"] = std::string(activation_name(net.activation));
  j["output_activation"] = std::string(activation_name(net.output_activation));
  j["n"] = g.input_size();
  j["vertices"] = g.vertex_count();
  json edges = json::array();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(static_cast<EdgeId>(e));
    json je{{"from", ed.from}, {"to", ed.to}};
    if (net.quantization) {
      je["weight"] = exact_decimal(quantize_code(net.weights[e], *net.quantization),
                                   net.quantization->fractional_bits);
    } else {
      je["weight"] = net.weights[e];
    }
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  j["special"] = {{"constant", g.constant_vertex()},
                  {"inputs", std::vector<VertexId>(g.input_vertices().begin(),
                                                   g.input_vertices().end())},
                  {"output", g.output_vertex()}};
  if (net.quantization) {
    j["quantization"] = {{"total_bits", net.quantization->total_bits},
                         {"fractional_bits", net.quantization->fractional_bits}};
  }
  return j;
}

namespace {

double parse_weight(const json& w) {
  if (w.is_number()) return w.get<double>();
  if (w.is_string()) {
    const auto s = w.get<std::string>();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw SchemaError("bad weight string: " + s);
    return v;
  }
  throw SchemaError("edge weight must be a number or decimal string");
}

}  // namespace

NeuralNet net_from_json(const json& j) {
  try {
    NeuralNet net;
    net.activation = parse_activation(j.at("activation").get<std::string>());
    net.output_activation = j.contains("output_activation")
                                ? parse_activation(j["output_activation"].get<std::string>())
                                : net.activation;
    const auto n = j.at("n").get<std::size_t>();
    const auto vertices = j.at("vertices").get<std::size_t>();
    const json& sp = j.at("special");
    auto inputs = sp.at("inputs").get<std::vector<VertexId>>();
    if (inputs.size() != n) throw SchemaError("special.inputs length differs from n");
    std::vector<Edge> edges;
    WeightVector w;
    for (const json& e : j.at("edges")) {
      edges.push_back({e.at("from").get<VertexId>(), e.at("to").get<VertexId>()});
      w.push_back(parse_weight(e.at("weight")));
    }
    if (j.contains("quantization")) {
      QuantizationSpec q{j["quantization"].at("total_bits").get<int>(),
                         j["quantization"].at("fractional_bits").get<int>()};
      validate(q);
      net.quantization = q;
    }
    net.graph = std::make_shared<const NetGraph>(vertices, sp.at("constant").get<VertexId>(),
                                                 std::move(inputs),
                                                 sp.at("output").get<VertexId>(), std::move(edges));
    net.weights = std::move(w);
    return net;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("net document: ") + e.what());
  }
}

std::string dump_net(const NeuralNet& net) { return net_to_json(net).dump(2) + "\n"; }

NeuralNet parse_net(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("net document: ") + e.what());
  }
  return net_from_json(j);
}

}  // namespace parlab
