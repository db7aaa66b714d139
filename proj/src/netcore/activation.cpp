#include "parlab/netcore/activation.hpp"

#include <string>

#include "parlab/common/error.hpp"

namespace parlab {

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Tanh: return "tanh";
    case Activation::ReLU: return "relu";
    case Activation::Cosine: return "cosine";
    case Activation::Identity: return "identity";
  }
  return "identity";
}

Activation parse_activation(std::string_view name) {
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::ReLU;
  if (name == "cosine") return Activation::Cosine;
  if (name == "identity") return Activation::Identity;
  throw InvalidArgument("unknown activation: " + std::string(name));
}

}  // namespace parlab
