#pragma once

#include <cmath>
#include <string_view>

namespace parlab {

enum class Activation { Sigmoid, Tanh, ReLU, Cosine, Identity };

inline double activate(Activation a, double z) {
  switch (a) {
    case Activation::Sigmoid:
      return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    case Activation::Tanh:
      return std::tanh(z);
    case Activation::ReLU:
      return z > 0.0 ? z : 0.0;
    case Activation::Cosine:
      return std::cos(z);
    case Activation::Identity:
      return z;
  }
  return z;
}

// Derivative with respect to the pre-activation. ReLU uses 0 at z == 0.
inline double activate_derivative(Activation a, double z) {
  switch (a) {
    case Activation::Sigmoid: {
      const double s = activate(Activation::Sigmoid, z);
      return s * (1.0 - s);
    }
    case Activation::Tanh: {
      const double t = std::tanh(z);
      return 1.0 - t * t;
    }
    case Activation::ReLU:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::Cosine:
      return -std::sin(z);
    case Activation::Identity:
      return 1.0;
  }
  return 1.0;
}

// Smooth, strictly increasing with bounded derivative, and horizontal
// asymptotes. Only Sigmoid and Tanh qualify.
constexpr bool is_normal(Activation a) {
  return a == Activation::Sigmoid || a == Activation::Tanh;
}

// Midpoint of the activation's range; the default output threshold.
constexpr double activation_midpoint(Activation a) {
  return a == Activation::Sigmoid ? 0.5 : 0.0;
}

std::string_view activation_name(Activation a);
Activation parse_activation(std::string_view name);

}  // namespace parlab
