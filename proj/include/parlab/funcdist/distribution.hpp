#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "parlab/funcdist/function.hpp"

namespace parlab {

struct ParityUniform {
  int n = 0;
};
struct MonomialK {
  int n = 0;
  int k = 0;
};
struct UniformAll {
  int n = 0;
};
// p_const on each constant function, the rest on UniformAll(n).
struct ConstantMixture {
  int n = 0;
  double p_const = 0.0;
};
struct WeightedFunction {
  FunctionId f;
  double p = 0.0;
};
struct Explicit {
  std::vector<WeightedFunction> items;
};

using FunctionDistribution =
    std::variant<ParityUniform, MonomialK, UniformAll, ConstantMixture, Explicit>;

inline constexpr std::size_t kMaxEnumeratedFunctions = 1u << 12;

int arity(const FunctionDistribution& d);

// Throws InvalidArgument on bad parameters; explicit probabilities must sum
// to 1 within 1e-12.
void validate(const FunctionDistribution& d);

FunctionId draw_function(const FunctionDistribution& d, Rng& rng);
FunctionId draw_function(const FunctionDistribution& d, std::uint64_t seed);

// Full support with probabilities. Throws TooLarge beyond `cap` entries.
std::vector<WeightedFunction> enumerate_support(const FunctionDistribution& d,
                                                std::size_t cap = kMaxEnumeratedFunctions);

// True when every function in the support has the same probability.
bool is_uniform_support(const FunctionDistribution& d);

std::string describe(const FunctionDistribution& d);

}  // namespace parlab
