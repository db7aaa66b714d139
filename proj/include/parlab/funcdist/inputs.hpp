#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "parlab/common/bits.hpp"
#include "parlab/common/rng.hpp"

namespace parlab {

struct UniformInputs {
  int n = 0;
};
struct PointMass {
  int n = 0;
  Mask x = 0;
};
// Uniform mass on the listed points (repeats add mass).
struct FiniteSet {
  int n = 0;
  std::vector<Mask> points;
};

using InputDistribution = std::variant<UniformInputs, PointMass, FiniteSet>;

inline constexpr int kMaxExhaustiveInputs = 12;

int arity(const InputDistribution& d);
void validate(const InputDistribution& d);
Mask draw_input(const InputDistribution& d, Rng& rng);

struct WeightedPoint {
  Mask x = 0;
  double p = 0.0;
};

// Every point with its mass; uniform inputs need n <= max_n (TooLarge).
std::vector<WeightedPoint> enumerate_inputs(const InputDistribution& d,
                                            int max_n = kMaxExhaustiveInputs);

// Sum of squared point masses.
double collision_probability(const InputDistribution& d);

std::string describe(const InputDistribution& d);

}  // namespace parlab
