#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "parlab/common/bits.hpp"
#include "parlab/common/rng.hpp"

namespace parlab {

// Boolean functions on {+1,-1}^n. Points are masks (see bits.hpp) and
// values are +1 or -1.
struct ParitySubset {
  int n = 0;
  Mask s = 0;
};
struct MonomialSubset {
  int n = 0;
  Mask s = 0;
};
// Uniformly random function, materialized lazily from a keyed hash of (seed, x).
struct RandomTable {
  int n = 0;
  std::uint64_t seed = 0;
};
struct ConstPlus {
  int n = 0;
};
struct ConstMinus {
  int n = 0;
};
// Value table indexed by the point mask; entries are +1 or -1.
struct ExplicitTable {
  int n = 0;
  std::shared_ptr<const std::vector<std::int8_t>> values;
};

using FunctionId =
    std::variant<ParitySubset, MonomialSubset, RandomTable, ConstPlus, ConstMinus, ExplicitTable>;

int arity(const FunctionId& f);

// Fast path without argument checks.
int eval_point(const FunctionId& f, Mask x);

// Checks |x| = n (DimensionMismatch) and that entries are +1 or -1.
int eval_function(const FunctionId& f, std::span<const double> x);

// True for parity and monomial ids; writes the subset when asked.
bool is_parity(const FunctionId& f, Mask* subset = nullptr);

std::string describe(const FunctionId& f);

ExplicitTable make_table(int n, std::vector<std::int8_t> values);

}  // namespace parlab
