#pragma once

#include <optional>
#include <string>

#include "parlab/descent/descent.hpp"
#include "parlab/funcdist/distribution.hpp"
#include "parlab/funcdist/inputs.hpp"
#include "parlab/labcli/schema.hpp"
#include "parlab/netcore/builders.hpp"

namespace parlab::lab {

// {"kind": "parity_uniform" | "monomial_k" | "uniform_all" |
//  "constant_mixture", "n", "k"?, "p_const"?}
FunctionDistribution parse_distribution(Fields f);
// {"kind": "uniform" | "point_mass" | "finite_set", "n", "x"?, "points"?}
InputDistribution parse_inputs(Fields f);
// {"kind": "parity" | "monomial" | "const_plus" | "const_minus" |
//  "random_table", "n", "subset"? (1-based), "seed"?}
FunctionId parse_function(Fields f);

struct NetSpec {
  enum class Kind { Mlp, Monomial, File };
  Kind kind = Kind::Mlp;
  MlpSpec mlp;
  int n = 0;
  int k = 0;
  std::size_t max_units = kDefaultMonomialBudget;
  std::string path;
};

// {"kind": "mlp", "hidden", "activation", "output_activation", "init",
//  "bias"} | {"kind": "monomial", "k", "max_units"} | {"kind": "file",
//  "path"}. n is the input arity fixed by the experiment.
NetSpec parse_net(Fields f, int n);

struct BuiltNet {
  NeuralNet net;
  std::optional<MonomialNet> monomial;
};

// May throw BudgetExceeded (monomial gadget beyond max_units).
BuiltNet build_net(const NetSpec& spec, Rng& rng);

// Every DescentConfig field; absent clamps are unbounded.
DescentConfig parse_descent(Fields f);

}  // namespace parlab::lab
