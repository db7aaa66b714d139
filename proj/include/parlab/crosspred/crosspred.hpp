#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "parlab/funcdist/distribution.hpp"
#include "parlab/funcdist/inputs.hpp"
#include "parlab/netcore/activation.hpp"

namespace parlab {

enum class PredMethod { Exact, ClosedForm, MonteCarlo };

std::string_view method_name(PredMethod m);

struct PredEstimate {
  double value = 0.0;  // always in [0, 1]
  PredMethod method = PredMethod::Exact;
  std::size_t trials = 0;       // 0 for Exact and ClosedForm
  double ci95_halfwidth = 0.0;  // 0 for Exact and ClosedForm
  std::string inputs_digest;    // sha256 of the canonical problem description
};

// {method, value, trials, ci95, inputs_digest}
nlohmann::ordered_json to_json(const PredEstimate& e);

// E_{F,F'} (E_X F(X) F'(X))^2 by exhaustive sums, cross-checked against
// E_{X,X'} (E_F F(X) F(X'))^2 to 1e-12. Inputs must be enumerable (uniform
// needs n <= 12) and the function support at most 2^12 entries. UniformAll
// and ConstantMixture beyond enumerable size use their exact kernel
// E_F F(x) F(x') instead of the function sum.
PredEstimate pred_exact(const InputDistribution& inputs, const FunctionDistribution& dist);

// Known formulas: parity and uniform families give ||P_X||^2, degree-k
// monomials under uniform inputs 1/C(n,k), point-mass inputs 1. Otherwise
// nullopt.
std::optional<PredEstimate> pred_closed_form(const FunctionDistribution& dist,
                                             const InputDistribution& inputs);

// Per pair: draws F, F' and inner_x inputs, and uses the unbiased square
// m^2 - s^2/inner_x of the inner mean. Value is the pair average clamped to
// [0, 1]; CI is a percentile bootstrap over pairs.
PredEstimate pred_monte_carlo(const FunctionDistribution& dist, const InputDistribution& inputs,
                              std::size_t outer_pairs, std::size_t inner_x, std::uint64_t seed,
                              std::size_t bootstrap_resamples = 1000);

struct RandomNetArch {
  std::vector<int> hidden;  // layer widths
  Activation activation = Activation::Tanh;
};

// E_G (E_X h(X) sign(eval_G(X)))^2 over layered nets with N(0, 1/fan_in)
// weights. Inner expectation is exhaustive for n <= 12, else sampled with
// the same bias correction as pred_monte_carlo. CI is normal-approximation.
PredEstimate pred_vs_random_net(const FunctionId& h, const RandomNetArch& arch,
                                std::size_t trials, std::uint64_t seed,
                                std::size_t inner_x = 4096);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Table over B^{n+1} in the 0/1 convention, indexed x | (y << n).
struct NewPredCheck : InequalityCheck {
  double lhs_parseval = 0.0;  // 2^{-n-2} sum_x (f(x,1) - f(x,0))^2
};

// sum_s (E f(X,Y) - E f(X, p_s(X)))^2 <= E f(X,Y)^2 for uniform X and Y.
NewPredCheck check_newpred(std::span<const double> table, int n);

// W = g(X, F(X)) with g indexed x | (b << n), b = (1 - F(X)) / 2, values in
// [0, m). lhs = E_F ||P_{W|F} - P_W||_2^2, rhs = sqrt(Pred).
InequalityCheck check_bit_info_bound(std::span<const int> g, int n, int m,
                                     const FunctionDistribution& dist,
                                     const InputDistribution& inputs);

// |E_null g - avg_s E_{planted p_s} g| <= 2^{-n/2} sqrt(E_null g^2), g
// indexed x | (b << n) with uniform inputs.
InequalityCheck check_parity_average(std::span<const double> g, int n);

}  // namespace parlab
