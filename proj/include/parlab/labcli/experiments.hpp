#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parlab/common/stats.hpp"
#include "parlab/descent/descent.hpp"
#include "parlab/funcdist/aer.hpp"
#include "parlab/netcore/builders.hpp"
#include "parlab/sla/sla.hpp"

namespace parlab::lab {

// Grid-parity experiment: an MLP trained by per-sample SGD on a fixed set of
// random k x k black/white images labelled by the parity of black cells.
struct GridParitySpec {
  int side = 13;
  std::vector<int> hidden{128, 128, 128};
  Activation activation = Activation::ReLU;
  double gamma = 0.1;
  // Per-sample derivative clamp; plain SGD at this step size diverges
  // to a constant predictor on these nets.
  double overflow_B = 0.05;
  std::size_t epochs = 80;
  std::size_t train_count = 1000;
  std::size_t test_count = 1000;

  static GridParitySpec full() { return {}; }
  static GridParitySpec desk();
};

struct GridEpochRow {
  std::size_t epoch = 0;  // 0 is the untrained net
  double train_loss = 0.0;
  double train_err = 0.0;
  double test_err = 0.0;
};

std::vector<GridEpochRow> grid_parity_run(const GridParitySpec& spec, std::uint64_t seed);
// epoch,train_loss,train_err,test_err plus the digest line.
std::string grid_parity_csv(const std::vector<GridEpochRow>& rows);

// Population noisy GD against planted parities, with exact accuracy over
// all 2^n inputs.
struct NoisyGdSpec {
  int n = 12;
  std::vector<int> hidden{8};
  Activation activation = Activation::Tanh;
  double gamma = 0.1;
  double overflow_B = 1.0;
  std::size_t steps = 500;
  std::optional<double> sigma2;  // default 2^{-n/10}
  std::size_t parities = 50;
  LossKind loss = LossKind::SquaredError;
};

struct NoisyGdResult {
  std::vector<Mask> subsets;
  std::vector<double> accuracies;
  double mean_accuracy = 0.0;
  double ci95_halfwidth = 0.0;  // normal approximation over parities
  double sigma2 = 0.0;
  std::size_t edges = 0;
  double bound = 0.0;  // bound_gd(gamma, B, T, |E|, n, sigma2)
};

double default_sigma2(int n);
NoisyGdResult noisy_gd_experiment(const NoisyGdSpec& spec, std::uint64_t seed);

// SGD on the readout edges of the monomial gadget only. gamma <= 0 picks
// 0.5 / (units + 1).
NeuralNet train_monomial_readout(const MonomialNet& m, const FunctionId& target,
                                 std::size_t steps, double gamma, std::uint64_t seed);

struct PhaseSpec {
  int n = 10;
  std::vector<int> ks{1, 2, 3};
  std::size_t readout_steps = 4000;
  double readout_gamma = 0.0;  // auto
  std::size_t max_units = kDefaultMonomialBudget;
  std::vector<int> mlp_hidden{32};
  Activation mlp_activation = Activation::Tanh;
  std::size_t mlp_steps = 20000;
  double mlp_gamma = 0.05;
  std::size_t eval_trials = 20000;
};

struct PhaseRow {
  int k = 0;
  std::string method;  // "monomial_readout" or "mlp"
  Mask subset = 0;
  double pred = 0.0;  // 1 / C(n, k)
  AccuracyEstimate accuracy;
};

// Throws BudgetExceeded when C(n, k) exceeds max_units.
std::vector<PhaseRow> phase_run(const PhaseSpec& spec, std::uint64_t seed);
std::string phase_csv(const std::vector<PhaseRow>& rows);

struct AerRow {
  std::size_t index = 0;
  UndirectedGraph graph;
  std::optional<int> girth;
  bool passes = false;
};

std::vector<AerRow> aer_batch(int n, double m, int r, std::size_t count, std::uint64_t seed);

// %.17g, so values round-trip exactly.
std::string fmt(double v);

}  // namespace parlab::lab
