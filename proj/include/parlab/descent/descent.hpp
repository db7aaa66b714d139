#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parlab/common/rng.hpp"
#include "parlab/funcdist/source.hpp"
#include "parlab/netcore/net.hpp"

namespace parlab {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct NoiseSpec {
  enum class Kind { None, Gaussian, Uniform };
  Kind kind = Kind::None;
  double param = 0.0;  // variance for Gaussian, halfwidth for Uniform

  static NoiseSpec none() { return {}; }
  static NoiseSpec gaussian(double variance) { return {Kind::Gaussian, variance}; }
  static NoiseSpec uniform(double halfwidth) { return {Kind::Uniform, halfwidth}; }

  bool active() const { return kind != Kind::None && param > 0.0; }
  double draw(Rng& rng) const;
};

enum class CoordRule { TopK, RandomK };

// How a +-1 label becomes a regression target and how an output becomes a
// predicted label. PlusMinus: target y, predict sign(eval) (0 counts as +1).
// Bit: target b = (1 - y) / 2, predict b = [eval > 1/2].
enum class LabelCoding { PlusMinus, Bit };

double label_target(int y, LabelCoding coding);
int predict_label(double output, LabelCoding coding);

struct DescentConfig {
  double gamma = 0.1;
  double overflow_B = kUnbounded;      // derivative clamp
  double weight_clamp_B = kUnbounded;  // weight projection range
  std::size_t steps = 0;
  NoiseSpec noise;
  double init_perturb_variance = 0.0;
  std::optional<QuantizationSpec> quantization;
  std::optional<std::size_t> coord_budget;  // nullopt: every edge may move
  CoordRule coord_rule = CoordRule::TopK;
  std::vector<EdgeId> trainable;  // empty: every edge; others stay frozen
  LossKind loss = LossKind::SquaredError;
  LabelCoding coding = LabelCoding::PlusMinus;
  std::uint64_t seed = 0;
  bool keep_log = true;
};

void validate(const DescentConfig& config);

// Saturating clamp to [-B, B].
inline double clamp_psi(double x, double B) { return x > B ? B : (x < -B ? -B : x); }

struct ChangedEdge {
  EdgeId edge = 0;
  double w = 0.0;
  friend bool operator==(const ChangedEdge&, const ChangedEdge&) = default;
};

struct StepReport {
  std::size_t t = 0;
  std::vector<ChangedEdge> changed;
  double max_update = 0.0;  // largest |gamma * clipped derivative| before noise
  bool overflow_hit = false;
  int acc_bit = 0;  // the pre-update net labelled the step's sample correctly
};

struct RunLog {
  std::vector<StepReport> steps;
  // One JSON object per line: {t, changed:[{edge,w}], max_update, overflow_hit, acc_bit}.
  std::string to_jsonl() const;
};

struct RunResult {
  NeuralNet net;
  RunLog log;
};

// Finite population of (x, label, mass) triples for exact expectations.
struct Population {
  int n = 0;
  std::vector<Mask> x;
  std::vector<int> y;
  std::vector<double> p;
  std::size_t size() const { return x.size(); }
};

inline constexpr int kMaxPopulationArity = 20;

// Every input point labelled by f. Refuses n > 20 with TooLarge.
Population planted_population(const FunctionId& f, const InputDistribution& inputs);
// Every input point with both labels at half mass each.
Population null_population(const InputDistribution& inputs);
// Uniform mass on a finite sample list.
Population sample_population(int n, std::span<const LabeledSample> samples);

// Per-step knobs shared by the step functions.
struct StepParams {
  double gamma = 0.1;
  double overflow_B = kUnbounded;
  double weight_clamp_B = kUnbounded;
  std::optional<QuantizationSpec> quantization;
  LossKind loss = LossKind::SquaredError;
  LabelCoding coding = LabelCoding::PlusMinus;
};

StepParams step_params(const DescentConfig& config);

// w' = w - gamma E[Psi_B(dL/dw)] + delta, then weight projection and
// quantization when configured. An empty delta means zero noise.
NeuralNet gd_step(const NeuralNet& net, const Population& pop, const StepParams& params,
                  std::span<const double> delta = {}, StepReport* report = nullptr);

// Single-sample version of gd_step.
NeuralNet sgd_step(const NeuralNet& net, std::span<const double> x, int y,
                   const StepParams& params, std::span<const double> delta = {},
                   StepReport* report = nullptr);

// Stateful runner used by every algorithm below. Owns the weights and the
// seeded noise/selection streams; initial perturbation, projection and
// quantization are applied on construction.
class Trainer {
 public:
  Trainer(NeuralNet net, DescentConfig config);

  const NeuralNet& net() const { return net_; }
  NeuralNet release() { return std::move(net_); }
  const DescentConfig& config() const { return config_; }
  std::size_t steps_taken() const { return t_; }

  // One (coordinate-budgeted) SGD step on a single sample.
  StepReport step(std::span<const double> x, int y);
  StepReport step(const LabeledSample& z);
  // One population GD step; acc_bit reports population accuracy > 1/2.
  StepReport population_step(const Population& pop);

 private:
  void store(EdgeId e, double value, StepReport& report);
  std::vector<EdgeId> select(std::span<const double> grad);

  NeuralNet net_;
  DescentConfig config_;
  StepParams params_;
  Rng noise_rng_;
  Rng select_rng_;
  Workspace ws_;
  std::vector<double> grad_;
  std::vector<double> signs_;
  std::size_t t_ = 0;
};

RunResult gd_run(const NeuralNet& net, const Population& pop, const DescentConfig& config);
RunResult sgd_run(const NeuralNet& net, SampleSource& source, const DescentConfig& config);
RunResult cd_run(const NeuralNet& net, SampleSource& source, const DescentConfig& config);

// Rounds of a fixed training set in a per-epoch shuffled order (the
// pre-set training set variant). on_epoch runs after each pass.
using EpochCallback = std::function<void(std::size_t epoch, const NeuralNet& net)>;
NeuralNet sgd_epochs(const NeuralNet& net, std::span<const std::vector<double>> xs,
                     std::span<const int> ys, std::size_t epochs, const DescentConfig& config,
                     const EpochCallback& on_epoch = {});

}  // namespace parlab
