#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "parlab/descent/descent.hpp"
#include "parlab/funcdist/distribution.hpp"
#include "parlab/funcdist/gf2.hpp"
#include "parlab/funcdist/source.hpp"
#include "parlab/netcore/net.hpp"

namespace parlab {

using Symbol = std::vector<std::int64_t>;

// A sequential learning algorithm over labeled samples. The state is kept
// inside the object but is always a function of (seed, past symbols), so
// update behaves as a pure map (z, history) -> symbol.
class Sla {
 public:
  virtual ~Sla() = default;

  virtual std::string name() const = 0;
  virtual void reset(std::uint64_t seed) = 0;
  virtual Symbol update(const LabeledSample& z) = 0;
  // Current +-1 guess for x; does not change state.
  virtual int predict(Mask x) const = 0;
  // The accuracy bit b carried by the latest symbol (0 before any update).
  virtual int decision_bit() const = 0;
  // log2 |W| for the declared alphabet.
  virtual double alphabet_bits() const = 0;
  virtual std::unique_ptr<Sla> clone() const = 0;
};

// Emits {0} forever; predicts +1.
class ConstantSla final : public Sla {
 public:
  std::string name() const override { return "constant"; }
  void reset(std::uint64_t) override {}
  Symbol update(const LabeledSample&) override { return {0}; }
  int predict(Mask) const override { return 1; }
  int decision_bit() const override { return 0; }
  double alphabet_bits() const override { return 0.0; }
  std::unique_ptr<Sla> clone() const override { return std::make_unique<ConstantSla>(*this); }
};

// Emits the label just seen; predicts it again. b = [last label is +1].
class EchoLabelSla final : public Sla {
 public:
  std::string name() const override { return "echo"; }
  void reset(std::uint64_t) override { last_ = 1; seen_ = false; }
  Symbol update(const LabeledSample& z) override;
  int predict(Mask) const override { return last_; }
  int decision_bit() const override { return seen_ && last_ == 1; }
  double alphabet_bits() const override { return 1.0; }
  std::unique_ptr<Sla> clone() const override { return std::make_unique<EchoLabelSla>(*this); }

 private:
  int last_ = 1;
  bool seen_ = false;
};

// Running count of +1 labels, for a declared horizon (alphabet 0..horizon).
// Predicts the majority label; b = [count > steps / 2].
class CountingOnesSla final : public Sla {
 public:
  explicit CountingOnesSla(std::size_t horizon);
  std::string name() const override { return "counting"; }
  void reset(std::uint64_t) override { count_ = steps_ = 0; }
  Symbol update(const LabeledSample& z) override;
  int predict(Mask) const override { return 2 * count_ >= steps_ ? 1 : -1; }
  int decision_bit() const override { return 2 * count_ > steps_; }
  double alphabet_bits() const override;
  std::unique_ptr<Sla> clone() const override { return std::make_unique<CountingOnesSla>(*this); }
  std::size_t count() const { return count_; }

 private:
  std::size_t horizon_;
  std::size_t count_ = 0;
  std::size_t steps_ = 0;
};

// GF(2) elimination with full memory: each symbol records the sample
// {x, label bit, b}, so the history determines the whole system. b reports
// whether the hypothesis before the update labelled z correctly (0 once the
// system is inconsistent).
class Gf2Sla final : public Sla {
 public:
  explicit Gf2Sla(int n);
  std::string name() const override { return "gf2"; }
  void reset(std::uint64_t) override;
  Symbol update(const LabeledSample& z) override;
  int predict(Mask x) const override;
  int decision_bit() const override { return bit_; }
  double alphabet_bits() const override;
  std::unique_ptr<Sla> clone() const override { return std::make_unique<Gf2Sla>(*this); }
  const Gf2System& system() const { return system_; }

 private:
  int n_;
  Gf2System system_;
  int bit_ = 0;
};

// Bounded-memory SGD as an SLA. Each symbol is the changed-variable list
// {edge_1, code_1, ..., edge_j, code_j} (j <= k, ascending edges, codes on
// the quantization lattice) followed by the accuracy bit from the step.
class SgdSla final : public Sla {
 public:
  SgdSla(NeuralNet net, DescentConfig config);
  std::string name() const override { return "sgd"; }
  void reset(std::uint64_t seed) override;
  Symbol update(const LabeledSample& z) override;
  int predict(Mask x) const override;
  int decision_bit() const override { return bit_; }
  // k (ceil(log2(|E| + 1)) + bits) + 1; the extra edge slot marks unused
  // entries, so lists shorter than k fit the same alphabet.
  double alphabet_bits() const override;
  std::unique_ptr<Sla> clone() const override;

  // Net after the trainer's initial projection and quantization.
  const NeuralNet& initial_net() const { return initial_; }
  const NeuralNet& net() const { return trainer_->net(); }
  const DescentConfig& config() const { return config_; }

 private:
  NeuralNet start_;
  DescentConfig config_;
  NeuralNet initial_;
  std::unique_ptr<Trainer> trainer_;
  int bit_ = 0;
};

// Throws UnboundedAlphabet without a quantization spec or a finite budget.
std::unique_ptr<SgdSla> sgd_as_sla(const NeuralNet& net, LossKind loss, DescentConfig config);

// Per-step symbol size for the bounded-memory SGD reduction.
double sgd_symbol_bits(std::size_t budget, std::size_t edges, int bits_per_weight);

// Applies changed-variable symbols to the initial net.
NeuralNet replay(const NeuralNet& initial, std::span<const Symbol> symbols);

struct TraceRecord {
  std::string sla;
  std::vector<LabeledSample> z;
  std::vector<Symbol> w;
  double alphabet_bits = 0.0;
  std::size_t size() const { return z.size(); }
  // {"t","x","y","w"} per line.
  std::string to_jsonl() const;
};

// Resets A with seed and feeds it T samples from source. T >= 1.
TraceRecord run_trace(Sla& sla, SampleSource& source, std::size_t steps, std::uint64_t seed);

enum class DecisionStatistic { FinalAccuracyBit, PredictionCount };
std::string statistic_name(DecisionStatistic s);
DecisionStatistic parse_statistic(const std::string& s);

struct DistinguishReport {
  std::string sla;
  DecisionStatistic statistic = DecisionStatistic::FinalAccuracyBit;
  std::size_t trials_per_hypothesis = 0;
  std::size_t steps = 0;
  double null_alpha = 0.0;
  double accuracy = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
  double ci95_halfwidth = 0.0;
  std::optional<double> pred;  // cross-predictability of the family, if known
  double c_const = 1.0;
  std::optional<double> theoretical_cap;
  double alphabet_bits = 0.0;
  std::size_t planted_declared = 0;  // planted trials declared planted
  std::size_t null_declared = 0;     // null trials declared planted
};

nlohmann::ordered_json to_json(const DistinguishReport& r);

struct DistinguishOptions {
  std::size_t steps = 0;
  std::size_t trials = 0;  // per hypothesis, >= 20
  DecisionStatistic statistic = DecisionStatistic::FinalAccuracyBit;
  std::uint64_t seed = 0;
  double c_const = 1.0;
  // Null false-positive level at which the threshold is calibrated.
  double null_alpha = 0.05;
};

// Balanced design: `trials` null and `trials` planted runs (fresh f per
// planted run, uniform inputs), plus `trials` held-out null runs that fix
// the decision threshold. Large statistic values are declared planted;
// ties at the threshold are broken by a seeded coin so the calibration
// false-positive rate is exactly null_alpha.
DistinguishReport distinguish_experiment(const Sla& prototype, const FunctionDistribution& dist,
                                         const DistinguishOptions& options);

struct AccuracyEstimate {
  double value = 0.0;
  double ci95_halfwidth = 0.0;
  std::size_t trials = 0;  // 0 when exhaustive
  bool exhaustive = false;
};

// P(predicted label = f(X)). Exhaustive for n <= 12, else `trials` draws.
AccuracyEstimate accuracy_eval(const NeuralNet& net, const FunctionId& f,
                               const InputDistribution& inputs, LabelCoding coding,
                               std::size_t trials = 10000, std::uint64_t seed = 0);

// min(1, 1/2 + gamma B T sqrt(m 2^-n / (2 pi sigma2))). T may be 0.
double bound_gd(double gamma, double B, double T, double m, int n, double sigma2);
// min(1, 1/2 + 2p + c T m^4 B^2 gamma^2 / n).
double bound_sgd(double T, double m, double B, double gamma, int n, double p, double c_const = 1.0);
// min(1, 1/2 + 2p + T (360 m^4 B^2 gamma^2 / (pi n) + 7 (e/4)^(n/4))).
double bound_sgd_elaborated(double T, double m, double B, double gamma, int n, double p);
// Provisional per-step form: min(1, 1/2 + gamma A Pred^(1/4) |E|^(1/2) S / sigma).
double bound_gd_general(double gamma, double A, double pred, double edges, double S, double sigma);

// Half-L1 distance between histograms of two point clouds on a common
// fixed-width grid (bin index floor(v / width) per axis). Coarse bins can
// only merge mass, so the estimate is biased low.
double tv_empirical(std::span<const std::vector<double>> a, std::span<const std::vector<double>> b,
                    std::span<const double> widths);

}  // namespace parlab
