#include "parlab/sla/sla.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "parlab/common/bits.hpp"
#include "parlab/common/error.hpp"
#include "parlab/common/parallel.hpp"
#include "parlab/common/stats.hpp"
#include "parlab/crosspred/crosspred.hpp"

namespace parlab {

Symbol EchoLabelSla::update(const LabeledSample& z) {
  last_ = z.y;
  seen_ = true;
  return {z.y};
}

CountingOnesSla::CountingOnesSla(std::size_t horizon) : horizon_(horizon) {
  if (horizon == 0) throw InvalidArgument("counting SLA horizon must be positive");
}

Symbol CountingOnesSla::update(const LabeledSample& z) {
  if (steps_ >= horizon_) throw InvalidArgument("counting SLA ran past its declared horizon");
  ++steps_;
  if (z.y == 1) ++count_;
  return {static_cast<std::int64_t>(count_)};
}

double CountingOnesSla::alphabet_bits() const {
  return std::log2(static_cast<double>(horizon_) + 1.0);
}

Gf2Sla::Gf2Sla(int n) : n_(n), system_(n) {}

void Gf2Sla::reset(std::uint64_t) {
  system_ = Gf2System(n_);
  bit_ = 0;
}

int Gf2Sla::predict(Mask x) const {
  if (system_.inconsistent()) return 1;
  return 1 - 2 * system_.predict_bit(x);
}

Symbol Gf2Sla::update(const LabeledSample& z) {
  bit_ = !system_.inconsistent() && predict(z.x) == z.y;
  system_.add(z.x, (1 - z.y) / 2);
  return {static_cast<std::int64_t>(z.x), (1 - z.y) / 2, bit_};
}

double Gf2Sla::alphabet_bits() const { return n_ + 2.0; }

SgdSla::SgdSla(NeuralNet net, DescentConfig config)
    : start_(std::move(net)), config_(std::move(config)) {
  if (!config_.quantization) throw UnboundedAlphabet("SGD as an SLA needs quantized weights");
  if (!config_.coord_budget) throw UnboundedAlphabet("SGD as an SLA needs a coordinate budget");
  validate(start_);
  validate(config_);
  reset(config_.seed);
}

void SgdSla::reset(std::uint64_t seed) {
  DescentConfig c = config_;
  c.seed = seed;
  c.keep_log = false;
  trainer_ = std::make_unique<Trainer>(start_, c);
  initial_ = trainer_->net();
  bit_ = 0;
}

Symbol SgdSla::update(const LabeledSample& z) {
  const StepReport r = trainer_->step(z);
  Symbol s;
  s.reserve(2 * r.changed.size() + 1);
  for (const ChangedEdge& c : r.changed) {
    s.push_back(static_cast<std::int64_t>(c.edge));
    s.push_back(quantize_code(c.w, *config_.quantization));
  }
  bit_ = r.acc_bit;
  s.push_back(bit_);
  return s;
}

int SgdSla::predict(Mask x) const {
  const auto signs = to_signs(x, static_cast<int>(start_.graph->input_size()));
  return predict_label(evaluate(net(), signs), config_.coding);
}

double SgdSla::alphabet_bits() const {
  return sgd_symbol_bits(*config_.coord_budget, start_.edge_count(),
                         config_.quantization->total_bits);
}

std::unique_ptr<Sla> SgdSla::clone() const {
  auto copy = std::make_unique<SgdSla>(start_, config_);
  copy->initial_ = initial_;
  copy->trainer_ = std::make_unique<Trainer>(*trainer_);
  copy->bit_ = bit_;
  return copy;
}

std::unique_ptr<SgdSla> sgd_as_sla(const NeuralNet& net, LossKind loss, DescentConfig config) {
  config.loss = loss;
  return std::make_unique<SgdSla>(net, std::move(config));
}

double sgd_symbol_bits(std::size_t budget, std::size_t edges, int bits_per_weight) {
  const double id_bits = std::ceil(std::log2(static_cast<double>(edges) + 1.0));
  return static_cast<double>(budget) * (id_bits + bits_per_weight) + 1.0;
}

NeuralNet replay(const NeuralNet& initial, std::span<const Symbol> symbols) {
  if (!initial.quantization) throw InvalidArgument("replay needs a quantized initial net");
  NeuralNet net = initial;
  for (const Symbol& s : symbols) {
    if (s.size() % 2 != 1) throw InvalidArgument("malformed changed-variable symbol");
    for (std::size_t i = 0; i + 1 < s.size(); i += 2) {
      if (s[i] < 0 || static_cast<std::size_t>(s[i]) >= net.edge_count()) {
        throw InvalidArgument("symbol names an unknown edge");
      }
      net.weights[static_cast<std::size_t>(s[i])] = dequantize(s[i + 1], *net.quantization);
    }
  }
  return net;
}

std::string TraceRecord::to_jsonl() const {
  std::string out;
  for (std::size_t i = 0; i < z.size(); ++i) {
    nlohmann::ordered_json j;
    j["t"] = i + 1;
    j["x"] = z[i].x;
    j["y"] = z[i].y;
    j["w"] = w[i];
    out += j.dump();
    out += '\n';
  }
  return out;
}

TraceRecord run_trace(Sla& sla, SampleSource& source, std::size_t steps, std::uint64_t seed) {
  if (steps == 0) throw InvalidArgument("trace length must be at least 1");
  TraceRecord trace;
  trace.sla = sla.name();
  trace.alphabet_bits = sla.alphabet_bits();
  trace.z.reserve(steps);
  trace.w.reserve(steps);
  sla.reset(seed);
  for (std::size_t t = 0; t < steps; ++t) {
    trace.z.push_back(source.next());
    trace.w.push_back(sla.update(trace.z.back()));
  }
  return trace;
}

std::string statistic_name(DecisionStatistic s) {
  return s == DecisionStatistic::FinalAccuracyBit ? "final_accuracy_bit" : "prediction_count";
}

DecisionStatistic parse_statistic(const std::string& s) {
  if (s == "final_accuracy_bit") return DecisionStatistic::FinalAccuracyBit;
  if (s == "prediction_count") return DecisionStatistic::PredictionCount;
  throw InvalidArgument("unknown decision statistic: " + s);
}

nlohmann::ordered_json to_json(const DistinguishReport& r) {
  nlohmann::ordered_json j;
  j["sla"] = r.sla;
  j["statistic"] = statistic_name(r.statistic);
  j["trials_per_hypothesis"] = r.trials_per_hypothesis;
  j["steps"] = r.steps;
  j["null_alpha"] = r.null_alpha;
  j["accuracy"] = r.accuracy;
  j["ci95"] = {r.ci_lo, r.ci_hi};
  j["ci95_halfwidth"] = r.ci95_halfwidth;
  j["planted_declared"] = r.planted_declared;
  j["null_declared"] = r.null_declared;
  j["alphabet_bits"] = r.alphabet_bits;
  j["pred"] = r.pred ? nlohmann::ordered_json(*r.pred) : nlohmann::ordered_json();
  j["c_const"] = r.c_const;
  j["theoretical_cap"] =
      r.theoretical_cap ? nlohmann::ordered_json(*r.theoretical_cap) : nlohmann::ordered_json();
  return j;
}

namespace {

enum RunKind : std::uint64_t { kCalibration = 1, kNull = 2, kPlanted = 3 };

double run_statistic(Sla& sla, SampleSource& source, const DistinguishOptions& o,
                     std::uint64_t seed) {
  sla.reset(seed);
  if (o.statistic == DecisionStatistic::FinalAccuracyBit) {
    for (std::size_t t = 0; t < o.steps; ++t) sla.update(source.next());
    return sla.decision_bit();
  }
  const std::size_t train = o.steps / 2;
  for (std::size_t t = 0; t < train; ++t) sla.update(source.next());
  std::size_t correct = 0;
  for (std::size_t t = train; t < o.steps; ++t) {
    const LabeledSample z = source.next();
    correct += sla.predict(z.x) == z.y;
  }
  return static_cast<double>(correct);
}

std::optional<double> family_pred(const FunctionDistribution& dist) {
  const int n = arity(dist);
  if (auto c = pred_closed_form(dist, UniformInputs{n})) return c->value;
  if (n > kMaxExhaustiveInputs) return std::nullopt;
  try {
    return pred_exact(UniformInputs{n}, dist).value;
  } catch (const TooLarge&) {
    return std::nullopt;
  }
}

}  // namespace

DistinguishReport distinguish_experiment(const Sla& prototype, const FunctionDistribution& dist,
                                         const DistinguishOptions& o) {
  validate(dist);
  if (o.trials < 20) throw InvalidArgument("distinguishing needs at least 20 trials per hypothesis");
  if (o.statistic == DecisionStatistic::FinalAccuracyBit && o.steps < 1) {
    throw InvalidArgument("distinguishing needs at least one step");
  }
  if (o.statistic == DecisionStatistic::PredictionCount && o.steps < 2) {
    throw InvalidArgument("the prediction count needs at least two steps");
  }
  if (!(o.null_alpha >= 0.0 && o.null_alpha <= 1.0)) {
    throw InvalidArgument("null_alpha must lie in [0, 1]");
  }
  const int n = arity(dist);
  const InputDistribution inputs = UniformInputs{n};

  // Runs 0..trials-1 calibrate, then null, then planted.
  const std::size_t runs = 3 * o.trials;
  std::vector<double> stat(runs);
  parallel_for(
      runs,
      [&](std::size_t r) {
        const std::uint64_t kind = kCalibration + r / o.trials;
        const std::uint64_t base = derive_seed(derive_seed(o.seed, kind), r % o.trials);
        SampleSource source =
            kind == kPlanted
                ? SampleSource::planted(draw_function(dist, derive_seed(base, 3)), inputs,
                                        derive_seed(base, 2))
                : SampleSource::null(inputs, derive_seed(base, 2));
        auto sla = prototype.clone();
        stat[r] = run_statistic(*sla, source, o, derive_seed(base, 1));
      },
      lab_threads());

  // Smallest calibration value tau with P(S > tau) <= alpha; the boundary
  // mass at tau is declared planted with probability q.
  std::vector<double> calib(stat.begin(), stat.begin() + static_cast<long>(o.trials));
  std::sort(calib.begin(), calib.end());
  const double total = static_cast<double>(o.trials);
  double tau = calib.front();
  std::size_t above = 0;
  for (std::size_t i = calib.size(); i > 0;) {
    std::size_t j = i - 1;
    while (j > 0 && calib[j - 1] == calib[i - 1]) --j;
    if (static_cast<double>(above + i - j) / total > o.null_alpha) {
      tau = calib[i - 1];
      break;
    }
    above += i - j;
    i = j;
  }
  const auto at_tau = static_cast<std::size_t>(std::count(calib.begin(), calib.end(), tau));
  const double frac_above =
      static_cast<double>(std::count_if(calib.begin(), calib.end(), [&](double v) { return v > tau; })) /
      total;
  const double q =
      std::clamp((o.null_alpha - frac_above) / (static_cast<double>(at_tau) / total), 0.0, 1.0);

  DistinguishReport rep;
  rep.sla = prototype.name();
  rep.statistic = o.statistic;
  rep.trials_per_hypothesis = o.trials;
  rep.steps = o.steps;
  rep.null_alpha = o.null_alpha;
  rep.alphabet_bits = prototype.alphabet_bits();
  rep.c_const = o.c_const;
  std::size_t correct = 0;
  for (std::size_t r = o.trials; r < runs; ++r) {
    const bool planted = r >= 2 * o.trials;
    bool declare = stat[r] > tau;
    if (stat[r] == tau) {
      Rng coin(derive_seed(derive_seed(o.seed, 4), r));
      declare = coin.uniform() < q;
    }
    if (planted) {
      rep.planted_declared += declare;
      correct += declare;
    } else {
      rep.null_declared += declare;
      correct += !declare;
    }
  }
  const std::size_t decided = 2 * o.trials;
  rep.accuracy = static_cast<double>(correct) / static_cast<double>(decided);
  const Interval ci = clopper_pearson(correct, decided);
  rep.ci_lo = ci.lo;
  rep.ci_hi = ci.hi;
  rep.ci95_halfwidth = ci.halfwidth();
  rep.pred = family_pred(dist);
  if (rep.pred) rep.theoretical_cap = std::min(1.0, 0.5 + o.c_const * std::pow(*rep.pred, 1.0 / 24));
  return rep;
}

AccuracyEstimate accuracy_eval(const NeuralNet& net, const FunctionId& f,
                               const InputDistribution& inputs, LabelCoding coding,
                               std::size_t trials, std::uint64_t seed) {
  validate(inputs);
  const int n = arity(inputs);
  if (arity(f) != n || net.graph->input_size() != static_cast<std::size_t>(n)) {
    throw DimensionMismatch("net, function and inputs disagree on arity");
  }
  Workspace ws;
  std::vector<double> signs(static_cast<std::size_t>(n));
  auto correct_at = [&](Mask x) {
    to_signs(x, n, signs.data());
    return predict_label(evaluate(net, signs, ws), coding) == eval_point(f, x);
  };
  AccuracyEstimate est;
  if (n <= kMaxExhaustiveInputs) {
    est.exhaustive = true;
    for (const WeightedPoint& wp : enumerate_inputs(inputs)) {
      if (correct_at(wp.x)) est.value += wp.p;
    }
    est.value = std::clamp(est.value, 0.0, 1.0);
    return est;
  }
  if (trials == 0) throw InvalidArgument("sampled accuracy needs at least one trial");
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) hits += correct_at(draw_input(inputs, rng));
  est.trials = trials;
  est.value = static_cast<double>(hits) / static_cast<double>(trials);
  est.ci95_halfwidth = clopper_pearson(hits, trials).halfwidth();
  return est;
}

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive");
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(std::string(what) + " must be non-negative");
  }
}

}  // namespace

double bound_gd(double gamma, double B, double T, double m, int n, double sigma2) {
  require_positive(gamma, "gamma");
  require_positive(B, "B");
  require_nonnegative(T, "T");
  require_positive(m, "m");
  require_positive(n, "n");
  require_positive(sigma2, "sigma^2");
  const double root = std::sqrt(m * std::exp2(-n) / (2.0 * std::numbers::pi * sigma2));
  return std::min(1.0, 0.5 + gamma * B * T * root);
}

double bound_sgd(double T, double m, double B, double gamma, int n, double p, double c_const) {
  require_nonnegative(T, "T");
  require_nonnegative(m, "m");
  require_nonnegative(B, "B");
  require_nonnegative(gamma, "gamma");
  require_positive(n, "n");
  require_nonnegative(p, "p");
  require_nonnegative(c_const, "c_const");
  return std::min(1.0, 0.5 + 2.0 * p + c_const * T * std::pow(m, 4) * B * B * gamma * gamma / n);
}

double bound_sgd_elaborated(double T, double m, double B, double gamma, int n, double p) {
  require_nonnegative(T, "T");
  require_nonnegative(m, "m");
  require_nonnegative(B, "B");
  require_nonnegative(gamma, "gamma");
  require_positive(n, "n");
  require_nonnegative(p, "p");
  const double per_step = 360.0 * std::pow(m, 4) * B * B * gamma * gamma / (std::numbers::pi * n) +
                          7.0 * std::pow(std::numbers::e / 4.0, n / 4.0);
  return std::min(1.0, 0.5 + 2.0 * p + T * per_step);
}

double bound_gd_general(double gamma, double A, double pred, double edges, double S, double sigma) {
  require_nonnegative(gamma, "gamma");
  require_nonnegative(A, "A");
  require_nonnegative(pred, "pred");
  require_nonnegative(edges, "edge count");
  require_nonnegative(S, "S");
  require_positive(sigma, "sigma");
  return std::min(1.0, 0.5 + gamma * A * std::pow(pred, 0.25) * std::sqrt(edges) * S / sigma);
}

double tv_empirical(std::span<const std::vector<double>> a, std::span<const std::vector<double>> b,
                    std::span<const double> widths) {
  if (a.empty() || b.empty()) throw InvalidArgument("both sample sets must be non-empty");
  const std::size_t dim = a.front().size();
  auto check = [&](std::span<const std::vector<double>> xs) {
    for (const auto& v : xs) {
      if (v.size() != dim) throw DimensionMismatch("samples differ in dimension");
    }
  };
  check(a);
  check(b);
  if (widths.size() != 1 && widths.size() != dim) {
    throw DimensionMismatch("bin widths must be one value or one per axis");
  }
  for (double w : widths) require_positive(w, "bin width");

  std::map<std::vector<std::int64_t>, std::pair<double, double>> bins;
  std::vector<std::int64_t> key(dim);
  auto add = [&](std::span<const std::vector<double>> xs, bool first) {
    const double mass = 1.0 / static_cast<double>(xs.size());
    for (const auto& v : xs) {
      for (std::size_t i = 0; i < dim; ++i) {
        const double w = widths.size() == 1 ? widths[0] : widths[i];
        key[i] = static_cast<std::int64_t>(std::floor(v[i] / w));
      }
      auto& slot = bins[key];
      (first ? slot.first : slot.second) += mass;
    }
  };
  add(a, true);
  add(b, false);
  double l1 = 0.0;
  for (const auto& [k, m] : bins) l1 += std::abs(m.first - m.second);
  return std::clamp(0.5 * l1, 0.0, 1.0);
}

}  // namespace parlab
