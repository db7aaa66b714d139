#include "parlab/descent/descent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "parlab/common/error.hpp"

namespace parlab {

namespace {

enum StreamTag : std::uint64_t { kNoise = 1, kSelect = 2, kInit = 3, kShuffle = 4 };

// Adds the clipped per-sample derivatives of the whole population, weighted
// by mass, into `acc`. Returns whether any entry hit the overflow range.
bool population_gradient(const NeuralNet& net, const Population& pop, const StepParams& params,
                         Workspace& ws, std::vector<double>& grad, std::vector<double>& signs,
                         std::vector<double>& acc, double* accuracy) {
  if (pop.size() == 0) throw EmptyPopulation("population is empty");
  if (pop.n != static_cast<int>(net.input_size())) {
    throw DimensionMismatch("population arity differs from the net input size");
  }
  const std::size_t edges = net.edge_count();
  grad.resize(edges);
  signs.resize(static_cast<std::size_t>(pop.n));
  acc.assign(edges, 0.0);
  bool hit = false;
  double correct = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    to_signs(pop.x[i], pop.n, signs.data());
    const auto sg = sample_gradient(net, signs, label_target(pop.y[i], params.coding), params.loss,
                                    ws, grad);
    if (predict_label(sg.output, params.coding) == pop.y[i]) correct += pop.p[i];
    const double p = pop.p[i];
    for (std::size_t e = 0; e < edges; ++e) {
      double g = grad[e];
      if (std::abs(g) > params.overflow_B) {
        hit = true;
        g = clamp_psi(g, params.overflow_B);
      }
      acc[e] += p * g;
    }
  }
  if (accuracy) *accuracy = correct;
  return hit;
}

double project(double w, const StepParams& params) {
  if (std::isfinite(params.weight_clamp_B)) w = clamp_psi(w, params.weight_clamp_B);
  if (params.quantization) w = quantize(w, *params.quantization);
  return w;
}

NeuralNet apply_update(const NeuralNet& net, std::span<const double> direction,
                       const StepParams& params, std::span<const double> delta,
                       StepReport* report) {
  if (!delta.empty() && delta.size() != net.edge_count()) {
    throw DimensionMismatch("noise vector does not match the edge set");
  }
  NeuralNet out = net;
  double max_update = 0.0;
  for (std::size_t e = 0; e < out.weights.size(); ++e) {
    const double u = -params.gamma * direction[e];
    max_update = std::max(max_update, std::abs(u));
    const double w = project(out.weights[e] + u + (delta.empty() ? 0.0 : delta[e]), params);
    if (report && w != out.weights[e]) report->changed.push_back({static_cast<EdgeId>(e), w});
    out.weights[e] = w;
  }
  if (report) report->max_update = max_update;
  return out;
}

}  // namespace

double NoiseSpec::draw(Rng& rng) const {
  switch (kind) {
    case Kind::None:
      return 0.0;
    case Kind::Gaussian:
      return std::sqrt(param) * rng.normal();
    case Kind::Uniform:
      return rng.uniform(-param, param);
  }
  return 0.0;
}

double label_target(int y, LabelCoding coding) {
  return coding == LabelCoding::PlusMinus ? static_cast<double>(y) : 0.5 * (1 - y);
}

int predict_label(double output, LabelCoding coding) {
  if (coding == LabelCoding::PlusMinus) return output >= 0.0 ? 1 : -1;
  return output > 0.5 ? -1 : 1;
}

void validate(const DescentConfig& c) {
  if (!(c.gamma >= 0.0) || !std::isfinite(c.gamma)) {
    throw InvalidArgument("gamma must be finite and non-negative");
  }
  if (!(c.overflow_B > 0.0)) throw InvalidArgument("overflow_B must be positive");
  if (!(c.weight_clamp_B > 0.0)) throw InvalidArgument("weight_clamp_B must be positive");
  if (!(c.noise.param >= 0.0) || !std::isfinite(c.noise.param)) {
    throw InvalidArgument("noise parameter must be finite and non-negative");
  }
  if (!(c.init_perturb_variance >= 0.0) || !std::isfinite(c.init_perturb_variance)) {
    throw InvalidArgument("init_perturb_variance must be finite and non-negative");
  }
  if (c.quantization) validate(*c.quantization);
  if (c.coord_budget && *c.coord_budget == 0) throw InvalidArgument("coord_budget must be >= 1");
}

std::string RunLog::to_jsonl() const {
  std::string out;
  for (const auto& s : steps) {
    nlohmann::ordered_json j;
    j["t"] = s.t;
    auto changed = nlohmann::ordered_json::array();
    for (const auto& c : s.changed) changed.push_back({{"edge", c.edge}, {"w", c.w}});
    j["changed"] = std::move(changed);
    j["max_update"] = s.max_update;
    j["overflow_hit"] = s.overflow_hit;
    j["acc_bit"] = s.acc_bit;
    out += j.dump();
    out += '\n';
  }
  return out;
}

Population planted_population(const FunctionId& f, const InputDistribution& inputs) {
  if (arity(f) != arity(inputs)) throw DimensionMismatch("function and inputs differ in arity");
  Population pop;
  pop.n = arity(inputs);
  for (const auto& wp : enumerate_inputs(inputs, kMaxPopulationArity)) {
    pop.x.push_back(wp.x);
    pop.y.push_back(eval_point(f, wp.x));
    pop.p.push_back(wp.p);
  }
  return pop;
}

Population null_population(const InputDistribution& inputs) {
  Population pop;
  pop.n = arity(inputs);
  for (const auto& wp : enumerate_inputs(inputs, kMaxPopulationArity)) {
    for (int y : {1, -1}) {
      pop.x.push_back(wp.x);
      pop.y.push_back(y);
      pop.p.push_back(0.5 * wp.p);
    }
  }
  return pop;
}

Population sample_population(int n, std::span<const LabeledSample> samples) {
  Population pop;
  pop.n = n;
  for (const auto& z : samples) {
    if (z.x & ~low_mask(n)) throw DimensionMismatch("sample point outside the cube");
    pop.x.push_back(z.x);
    pop.y.push_back(z.y);
    pop.p.push_back(1.0 / static_cast<double>(samples.size()));
  }
  return pop;
}

StepParams step_params(const DescentConfig& c) {
  return {c.gamma, c.overflow_B, c.weight_clamp_B, c.quantization, c.loss, c.coding};
}

NeuralNet gd_step(const NeuralNet& net, const Population& pop, const StepParams& params,
                  std::span<const double> delta, StepReport* report) {
  validate(net);
  Workspace ws;
  std::vector<double> grad, signs, acc;
  double accuracy = 0.0;
  const bool hit = population_gradient(net, pop, params, ws, grad, signs, acc, &accuracy);
  if (report) {
    report->overflow_hit = hit;
    report->acc_bit = accuracy > 0.5;
  }
  return apply_update(net, acc, params, delta, report);
}

NeuralNet sgd_step(const NeuralNet& net, std::span<const double> x, int y,
                   const StepParams& params, std::span<const double> delta,
                   StepReport* report) {
  validate(net);
  Workspace ws;
  std::vector<double> grad(net.edge_count());
  const auto sg = sample_gradient(net, x, label_target(y, params.coding), params.loss, ws, grad);
  bool hit = false;
  for (double& g : grad) {
    if (std::abs(g) > params.overflow_B) {
      hit = true;
      g = clamp_psi(g, params.overflow_B);
    }
  }
  if (report) {
    report->overflow_hit = hit;
    report->acc_bit = predict_label(sg.output, params.coding) == y;
  }
  return apply_update(net, grad, params, delta, report);
}

Trainer::Trainer(NeuralNet net, DescentConfig config)
    : net_(std::move(net)),
      config_(std::move(config)),
      params_(step_params(config_)),
      noise_rng_(derive_seed(config_.seed, kNoise)),
      select_rng_(derive_seed(config_.seed, kSelect)) {
  validate(net_);
  validate(config_);
  if (config_.quantization) net_.quantization = config_.quantization;
  Rng init_rng(derive_seed(config_.seed, kInit));
  const double sd = std::sqrt(config_.init_perturb_variance);
  for (double& w : net_.weights) {
    if (sd > 0.0) w += sd * init_rng.normal();
    w = project(w, params_);
  }
  grad_.resize(net_.edge_count());
  auto& t = config_.trainable;
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  if (!t.empty() && t.back() >= net_.edge_count()) {
    throw InvalidArgument("trainable edge out of range");
  }
}

std::vector<EdgeId> Trainer::select(std::span<const double> grad) {
  std::vector<EdgeId> ids = config_.trainable;
  if (ids.empty()) {
    ids.resize(grad.size());
    std::iota(ids.begin(), ids.end(), EdgeId{0});
  }
  const std::size_t edges = ids.size();
  if (!config_.coord_budget || *config_.coord_budget >= edges) return ids;
  const std::size_t k = *config_.coord_budget;
  if (config_.coord_rule == CoordRule::TopK) {
    std::partial_sort(ids.begin(), ids.begin() + static_cast<long>(k), ids.end(),
                      [&](EdgeId a, EdgeId b) {
                        const double ga = std::abs(grad[a]), gb = std::abs(grad[b]);
                        return ga != gb ? ga > gb : a < b;
                      });
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(ids[i], ids[i + select_rng_.below(edges - i)]);
    }
  }
  ids.resize(k);
  std::sort(ids.begin(), ids.end());
  return ids;
}

void Trainer::store(EdgeId e, double value, StepReport& report) {
  const double w = project(value, params_);
  if (w != net_.weights[e]) {
    net_.weights[e] = w;
    report.changed.push_back({e, w});
  }
}

StepReport Trainer::step(std::span<const double> x, int y) {
  StepReport report;
  report.t = t_++;
  const auto sg =
      sample_gradient(net_, x, label_target(y, params_.coding), params_.loss, ws_, grad_);
  report.acc_bit = predict_label(sg.output, params_.coding) == y;
  double max_g = 0.0;
  for (double& g : grad_) {
    if (std::abs(g) > params_.overflow_B) {
      report.overflow_hit = true;
      g = clamp_psi(g, params_.overflow_B);
    }
    max_g = std::max(max_g, std::abs(g));
  }
  report.max_update = params_.gamma * max_g;
  const bool noisy = config_.noise.active();
  for (EdgeId e : select(grad_)) {
    double v = net_.weights[e] - params_.gamma * grad_[e];
    if (noisy) v += config_.noise.draw(noise_rng_);
    store(e, v, report);
  }
  return report;
}

StepReport Trainer::step(const LabeledSample& z) {
  signs_.resize(net_.input_size());
  to_signs(z.x, static_cast<int>(signs_.size()), signs_.data());
  return step(signs_, z.y);
}

StepReport Trainer::population_step(const Population& pop) {
  StepReport report;
  report.t = t_++;
  std::vector<double> acc;
  double accuracy = 0.0;
  report.overflow_hit =
      population_gradient(net_, pop, params_, ws_, grad_, signs_, acc, &accuracy);
  report.acc_bit = accuracy > 0.5;
  double max_g = 0.0;
  for (double g : acc) max_g = std::max(max_g, std::abs(g));
  report.max_update = params_.gamma * max_g;
  const bool noisy = config_.noise.active();
  for (EdgeId e : select(acc)) {
    double v = net_.weights[e] - params_.gamma * acc[e];
    if (noisy) v += config_.noise.draw(noise_rng_);
    store(e, v, report);
  }
  return report;
}

RunResult gd_run(const NeuralNet& net, const Population& pop, const DescentConfig& config) {
  if (config.coord_budget) throw InvalidArgument("gd_run does not take a coordinate budget");
  Trainer trainer(net, config);
  RunLog log;
  for (std::size_t t = 0; t < config.steps; ++t) {
    auto r = trainer.population_step(pop);
    if (config.keep_log) log.steps.push_back(std::move(r));
  }
  return {trainer.release(), std::move(log)};
}

namespace {

RunResult run_samples(const NeuralNet& net, SampleSource& source, const DescentConfig& config) {
  Trainer trainer(net, config);
  RunLog log;
  for (std::size_t t = 0; t < config.steps; ++t) {
    auto r = trainer.step(source.next());
    if (config.keep_log) log.steps.push_back(std::move(r));
  }
  return {trainer.release(), std::move(log)};
}

}  // namespace

RunResult sgd_run(const NeuralNet& net, SampleSource& source, const DescentConfig& config) {
  if (config.coord_budget) throw InvalidArgument("sgd_run does not take a coordinate budget");
  return run_samples(net, source, config);
}

RunResult cd_run(const NeuralNet& net, SampleSource& source, const DescentConfig& config) {
  if (!config.coord_budget) throw InvalidArgument("cd_run needs a finite coordinate budget");
  return run_samples(net, source, config);
}

NeuralNet sgd_epochs(const NeuralNet& net, std::span<const std::vector<double>> xs,
                     std::span<const int> ys, std::size_t epochs, const DescentConfig& config,
                     const EpochCallback& on_epoch) {
  if (xs.size() != ys.size()) throw DimensionMismatch("inputs and labels differ in count");
  if (xs.empty()) throw EmptyPopulation("training set is empty");
  Trainer trainer(net, config);
  Rng shuffle_rng(derive_seed(config.seed, kShuffle));
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    shuffle_rng.shuffle(order.begin(), order.end());
    for (std::size_t i : order) trainer.step(xs[i], ys[i]);
    if (on_epoch) on_epoch(epoch, trainer.net());
  }
  return trainer.release();
}

}  // namespace parlab
