#include "parlab/labcli/experiments.hpp"

#include <cmath>
#include <cstdio>

#include "parlab/common/digest.hpp"
#include "parlab/common/error.hpp"
#include "parlab/common/parallel.hpp"
#include "parlab/funcdist/grid.hpp"

namespace parlab::lab {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

GridParitySpec GridParitySpec::desk() {
  GridParitySpec s;
  s.side = 5;
  s.hidden = {64, 64, 64};
  return s;
}

namespace {

struct GridData {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
};

GridData grid_data(int side, std::size_t count, std::uint64_t seed) {
  GridData d;
  for (const GridImage& g : grid_dataset({side, count, seed})) {
    std::vector<double> x(g.cells.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 - 2.0 * g.cells[i];
    d.x.push_back(std::move(x));
    d.y.push_back(1 - 2 * g.label_bit);
  }
  return d;
}

}  // namespace

std::vector<GridEpochRow> grid_parity_run(const GridParitySpec& spec, std::uint64_t seed) {
  if (spec.side < 1) throw InvalidArgument("grid side must be positive");
  const GridData train = grid_data(spec.side, spec.train_count, derive_seed(seed, 10));
  const GridData test = grid_data(spec.side, spec.test_count, derive_seed(seed, 11));
  Rng init(derive_seed(seed, 12));
  const MlpSpec mlp{spec.side * spec.side, spec.hidden, spec.activation, Activation::Sigmoid,
                    InitScheme::UniformFanIn, true};
  const NeuralNet net = build_mlp(mlp, init);

  DescentConfig c;
  c.gamma = spec.gamma;
  c.overflow_B = spec.overflow_B;
  c.loss = LossKind::LogisticBCE;
  c.coding = LabelCoding::Bit;
  c.seed = seed;

  Workspace ws;
  const VertexId out = net.graph->output_vertex();
  auto measure = [&](std::size_t epoch, const NeuralNet& n) {
    GridEpochRow row;
    row.epoch = epoch;
    double loss = 0.0, err = 0.0;
    for (std::size_t i = 0; i < train.x.size(); ++i) {
      const double p = evaluate(n, train.x[i], ws);
      loss += loss_value(c.loss, n, ws.pre[out], p, label_target(train.y[i], c.coding));
      err += predict_label(p, c.coding) != train.y[i];
    }
    row.train_loss = train.x.empty() ? 0.0 : loss / static_cast<double>(train.x.size());
    row.train_err = train.x.empty() ? 0.0 : err / static_cast<double>(train.x.size());
    double terr = 0.0;
    for (std::size_t i = 0; i < test.x.size(); ++i) {
      terr += predict_label(evaluate(n, test.x[i], ws), c.coding) != test.y[i];
    }
    row.test_err = test.x.empty() ? 0.0 : terr / static_cast<double>(test.x.size());
    return row;
  };

  std::vector<GridEpochRow> rows{measure(0, net)};
  sgd_epochs(net, train.x, train.y, spec.epochs, c,
             [&](std::size_t epoch, const NeuralNet& n) { rows.push_back(measure(epoch + 1, n)); });
  return rows;
}

std::string grid_parity_csv(const std::vector<GridEpochRow>& rows) {
  std::string body = "epoch,train_loss,train_err,test_err\n";
  for (const auto& r : rows) {
    body += std::to_string(r.epoch) + "," + fmt(r.train_loss) + "," + fmt(r.train_err) + "," +
            fmt(r.test_err) + "\n";
  }
  return with_digest_line(std::move(body));
}

double default_sigma2(int n) { return std::exp2(-n / 10.0); }

NoisyGdResult noisy_gd_experiment(const NoisyGdSpec& spec, std::uint64_t seed) {
  if (spec.n < 1 || spec.n > kMaxExhaustiveInputs) {
    throw TooLarge("noisy GD experiment needs 1 <= n <= 12 for exact accuracy");
  }
  if (spec.parities == 0) throw InvalidArgument("at least one planted parity is required");
  NoisyGdResult res;
  res.sigma2 = spec.sigma2.value_or(default_sigma2(spec.n));
  if (!(res.sigma2 > 0.0)) throw InvalidArgument("noise variance must be positive");
  res.subsets.resize(spec.parities);
  res.accuracies.resize(spec.parities);
  const InputDistribution inputs = UniformInputs{spec.n};
  const MlpSpec mlp{spec.n, spec.hidden, spec.activation, Activation::Identity,
                    InitScheme::UniformFanIn, true};
  {
    Rng probe(0);
    res.edges = build_mlp(mlp, probe).edge_count();
  }
  parallel_for(spec.parities, [&](std::size_t i) {
    const std::uint64_t base = derive_seed(seed, i);
    const FunctionId f = draw_function(ParityUniform{spec.n}, derive_seed(base, 1));
    Mask s = 0;
    is_parity(f, &s);
    res.subsets[i] = s;
    Rng init(derive_seed(base, 2));
    const NeuralNet net = build_mlp(mlp, init);
    DescentConfig c;
    c.gamma = spec.gamma;
    c.overflow_B = spec.overflow_B;
    c.steps = spec.steps;
    c.noise = NoiseSpec::gaussian(res.sigma2);
    c.loss = spec.loss;
    c.seed = derive_seed(base, 3);
    c.keep_log = false;
    const NeuralNet trained = gd_run(net, planted_population(f, inputs), c).net;
    res.accuracies[i] = accuracy_eval(trained, f, inputs, c.coding).value;
  });
  res.mean_accuracy = mean(res.accuracies);
  res.ci95_halfwidth = normal_two_sided_quantile(0.95) *
                       std::sqrt(sample_variance(res.accuracies) / static_cast<double>(spec.parities));
  res.bound = bound_gd(spec.gamma, spec.overflow_B, static_cast<double>(spec.steps),
                       static_cast<double>(res.edges), spec.n, res.sigma2);
  return res;
}

NeuralNet train_monomial_readout(const MonomialNet& m, const FunctionId& target,
                                 std::size_t steps, double gamma, std::uint64_t seed) {
  const int n = static_cast<int>(m.net.graph->input_size());
  DescentConfig c;
  c.gamma = gamma > 0.0 ? gamma : 0.5 / static_cast<double>(m.subsets.size() + 1);
  c.steps = steps;
  c.keep_log = false;
  c.seed = derive_seed(seed, 1);
  c.trainable = m.readout_edges;
  c.trainable.push_back(m.readout_bias);
  auto src = SampleSource::planted(target, UniformInputs{n}, derive_seed(seed, 2));
  return sgd_run(m.net, src, c).net;
}

std::vector<PhaseRow> phase_run(const PhaseSpec& spec, std::uint64_t seed) {
  std::vector<PhaseRow> rows;
  const InputDistribution inputs = UniformInputs{spec.n};
  for (std::size_t i = 0; i < spec.ks.size(); ++i) {
    const int k = spec.ks[i];
    const MonomialK dist{spec.n, k};
    validate(FunctionDistribution{dist});
    const FunctionId f = draw_function(dist, derive_seed(seed, 100 + i));
    Mask s = 0;
    if (const auto* mono = std::get_if<MonomialSubset>(&f)) s = mono->s;
    const double pred = 1.0 / static_cast<double>(binomial_capped(spec.n, k, ~std::uint64_t{0}));

    const MonomialNet m = build_monomial_net(spec.n, k, spec.max_units);
    const NeuralNet readout =
        train_monomial_readout(m, f, spec.readout_steps, spec.readout_gamma, derive_seed(seed, 200 + i));
    rows.push_back({k, "monomial_readout", s, pred,
                    accuracy_eval(readout, f, inputs, LabelCoding::PlusMinus, spec.eval_trials,
                                  derive_seed(seed, 500 + i))});

    Rng init(derive_seed(seed, 300 + i));
    const NeuralNet mlp = build_mlp({spec.n, spec.mlp_hidden, spec.mlp_activation, Activation::Identity,
                                     InitScheme::UniformFanIn, true},
                                    init);
    DescentConfig c;
    c.gamma = spec.mlp_gamma;
    c.steps = spec.mlp_steps;
    c.keep_log = false;
    c.seed = derive_seed(seed, 400 + i);
    auto src = SampleSource::planted(f, inputs, derive_seed(seed, 600 + i));
    const NeuralNet trained = sgd_run(mlp, src, c).net;
    rows.push_back({k, "mlp", s, pred,
                    accuracy_eval(trained, f, inputs, LabelCoding::PlusMinus, spec.eval_trials,
                                  derive_seed(seed, 700 + i))});
  }
  return rows;
}

std::string phase_csv(const std::vector<PhaseRow>& rows) {
  std::string body = "k,method,subset,pred,accuracy,ci95,exhaustive\n";
  for (const auto& r : rows) {
    body += std::to_string(r.k) + "," + r.method + "," + std::to_string(r.subset) + "," + fmt(r.pred) +
            "," + fmt(r.accuracy.value) + "," + fmt(r.accuracy.ci95_halfwidth) + "," +
            (r.accuracy.exhaustive ? "1" : "0") + "\n";
  }
  return with_digest_line(std::move(body));
}

std::vector<AerRow> aer_batch(int n, double m, int r, std::size_t count, std::uint64_t seed) {
  std::vector<AerRow> rows(count);
  parallel_for(count, [&](std::size_t i) {
    rows[i].index = i;
    rows[i].graph = aer_sample(n, m, r, derive_seed(seed, i));
    rows[i].girth = girth(rows[i].graph);
    rows[i].passes = !rows[i].girth || *rows[i].girth >= r;
  });
  return rows;
}

}  // namespace parlab::lab
