#include <algorithm>
#include <set>

#include "parlab/common/digest.hpp"
#include "parlab/common/parallel.hpp"
#include "parlab/common/error.hpp"
#include "parlab/crosspred/crosspred.hpp"
#include "parlab/labcli/experiments.hpp"
#include "parlab/labcli/lab.hpp"
#include "parlab/labcli/specs.hpp"
#include "parlab/netcore/serialize.hpp"
#include "parlab/sla/sla.hpp"

namespace parlab::lab {

using ojson = nlohmann::ordered_json;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"xpred", "train",  "distinguish", "gridparity",
                                              "phase", "bounds", "gen-aer"};
  return names;
}

namespace {

std::string json_file(const ojson& j) { return j.dump(2) + "\n"; }

Activation activation_opt(Fields& f, const std::string& key, Activation fallback) {
  const auto name = f.maybe<std::string>(key);
  if (!name) return fallback;
  try {
    return parse_activation(*name);
  } catch (const InvalidArgument& e) {
    throw SchemaError(f.path() + "." + key + ": " + e.what());
  }
}

InputDistribution inputs_or_uniform(Fields& p, int n) {
  if (auto in = p.maybe_child("inputs")) {
    InputDistribution d = parse_inputs(*in);
    if (arity(d) != n) throw SchemaError("params.inputs: arity does not match");
    return d;
  }
  return UniformInputs{n};
}

// ---- xpred

Plan plan_xpred(Fields& p, std::uint64_t seed) {
  const auto mode = p.opt<std::string>("mode", "family");
  Plan plan;
  if (mode == "random_net") {
    const FunctionId h = parse_function(p.child("target"));
    auto arch_f = p.child("random_net");
    RandomNetArch arch;
    arch.hidden = arch_f.req<std::vector<int>>("hidden");
    arch.activation = activation_opt(arch_f, "activation", Activation::Tanh);
    arch_f.done();
    const auto trials = p.opt<std::size_t>("trials", 1000);
    const auto inner = p.opt<std::size_t>("inner_x", 4096);
    if (trials < 2) p.fail("trials", "must be at least 2");
    p.done();
    plan.flags = {{"xpred_mode", "random_net"}, {"random_net_init", "gaussian_fan_in"}};
    plan.run = [=] {
      ojson j;
      j["target"] = describe(h);
      j.update(to_json(pred_vs_random_net(h, arch, trials, seed, inner)));
      return std::vector<OutputFile>{{"xpred.json", json_file(j)}};
    };
    return plan;
  }
  if (mode != "family") p.fail("mode", "must be family or random_net");
  const FunctionDistribution dist = parse_distribution(p.child("dist"));
  const int n = arity(dist);
  const InputDistribution inputs = inputs_or_uniform(p, n);
  const auto method = p.opt<std::string>("method", "auto");
  const auto pairs = p.opt<std::size_t>("outer_pairs", 20000);
  const auto inner = p.opt<std::size_t>("inner_x", 1000);
  const auto resamples = p.opt<std::size_t>("bootstrap_resamples", 1000);
  p.done();
  static const std::set<std::string> methods{"auto", "exact", "closed_form", "monte_carlo"};
  if (!methods.count(method)) throw SchemaError("params.method: must be auto, exact, closed_form or monte_carlo");
  if (method == "closed_form" && !pred_closed_form(dist, inputs)) {
    throw SchemaError("params.method: no closed form for this distribution and input law");
  }
  if (method == "monte_carlo" && (pairs < 2 || inner < 2)) {
    throw SchemaError("params: outer_pairs and inner_x must be at least 2");
  }
  plan.flags = {{"xpred_mode", "family"}, {"method", method}};
  plan.run = [=] {
    PredEstimate e;
    if (method == "closed_form") {
      e = *pred_closed_form(dist, inputs);
    } else if (method == "exact") {
      e = pred_exact(inputs, dist);
    } else if (method == "monte_carlo") {
      e = pred_monte_carlo(dist, inputs, pairs, inner, seed, resamples);
    } else if (auto c = pred_closed_form(dist, inputs)) {
      e = *c;
    } else {
      try {
        e = pred_exact(inputs, dist);
      } catch (const TooLarge&) {
        e = pred_monte_carlo(dist, inputs, pairs, inner, seed, resamples);
      }
    }
    ojson j;
    j["dist"] = describe(dist);
    j["inputs"] = describe(inputs);
    j.update(to_json(e));
    return std::vector<OutputFile>{{"xpred.json", json_file(j)}};
  };
  return plan;
}

// ---- train

Plan plan_train(Fields& p, std::uint64_t seed) {
  std::optional<FunctionId> target;
  std::optional<FunctionDistribution> dist;
  if (auto t = p.maybe_child("target")) target = parse_function(*t);
  if (auto d = p.maybe_child("dist")) dist = parse_distribution(*d);
  if (target.has_value() == dist.has_value()) throw SchemaError("params: give exactly one of target or dist");
  const FunctionId f = target ? *target : draw_function(*dist, derive_seed(seed, 1));
  const int n = arity(f);
  const InputDistribution inputs = inputs_or_uniform(p, n);
  const NetSpec net_spec = parse_net(p.child("net"), n);
  const auto algorithm = p.opt<std::string>("algorithm", "sgd");
  DescentConfig c = parse_descent(p.child("descent"));
  c.seed = derive_seed(seed, 4);
  const bool readout_only = p.opt<bool>("readout_only", false);
  c.keep_log = p.opt<bool>("log", true);
  const auto eval_trials = p.opt<std::size_t>("eval_trials", 10000);
  p.done();
  if (algorithm != "gd" && algorithm != "sgd" && algorithm != "cd") {
    throw SchemaError("params.algorithm: must be gd, sgd or cd");
  }
  if (algorithm == "cd" && !c.coord_budget) throw SchemaError("params.descent: cd needs coord_budget");
  if (algorithm != "cd" && c.coord_budget) {
    throw SchemaError("params.descent: coord_budget is only valid with algorithm cd");
  }
  if (readout_only && net_spec.kind != NetSpec::Kind::Monomial) {
    throw SchemaError("params.readout_only: needs a monomial net");
  }
  if (algorithm == "gd" && n > kMaxPopulationArity) {
    throw TooLarge("population GD enumerates 2^n inputs; n is beyond the cap");
  }
  if (net_spec.kind == NetSpec::Kind::Monomial &&
      binomial_capped(n, net_spec.k, net_spec.max_units + 1) > net_spec.max_units) {
    throw BudgetExceeded("monomial net would exceed max_units");
  }
  Plan plan;
  plan.flags = {{"algorithm", algorithm},
                {"readout_only", readout_only},
                {"update_order", "clamp, select, step, noise, project, quantize"}};
  plan.run = [=] {
    Rng init(derive_seed(seed, 2));
    BuiltNet built = build_net(net_spec, init);
    DescentConfig cfg = c;
    if (readout_only) {
      cfg.trainable = built.monomial->readout_edges;
      cfg.trainable.push_back(built.monomial->readout_bias);
    }
    RunResult r;
    if (algorithm == "gd") {
      r = gd_run(built.net, planted_population(f, inputs), cfg);
    } else {
      auto src = SampleSource::planted(f, inputs, derive_seed(seed, 3));
      r = algorithm == "sgd" ? sgd_run(built.net, src, cfg) : cd_run(built.net, src, cfg);
    }
    const auto acc = accuracy_eval(r.net, f, inputs, cfg.coding, eval_trials, derive_seed(seed, 5));
    ojson s;
    s["function"] = describe(f);
    s["inputs"] = describe(inputs);
    s["algorithm"] = algorithm;
    s["steps"] = cfg.steps;
    s["edges"] = r.net.edge_count();
    s["accuracy"] = acc.value;
    s["ci95"] = acc.ci95_halfwidth;
    s["exhaustive"] = acc.exhaustive;
    std::vector<OutputFile> out{{"net.json", dump_net(r.net) + "\n"}, {"summary.json", json_file(s)}};
    if (cfg.keep_log) out.push_back({"run_log.jsonl", r.log.to_jsonl()});
    return out;
  };
  return plan;
}

// ---- distinguish

std::shared_ptr<Sla> parse_sla(Fields f, int n, std::size_t steps, std::uint64_t seed) {
  const auto kind = f.req<std::string>("kind");
  std::shared_ptr<Sla> sla;
  if (kind == "constant") {
    sla = std::make_shared<ConstantSla>();
  } else if (kind == "echo") {
    sla = std::make_shared<EchoLabelSla>();
  } else if (kind == "counting") {
    sla = std::make_shared<CountingOnesSla>(f.opt<std::size_t>("horizon", std::max<std::size_t>(steps, 1)));
  } else if (kind == "gf2") {
    sla = std::make_shared<Gf2Sla>(n);
  } else if (kind == "sgd") {
    const NetSpec spec = parse_net(f.child("net"), n);
    DescentConfig c = parse_descent(f.child("descent"));
    Rng init(derive_seed(seed, 2));
    BuiltNet built = build_net(spec, init);
    try {
      sla.reset(sgd_as_sla(built.net, c.loss, c).release());
    } catch (const UnboundedAlphabet& e) {
      throw SchemaError(f.path() + ": " + e.what());
    }
  } else {
    f.fail("kind", "must be constant, echo, counting, gf2 or sgd");
  }
  f.done();
  return sla;
}

Plan plan_distinguish(Fields& p, std::uint64_t seed) {
  const FunctionDistribution dist = parse_distribution(p.child("dist"));
  const int n = arity(dist);
  DistinguishOptions o;
  o.steps = p.req<std::size_t>("steps");
  o.trials = p.opt<std::size_t>("trials", 200);
  o.statistic = DecisionStatistic::PredictionCount;
  if (auto s = p.maybe<std::string>("statistic")) {
    try {
      o.statistic = parse_statistic(*s);
    } catch (const InvalidArgument& e) {
      throw SchemaError(std::string("params.statistic: ") + e.what());
    }
  }
  o.c_const = p.opt<double>("c_const", 1.0);
  o.null_alpha = p.opt<double>("null_alpha", 0.05);
  o.seed = seed;
  const bool trace = p.opt<bool>("trace", false);
  const auto sla = parse_sla(p.child("sla"), n, o.steps, seed);
  p.done();
  if (o.trials < 20) throw SchemaError("params.trials: at least 20 per hypothesis");
  if (o.steps < 2) throw SchemaError("params.steps: at least 2");
  if (!(o.null_alpha >= 0.0 && o.null_alpha <= 1.0)) throw SchemaError("params.null_alpha: must lie in [0, 1]");
  if (!(o.c_const >= 0.0)) throw SchemaError("params.c_const: must be non-negative");
  Plan plan;
  plan.flags = {{"design", "balanced hypotheses, threshold calibrated on held-out null runs"},
                {"statistic", statistic_name(o.statistic)},
                {"null_alpha", o.null_alpha},
                {"cap_constant", o.c_const}};
  plan.run = [=] {
    std::vector<OutputFile> out{{"distinguish.json", json_file(to_json(distinguish_experiment(*sla, dist, o)))}};
    if (trace) {
      auto copy = sla->clone();
      auto src = SampleSource::planted(draw_function(dist, derive_seed(seed, 90)), UniformInputs{n},
                                       derive_seed(seed, 91));
      out.push_back({"trace.jsonl", run_trace(*copy, src, o.steps, derive_seed(seed, 92)).to_jsonl()});
    }
    return out;
  };
  return plan;
}

// ---- gridparity

Plan plan_gridparity(Fields& p, std::uint64_t seed) {
  const auto preset = p.opt<std::string>("preset", "full");
  GridParitySpec s;
  if (preset == "desk") {
    s = GridParitySpec::desk();
  } else if (preset != "full") {
    p.fail("preset", "must be full or desk");
  }
  s.side = p.opt<int>("side", s.side);
  s.hidden = p.opt<std::vector<int>>("hidden", s.hidden);
  s.activation = activation_opt(p, "activation", s.activation);
  s.gamma = p.opt<double>("gamma", s.gamma);
  s.overflow_B = p.opt<double>("overflow_B", s.overflow_B);
  s.epochs = p.opt<std::size_t>("epochs", s.epochs);
  s.train_count = p.opt<std::size_t>("train_count", s.train_count);
  s.test_count = p.opt<std::size_t>("test_count", s.test_count);
  auto seeds = p.opt<std::vector<std::uint64_t>>("seeds", {seed});
  p.done();
  if (s.side < 1 || s.side > 64) throw SchemaError("params.side: must lie in [1, 64]");
  for (int w : s.hidden) {
    if (w < 1) throw SchemaError("params.hidden: widths must be positive");
  }
  if (!(s.gamma >= 0.0)) throw SchemaError("params.gamma: must be non-negative");
  if (!(s.overflow_B > 0.0)) throw SchemaError("params.overflow_B: must be positive");
  if (seeds.empty()) throw SchemaError("params.seeds: must not be empty");
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  Plan plan;
  plan.flags = {{"training_set", "fixed, reshuffled each epoch"},
                {"input_encoding", "1 - 2 cell"},
                {"label_coding", "bit, sigmoid output, logistic loss"},
                {"overflow_B", s.overflow_B}};
  plan.run = [=] {
    std::vector<std::vector<GridEpochRow>> runs(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) { runs[i] = grid_parity_run(s, seeds[i]); });
    std::vector<OutputFile> out;
    std::string summary = "seed,final_train_loss,final_train_err,final_test_err\n";
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      out.push_back({"gridparity_seed" + std::to_string(seeds[i]) + ".csv", grid_parity_csv(runs[i])});
      const auto& last = runs[i].back();
      summary += std::to_string(seeds[i]) + "," + fmt(last.train_loss) + "," + fmt(last.train_err) + "," +
                 fmt(last.test_err) + "\n";
    }
    out.push_back({"gridparity_summary.csv", with_digest_line(summary)});
    return out;
  };
  return plan;
}

// ---- phase

Plan plan_phase(Fields& p, std::uint64_t seed) {
  PhaseSpec s;
  s.n = p.req<int>("n");
  s.ks = p.req<std::vector<int>>("ks");
  s.readout_steps = p.opt<std::size_t>("readout_steps", s.readout_steps);
  s.readout_gamma = p.opt<double>("readout_gamma", s.readout_gamma);
  s.max_units = p.opt<std::size_t>("max_units", s.max_units);
  if (auto m = p.maybe_child("mlp")) {
    s.mlp_hidden = m->opt<std::vector<int>>("hidden", s.mlp_hidden);
    s.mlp_activation = activation_opt(*m, "activation", s.mlp_activation);
    s.mlp_steps = m->opt<std::size_t>("steps", s.mlp_steps);
    s.mlp_gamma = m->opt<double>("gamma", s.mlp_gamma);
    m->done();
  }
  s.eval_trials = p.opt<std::size_t>("eval_trials", s.eval_trials);
  p.done();
  if (s.n < 1 || s.n > 63) throw SchemaError("params.n: must lie in [1, 63]");
  if (s.ks.empty()) throw SchemaError("params.ks: must not be empty");
  for (int k : s.ks) {
    if (k < 1 || k > s.n) throw SchemaError("params.ks: entries must lie in [1, n]");
    if (binomial_capped(s.n, k, s.max_units + 1) > s.max_units) {
      throw BudgetExceeded("C(n, k) for k = " + std::to_string(k) + " exceeds max_units");
    }
  }
  for (int w : s.mlp_hidden) {
    if (w < 1) throw SchemaError("params.mlp.hidden: widths must be positive");
  }
  Plan plan;
  plan.flags = {{"readout_training", "SGD on readout edges only, gadget frozen"},
                {"readout_gamma", s.readout_gamma > 0 ? ojson(s.readout_gamma) : ojson("0.5/(units+1)")}};
  plan.run = [=] { return std::vector<OutputFile>{{"phase.csv", phase_csv(phase_run(s, seed))}}; };
  return plan;
}

// ---- bounds

std::vector<double> grid_axis(Fields& f, const std::string& key) {
  auto v = f.req<std::vector<double>>(key);
  if (v.empty()) f.fail(key, "must not be empty");
  return v;
}

Plan plan_bounds(Fields& p, std::uint64_t seed) {
  struct GdGrid {
    std::vector<double> gamma, B, T, m, n, sigma2;
  };
  struct SgdGrid {
    std::vector<double> T, m, B, gamma, n, p, c;
    bool elaborated = false;
  };
  std::optional<GdGrid> gd;
  std::optional<SgdGrid> sgd;
  std::optional<NoisyGdSpec> empirical;
  auto zero_noise = [] {
    return SchemaError("the noisy GD bound is undefined at zero noise (sigma^2 must be positive)");
  };
  if (auto g = p.maybe_child("gd")) {
    GdGrid grid{grid_axis(*g, "gamma"), grid_axis(*g, "B"), grid_axis(*g, "T"),
                grid_axis(*g, "m"),     grid_axis(*g, "n"), grid_axis(*g, "sigma2")};
    g->done();
    for (double v : grid.sigma2) {
      if (!(v > 0.0)) throw zero_noise();
    }
    gd = grid;
  }
  if (auto g = p.maybe_child("sgd")) {
    SgdGrid grid{grid_axis(*g, "T"), grid_axis(*g, "m"), grid_axis(*g, "B"), grid_axis(*g, "gamma"),
                 grid_axis(*g, "n"), grid_axis(*g, "p"), g->opt<std::vector<double>>("c_const", {1.0})};
    grid.elaborated = g->opt<bool>("elaborated", false);
    g->done();
    sgd = grid;
  }
  if (auto e = p.maybe_child("empirical")) {
    NoisyGdSpec s;
    s.n = e->opt<int>("n", s.n);
    s.hidden = e->opt<std::vector<int>>("hidden", s.hidden);
    s.activation = activation_opt(*e, "activation", s.activation);
    s.gamma = e->opt<double>("gamma", s.gamma);
    s.overflow_B = e->opt<double>("B", s.overflow_B);
    s.steps = e->opt<std::size_t>("T", s.steps);
    s.sigma2 = e->maybe<double>("sigma2");
    s.parities = e->opt<std::size_t>("parities", s.parities);
    e->done();
    if (s.sigma2 && !(*s.sigma2 > 0.0)) throw zero_noise();
    if (s.n < 1) throw SchemaError("params.empirical.n: must be positive");
    if (s.n > kMaxExhaustiveInputs) throw TooLarge("params.empirical.n: exact accuracy needs n <= 12");
    if (s.parities < 2) throw SchemaError("params.empirical.parities: at least 2");
    if (!(s.gamma > 0.0) || !(s.overflow_B > 0.0)) throw SchemaError("params.empirical: gamma and B must be positive");
    empirical = s;
  }
  p.done();
  if (!gd && !sgd && !empirical) throw SchemaError("params: give at least one of gd, sgd, empirical");
  auto check = [](auto fn) {
    try {
      fn();
    } catch (const InvalidArgument& e) {
      throw SchemaError(std::string("params: ") + e.what());
    }
  };
  if (gd) {
    check([&] {
      for (double a : gd->gamma)
        for (double b : gd->B)
          for (double t : gd->T)
            for (double m : gd->m)
              for (double n : gd->n)
                for (double s2 : gd->sigma2) bound_gd(a, b, t, m, static_cast<int>(n), s2);
    });
  }
  if (sgd) {
    check([&] {
      for (double t : sgd->T)
        for (double m : sgd->m)
          for (double b : sgd->B)
            for (double g : sgd->gamma)
              for (double n : sgd->n)
                for (double pp : sgd->p)
                  for (double c : sgd->c) bound_sgd(t, m, b, g, static_cast<int>(n), pp, c);
    });
  }
  Plan plan;
  plan.flags = {{"unspecified_constants", "explicit inputs, default 1"}};
  plan.run = [=] {
    std::vector<OutputFile> out;
    if (gd) {
      std::string body = "gamma,B,T,m,n,sigma2,bound\n";
      for (double a : gd->gamma)
        for (double b : gd->B)
          for (double t : gd->T)
            for (double m : gd->m)
              for (double n : gd->n)
                for (double s2 : gd->sigma2) {
                  body += fmt(a) + "," + fmt(b) + "," + fmt(t) + "," + fmt(m) + "," + fmt(n) + "," + fmt(s2) +
                          "," + fmt(bound_gd(a, b, t, m, static_cast<int>(n), s2)) + "\n";
                }
      out.push_back({"bounds_gd.csv", with_digest_line(body)});
    }
    if (sgd) {
      std::string body = "T,m,B,gamma,n,p,c_const,bound";
      body += sgd->elaborated ? ",elaborated\n" : "\n";
      for (double t : sgd->T)
        for (double m : sgd->m)
          for (double b : sgd->B)
            for (double g : sgd->gamma)
              for (double n : sgd->n)
                for (double pp : sgd->p)
                  for (double c : sgd->c) {
                    const int ni = static_cast<int>(n);
                    body += fmt(t) + "," + fmt(m) + "," + fmt(b) + "," + fmt(g) + "," + fmt(n) + "," + fmt(pp) +
                            "," + fmt(c) + "," + fmt(bound_sgd(t, m, b, g, ni, pp, c));
                    if (sgd->elaborated) body += "," + fmt(bound_sgd_elaborated(t, m, b, g, ni, pp));
                    body += "\n";
                  }
      out.push_back({"bounds_sgd.csv", with_digest_line(body)});
    }
    if (empirical) {
      const NoisyGdResult r = noisy_gd_experiment(*empirical, seed);
      ojson j;
      j["n"] = empirical->n;
      j["edges"] = r.edges;
      j["gamma"] = empirical->gamma;
      j["B"] = empirical->overflow_B;
      j["T"] = empirical->steps;
      j["sigma2"] = r.sigma2;
      j["parities"] = empirical->parities;
      j["mean_accuracy"] = r.mean_accuracy;
      j["ci95"] = r.ci95_halfwidth;
      j["bound"] = r.bound;
      j["below_bound"] = r.mean_accuracy <= r.bound + r.ci95_halfwidth;
      j["accuracies"] = r.accuracies;
      out.push_back({"bounds_empirical.json", json_file(j)});
    }
    return out;
  };
  return plan;
}

// ---- gen-aer

Plan plan_gen_aer(Fields& p, std::uint64_t seed) {
  const int n = p.req<int>("n");
  const double m = p.req<double>("m");
  const int r = p.req<int>("r");
  const auto count = p.opt<std::size_t>("count", 10);
  p.done();
  if (n < 1) throw SchemaError("params.n: must be positive");
  if (!(m >= 0.0)) throw SchemaError("params.m: must be non-negative");
  if (r < 3) throw SchemaError("params.r: must be at least 3");
  if (count < 1) throw SchemaError("params.count: must be positive");
  Plan plan;
  plan.flags = {{"edge_probability", "min(1, m / n)"}};
  plan.run = [=] {
    std::vector<OutputFile> out;
    std::string summary = "index,n,edges,girth,passes\n";
    for (const AerRow& row : aer_batch(n, m, r, count, seed)) {
      out.push_back({"aer_" + std::to_string(row.index) + ".txt", edge_list_text(row.graph)});
      summary += std::to_string(row.index) + "," + std::to_string(row.graph.n) + "," +
                 std::to_string(row.graph.edges.size()) + "," +
                 (row.girth ? std::to_string(*row.girth) : std::string("inf")) + "," + (row.passes ? "1" : "0") +
                 "\n";
    }
    out.push_back({"aer_summary.csv", with_digest_line(summary)});
    return out;
  };
  return plan;
}

}  // namespace

Plan plan_command(const std::string& command, const nlohmann::json& params, std::uint64_t seed) {
  Fields p(params, "params");
  if (command == "xpred") return plan_xpred(p, seed);
  if (command == "train") return plan_train(p, seed);
  if (command == "distinguish") return plan_distinguish(p, seed);
  if (command == "gridparity") return plan_gridparity(p, seed);
  if (command == "phase") return plan_phase(p, seed);
  if (command == "bounds") return plan_bounds(p, seed);
  if (command == "gen-aer") return plan_gen_aer(p, seed);
  throw SchemaError("unknown command: " + command);
}

}  // namespace parlab::lab
