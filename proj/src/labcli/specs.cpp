#include "parlab/labcli/specs.hpp"

#include <fstream>
#include <sstream>

#include "parlab/common/bits.hpp"
#include "parlab/netcore/serialize.hpp"

namespace parlab::lab {

namespace {

int arity_field(Fields& f) {
  const int n = f.req<int>("n");
  if (n < 1 || n > 63) f.fail("n", "must lie in [1, 63]");
  return n;
}

Mask subset_field(Fields& f, int n) {
  const auto elems = f.req<std::vector<int>>("subset");
  for (int e : elems) {
    if (e < 1 || e > n) f.fail("subset", "entries must lie in [1, n]");
  }
  return mask_from_elements(elems);
}

Mask point_field(Fields& f, const std::string& key, int n, std::uint64_t raw) {
  if (raw & ~low_mask(n)) f.fail(key, "has bits outside the first n coordinates");
  return raw;
}

// Library validation failures during parsing are schema errors.
template <class Fn>
auto checked(const std::string& where, Fn fn) {
  try {
    return fn();
  } catch (const SchemaError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw SchemaError(where + ": " + e.what());
  } catch (const DimensionMismatch& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

Activation activation_field(Fields& f, const std::string& key, Activation fallback) {
  const auto name = f.maybe<std::string>(key);
  if (!name) return fallback;
  return checked(f.path() + "." + key, [&] { return parse_activation(*name); });
}

}  // namespace

FunctionDistribution parse_distribution(Fields f) {
  const auto kind = f.req<std::string>("kind");
  const int n = arity_field(f);
  FunctionDistribution d;
  if (kind == "parity_uniform") {
    d = ParityUniform{n};
  } else if (kind == "monomial_k") {
    d = MonomialK{n, f.req<int>("k")};
  } else if (kind == "uniform_all") {
    d = UniformAll{n};
  } else if (kind == "constant_mixture") {
    d = ConstantMixture{n, f.req<double>("p_const")};
  } else {
    f.fail("kind", "must be parity_uniform, monomial_k, uniform_all or constant_mixture");
  }
  f.done();
  checked(f.path(), [&] {
    validate(d);
    return 0;
  });
  return d;
}

InputDistribution parse_inputs(Fields f) {
  const auto kind = f.req<std::string>("kind");
  const int n = arity_field(f);
  InputDistribution d;
  if (kind == "uniform") {
    d = UniformInputs{n};
  } else if (kind == "point_mass") {
    d = PointMass{n, point_field(f, "x", n, f.req<std::uint64_t>("x"))};
  } else if (kind == "finite_set") {
    std::vector<Mask> pts;
    for (auto p : f.req<std::vector<std::uint64_t>>("points")) pts.push_back(point_field(f, "points", n, p));
    d = FiniteSet{n, std::move(pts)};
  } else {
    f.fail("kind", "must be uniform, point_mass or finite_set");
  }
  f.done();
  checked(f.path(), [&] {
    validate(d);
    return 0;
  });
  return d;
}

FunctionId parse_function(Fields f) {
  const auto kind = f.req<std::string>("kind");
  const int n = arity_field(f);
  FunctionId g;
  if (kind == "parity") {
    g = ParitySubset{n, subset_field(f, n)};
  } else if (kind == "monomial") {
    g = MonomialSubset{n, subset_field(f, n)};
  } else if (kind == "const_plus") {
    g = ConstPlus{n};
  } else if (kind == "const_minus") {
    g = ConstMinus{n};
  } else if (kind == "random_table") {
    g = RandomTable{n, f.req<std::uint64_t>("seed")};
  } else {
    f.fail("kind", "must be parity, monomial, const_plus, const_minus or random_table");
  }
  f.done();
  return g;
}

NetSpec parse_net(Fields f, int n) {
  NetSpec s;
  s.n = n;
  const auto kind = f.req<std::string>("kind");
  if (kind == "mlp") {
    s.kind = NetSpec::Kind::Mlp;
    s.mlp.inputs = n;
    s.mlp.hidden = f.req<std::vector<int>>("hidden");
    for (int w : s.mlp.hidden) {
      if (w < 1) f.fail("hidden", "widths must be positive");
    }
    s.mlp.activation = activation_field(f, "activation", Activation::Tanh);
    s.mlp.output_activation = activation_field(f, "output_activation", Activation::Identity);
    const auto init = f.opt<std::string>("init", "uniform_fan_in");
    if (init == "zero") {
      s.mlp.init = InitScheme::Zero;
    } else if (init == "uniform_fan_in") {
      s.mlp.init = InitScheme::UniformFanIn;
    } else if (init == "gaussian_fan_in") {
      s.mlp.init = InitScheme::GaussianFanIn;
    } else {
      f.fail("init", "must be zero, uniform_fan_in or gaussian_fan_in");
    }
    s.mlp.bias = f.opt<bool>("bias", true);
  } else if (kind == "monomial") {
    s.kind = NetSpec::Kind::Monomial;
    s.k = f.req<int>("k");
    if (s.k < 1 || s.k > n) f.fail("k", "must lie in [1, n]");
    s.max_units = f.opt<std::size_t>("max_units", kDefaultMonomialBudget);
  } else if (kind == "file") {
    s.kind = NetSpec::Kind::File;
    s.path = f.req<std::string>("path");
  } else {
    f.fail("kind", "must be mlp, monomial or file");
  }
  f.done();
  return s;
}

BuiltNet build_net(const NetSpec& spec, Rng& rng) {
  BuiltNet out;
  switch (spec.kind) {
    case NetSpec::Kind::Mlp:
      out.net = build_mlp(spec.mlp, rng);
      break;
    case NetSpec::Kind::Monomial:
      out.monomial = build_monomial_net(spec.n, spec.k, spec.max_units);
      out.net = out.monomial->net;
      break;
    case NetSpec::Kind::File: {
      std::ifstream in(spec.path, std::ios::binary);
      if (!in) throw SchemaError("net.path: cannot read " + spec.path);
      std::stringstream buf;
      buf << in.rdbuf();
      out.net = parlab::parse_net(buf.str());
      if (out.net.graph->input_size() != static_cast<std::size_t>(spec.n)) {
        throw SchemaError("net.path: net arity does not match the experiment");
      }
      break;
    }
  }
  return out;
}

DescentConfig parse_descent(Fields f) {
  DescentConfig c;
  c.gamma = f.opt<double>("gamma", c.gamma);
  c.overflow_B = f.opt<double>("overflow_B", kUnbounded);
  c.weight_clamp_B = f.opt<double>("weight_clamp_B", kUnbounded);
  c.steps = f.opt<std::size_t>("steps", 0);
  if (auto noise = f.maybe_child("noise")) {
    const auto kind = noise->req<std::string>("kind");
    if (kind == "none") {
      c.noise = NoiseSpec::none();
    } else if (kind == "gaussian") {
      c.noise = NoiseSpec::gaussian(noise->req<double>("variance"));
    } else if (kind == "uniform") {
      c.noise = NoiseSpec::uniform(noise->req<double>("halfwidth"));
    } else {
      noise->fail("kind", "must be none, gaussian or uniform");
    }
    noise->done();
  }
  c.init_perturb_variance = f.opt<double>("init_perturb_variance", 0.0);
  if (auto q = f.maybe_child("quantization")) {
    c.quantization = QuantizationSpec{q->req<int>("total_bits"), q->req<int>("fractional_bits")};
    q->done();
  }
  c.coord_budget = f.maybe<std::size_t>("coord_budget");
  const auto rule = f.opt<std::string>("coord_rule", "top_k");
  if (rule == "top_k") {
    c.coord_rule = CoordRule::TopK;
  } else if (rule == "random_k") {
    c.coord_rule = CoordRule::RandomK;
  } else {
    f.fail("coord_rule", "must be top_k or random_k");
  }
  const auto loss = f.opt<std::string>("loss", "squared");
  if (loss == "squared") {
    c.loss = LossKind::SquaredError;
  } else if (loss == "bce") {
    c.loss = LossKind::LogisticBCE;
  } else {
    f.fail("loss", "must be squared or bce");
  }
  const auto coding = f.opt<std::string>("coding", "plus_minus");
  if (coding == "plus_minus") {
    c.coding = LabelCoding::PlusMinus;
  } else if (coding == "bit") {
    c.coding = LabelCoding::Bit;
  } else {
    f.fail("coding", "must be plus_minus or bit");
  }
  f.done();
  checked(f.path(), [&] {
    validate(c);
    return 0;
  });
  return c;
}

}  // namespace parlab::lab
