#include "parlab/crosspred/crosspred.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>

#include "parlab/common/digest.hpp"
#include "parlab/common/error.hpp"
#include "parlab/common/parallel.hpp"
#include "parlab/common/stats.hpp"
#include "parlab/netcore/builders.hpp"

namespace parlab {

namespace {

constexpr double kFormTolerance = 1e-12;
constexpr std::size_t kChunks = 64;  // fixed so results ignore the thread count
constexpr int kMaxNewPredArity = 10;
constexpr int kMaxBitInfoArity = 8;
constexpr int kMaxBitInfoAlphabet = 64;

std::string digest_of(const FunctionDistribution& d, const InputDistribution& in,
                      const std::string& extra = {}) {
  return sha256_hex(describe(d) + "|" + describe(in) + "|" + extra);
}

void check_arity(const FunctionDistribution& d, const InputDistribution& in) {
  validate(d);
  validate(in);
  if (arity(d) != arity(in)) {
    throw DimensionMismatch("function and input distributions differ in arity");
  }
}

using Bits = std::vector<std::uint64_t>;

// rows[r] has bit c set when v(r, c) == -1.
std::vector<Bits> pack_rows(std::size_t rows, std::size_t cols,
                            const std::function<int(std::size_t, std::size_t)>& v) {
  const std::size_t words = (cols + 63) / 64;
  std::vector<Bits> out(rows, Bits(words, 0));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (v(r, c) < 0) out[r][c / 64] |= std::uint64_t{1} << (c % 64);
    }
  }
  return out;
}

// sum_{r,r'} w_r w_r' (mean_c v(r,c) v(r',c))^2 with equal column weights.
double packed_form(const std::vector<Bits>& rows, std::span<const double> row_w,
                   std::size_t cols) {
  const std::size_t count = rows.size();
  std::vector<double> partial(count, 0.0);
  parallel_for(count, [&](std::size_t a) {
    double acc = 0.0;
    for (std::size_t b = a; b < count; ++b) {
      std::size_t diff = 0;
      for (std::size_t w = 0; w < rows[a].size(); ++w) diff += std::popcount(rows[a][w] ^ rows[b][w]);
      const double corr = (static_cast<double>(cols) - 2.0 * static_cast<double>(diff)) /
                          static_cast<double>(cols);
      acc += (a == b ? 1.0 : 2.0) * row_w[b] * corr * corr;
    }
    partial[a] = row_w[a] * acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

// Same with arbitrary column weights.
double weighted_form(std::size_t rows, std::size_t cols, std::span<const double> row_w,
                     std::span<const double> col_w, const std::vector<std::int8_t>& v,
                     bool transposed) {
  auto at = [&](std::size_t r, std::size_t c) {
    return transposed ? v[c * rows + r] : v[r * cols + c];
  };
  std::vector<double> partial(rows, 0.0);
  parallel_for(rows, [&](std::size_t a) {
    double acc = 0.0;
    for (std::size_t b = a; b < rows; ++b) {
      double corr = 0.0;
      for (std::size_t c = 0; c < cols; ++c) corr += col_w[c] * at(a, c) * at(b, c);
      acc += (a == b ? 1.0 : 2.0) * row_w[b] * corr * corr;
    }
    partial[a] = row_w[a] * acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

bool all_equal(std::span<const double> w) {
  return std::all_of(w.begin(), w.end(), [&](double x) { return x == w.front(); });
}

struct ExactForms {
  double function_form = 0.0;
  double input_form = 0.0;
};

ExactForms both_forms(const std::vector<WeightedFunction>& support,
                      const std::vector<WeightedPoint>& points) {
  const std::size_t M = support.size(), N = points.size();
  std::vector<double> q(M), p(N);
  for (std::size_t j = 0; j < M; ++j) q[j] = support[j].p;
  for (std::size_t i = 0; i < N; ++i) p[i] = points[i].p;
  std::vector<std::int8_t> v(M * N);
  for (std::size_t j = 0; j < M; ++j) {
    for (std::size_t i = 0; i < N; ++i) {
      v[j * N + i] = static_cast<std::int8_t>(eval_point(support[j].f, points[i].x));
    }
  }
  ExactForms out;
  // Function form: rows are functions, columns points.
  if (all_equal(p)) {
    out.function_form =
        packed_form(pack_rows(M, N, [&](std::size_t r, std::size_t c) { return v[r * N + c]; }), q, N);
  } else {
    out.function_form = weighted_form(M, N, q, p, v, false);
  }
  // Input form: rows are points, columns functions.
  if (all_equal(q)) {
    out.input_form =
        packed_form(pack_rows(N, M, [&](std::size_t r, std::size_t c) { return v[c * N + r]; }), p, M);
  } else {
    if (static_cast<double>(N) * N * M > 1e10) throw TooLarge("input-form sum is too large");
    out.input_form = weighted_form(N, M, p, q, v, true);
  }
  return out;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Unbiased estimate of (E z)^2 from k values z_i in {+1,-1} summing to s.
double unbiased_square(long s, std::size_t k) {
  const double m = static_cast<double>(s) / static_cast<double>(k);
  return (static_cast<double>(k) * m * m - 1.0) / static_cast<double>(k - 1);
}

}  // namespace

std::string_view method_name(PredMethod m) {
  switch (m) {
    case PredMethod::Exact:
      return "exact";
    case PredMethod::ClosedForm:
      return "closed_form";
    case PredMethod::MonteCarlo:
      return "monte_carlo";
  }
  return "exact";
}

nlohmann::ordered_json to_json(const PredEstimate& e) {
  nlohmann::ordered_json j;
  j["method"] = std::string(method_name(e.method));
  j["value"] = e.value;
  j["trials"] = e.trials;
  j["ci95"] = e.ci95_halfwidth;
  j["inputs_digest"] = e.inputs_digest;
  return j;
}

PredEstimate pred_exact(const InputDistribution& inputs, const FunctionDistribution& dist) {
  check_arity(dist, inputs);
  const auto points = enumerate_inputs(inputs);
  PredEstimate out;
  out.method = PredMethod::Exact;
  out.inputs_digest = digest_of(dist, inputs, "exact");

  const auto* uniform_all = std::get_if<UniformAll>(&dist);
  const auto* mixture = std::get_if<ConstantMixture>(&dist);
  if (uniform_all || mixture) {
    // E_F F(x) F(x') is 1 on the diagonal and 2 p_const elsewhere.
    const double off = mixture ? 2.0 * mixture->p_const : 0.0;
    double input_form = 0.0;
    for (const auto& a : points) {
      for (const auto& b : points) {
        const double k = a.x == b.x ? 1.0 : off;
        input_form += a.p * b.p * k * k;
      }
    }
    bool enumerable = true;
    std::vector<WeightedFunction> support;
    try {
      support = enumerate_support(dist);
    } catch (const TooLarge&) {
      enumerable = false;
    }
    if (enumerable) {
      const auto forms = both_forms(support, points);
      if (std::abs(forms.function_form - input_form) > kFormTolerance ||
          std::abs(forms.input_form - input_form) > kFormTolerance) {
        throw Error("cross-predictability forms disagree");
      }
    }
    out.value = clamp01(input_form);
    return out;
  }

  const auto support = enumerate_support(dist);
  const auto forms = both_forms(support, points);
  if (std::abs(forms.function_form - forms.input_form) > kFormTolerance) {
    throw Error("cross-predictability forms disagree: " + std::to_string(forms.function_form) +
                " vs " + std::to_string(forms.input_form));
  }
  out.value = clamp01(forms.function_form);
  return out;
}

std::optional<PredEstimate> pred_closed_form(const FunctionDistribution& dist,
                                             const InputDistribution& inputs) {
  check_arity(dist, inputs);
  PredEstimate out;
  out.method = PredMethod::ClosedForm;
  out.inputs_digest = digest_of(dist, inputs, "closed_form");
  if (std::holds_alternative<PointMass>(inputs)) {
    out.value = 1.0;
    return out;
  }
  if (std::holds_alternative<ParityUniform>(dist) || std::holds_alternative<UniformAll>(dist)) {
    out.value = collision_probability(inputs);
    return out;
  }
  if (const auto* mk = std::get_if<MonomialK>(&dist)) {
    if (!std::holds_alternative<UniformInputs>(inputs)) return std::nullopt;
    double c = 1.0;
    for (int i = 1; i <= mk->k; ++i) c = c * (mk->n - mk->k + i) / i;
    out.value = 1.0 / c;
    return out;
  }
  return std::nullopt;
}

PredEstimate pred_monte_carlo(const FunctionDistribution& dist, const InputDistribution& inputs,
                              std::size_t outer_pairs, std::size_t inner_x, std::uint64_t seed,
                              std::size_t bootstrap_resamples) {
  check_arity(dist, inputs);
  if (outer_pairs < 2 || inner_x < 2) {
    throw InvalidArgument("Monte-Carlo estimation needs outer_pairs >= 2 and inner_x >= 2");
  }
  std::vector<double> values(outer_pairs);
  parallel_for(kChunks, [&](std::size_t c) {
    Rng rng(derive_seed(seed, c));
    const std::size_t lo = c * outer_pairs / kChunks, hi = (c + 1) * outer_pairs / kChunks;
    for (std::size_t t = lo; t < hi; ++t) {
      const FunctionId f = draw_function(dist, rng);
      const FunctionId g = draw_function(dist, rng);
      long s = 0;
      for (std::size_t i = 0; i < inner_x; ++i) {
        const Mask x = draw_input(inputs, rng);
        s += eval_point(f, x) * eval_point(g, x);
      }
      values[t] = unbiased_square(s, inner_x);
    }
  });
  const auto ci = bootstrap_mean_interval(values, bootstrap_resamples, derive_seed(seed, kChunks));
  PredEstimate out;
  out.method = PredMethod::MonteCarlo;
  out.value = clamp01(mean(values));
  out.trials = outer_pairs;
  out.ci95_halfwidth = ci.halfwidth();
  out.inputs_digest =
      digest_of(dist, inputs,
                "mc:" + std::to_string(outer_pairs) + ":" + std::to_string(inner_x) + ":" +
                    std::to_string(seed) + ":" + std::to_string(bootstrap_resamples));
  return out;
}

PredEstimate pred_vs_random_net(const FunctionId& h, const RandomNetArch& arch,
                                std::size_t trials, std::uint64_t seed, std::size_t inner_x) {
  const int n = arity(h);
  if (n < 1) throw InvalidArgument("random-net predictability needs n >= 1");
  if (trials < 2) throw InvalidArgument("random-net predictability needs trials >= 2");
  const bool exhaustive = n <= kMaxExhaustiveInputs;
  if (!exhaustive && inner_x < 2) throw InvalidArgument("inner_x must be at least 2");
  std::vector<double> values(trials);
  parallel_for(kChunks, [&](std::size_t c) {
    const std::size_t lo = c * trials / kChunks, hi = (c + 1) * trials / kChunks;
    Workspace ws;
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (std::size_t t = lo; t < hi; ++t) {
      Rng rng(derive_seed(seed, t));
      MlpSpec spec{n, arch.hidden, arch.activation, Activation::Identity,
                   InitScheme::GaussianFanIn, true};
      const NeuralNet net = build_mlp(spec, rng);
      auto term = [&](Mask x) {
        to_signs(x, n, xs.data());
        const int s = evaluate(net, xs, ws) >= 0.0 ? 1 : -1;
        return s * eval_point(h, x);
      };
      if (exhaustive) {
        long sum = 0;
        for (Mask x = 0; x < (Mask{1} << n); ++x) sum += term(x);
        const double corr = std::ldexp(static_cast<double>(sum), -n);
        values[t] = corr * corr;
      } else {
        long sum = 0;
        for (std::size_t i = 0; i < inner_x; ++i) sum += term(rng.next_u64() & low_mask(n));
        values[t] = unbiased_square(sum, inner_x);
      }
    }
  });
  PredEstimate out;
  out.method = PredMethod::MonteCarlo;
  out.value = clamp01(mean(values));
  out.trials = trials;
  out.ci95_halfwidth =
      normal_two_sided_quantile(0.95) * std::sqrt(sample_variance(values) / trials);
  std::string arch_text = std::string(activation_name(arch.activation));
  for (int w : arch.hidden) arch_text += ":" + std::to_string(w);
  out.inputs_digest = sha256_hex(describe(h) + "|" + arch_text + "|" + std::to_string(trials) +
                                 "|" + std::to_string(seed) + "|" + std::to_string(inner_x));
  return out;
}

NewPredCheck check_newpred(std::span<const double> table, int n) {
  if (n < 0 || n > kMaxNewPredArity) throw TooLarge("check_newpred needs n <= 10");
  const std::size_t points = std::size_t{1} << n;
  if (table.size() != 2 * points) throw DimensionMismatch("table must have 2^(n+1) entries");
  double ef = 0.0, ef2 = 0.0;
  for (double v : table) {
    ef += v;
    ef2 += v * v;
  }
  ef /= static_cast<double>(2 * points);
  ef2 /= static_cast<double>(2 * points);
  double lhs = 0.0;
  for (Mask s = 0; s < points; ++s) {
    double e = 0.0;
    for (Mask x = 0; x < points; ++x) e += table[x | (static_cast<Mask>(parity_bit(s & x)) << n)];
    e /= static_cast<double>(points);
    lhs += (ef - e) * (ef - e);
  }
  double parseval = 0.0;
  for (Mask x = 0; x < points; ++x) {
    const double d = table[x | points] - table[x];
    parseval += d * d;
  }
  parseval = std::ldexp(parseval, -n - 2);
  NewPredCheck out;
  out.lhs = lhs;
  out.rhs = ef2;
  out.lhs_parseval = parseval;
  out.holds = lhs <= ef2 + 1e-12;
  return out;
}

InequalityCheck check_bit_info_bound(std::span<const int> g, int n, int m,
                                     const FunctionDistribution& dist,
                                     const InputDistribution& inputs) {
  if (n < 0 || n > kMaxBitInfoArity) throw TooLarge("check_bit_info_bound needs n <= 8");
  if (m < 1 || m > kMaxBitInfoAlphabet) throw TooLarge("check_bit_info_bound needs m <= 64");
  check_arity(dist, inputs);
  if (arity(dist) != n) throw DimensionMismatch("distribution arity differs from n");
  const std::size_t points = std::size_t{1} << n;
  if (g.size() != 2 * points) throw DimensionMismatch("g must have 2^(n+1) entries");
  for (int v : g) {
    if (v < 0 || v >= m) throw InvalidArgument("g values must lie in [0, m)");
  }
  const auto support = enumerate_support(dist);
  const auto pts = enumerate_inputs(inputs);
  std::vector<std::vector<double>> cond(support.size(), std::vector<double>(m, 0.0));
  std::vector<double> marginal(m, 0.0);
  for (std::size_t j = 0; j < support.size(); ++j) {
    for (const auto& wp : pts) {
      const Mask b = (1 - eval_point(support[j].f, wp.x)) / 2;
      cond[j][g[wp.x | (b << n)]] += wp.p;
    }
    for (int i = 0; i < m; ++i) marginal[i] += support[j].p * cond[j][i];
  }
  double lhs = 0.0;
  for (std::size_t j = 0; j < support.size(); ++j) {
    double d2 = 0.0;
    for (int i = 0; i < m; ++i) d2 += (cond[j][i] - marginal[i]) * (cond[j][i] - marginal[i]);
    lhs += support[j].p * d2;
  }
  InequalityCheck out;
  out.lhs = lhs;
  out.rhs = std::sqrt(pred_exact(inputs, dist).value);
  out.holds = lhs <= out.rhs + 1e-12;
  return out;
}

InequalityCheck check_parity_average(std::span<const double> g, int n) {
  if (n < 0 || n > kMaxNewPredArity) throw TooLarge("check_parity_average needs n <= 10");
  const std::size_t points = std::size_t{1} << n;
  if (g.size() != 2 * points) throw DimensionMismatch("g must have 2^(n+1) entries");
  double null_mean = 0.0, null_sq = 0.0;
  for (double v : g) {
    if (std::abs(v) > 1.0) throw InvalidArgument("g must satisfy |g| <= 1");
    null_mean += v;
    null_sq += v * v;
  }
  null_mean /= static_cast<double>(2 * points);
  null_sq /= static_cast<double>(2 * points);
  double planted = 0.0;
  for (Mask s = 0; s < points; ++s) {
    for (Mask x = 0; x < points; ++x) planted += g[x | (static_cast<Mask>(parity_bit(s & x)) << n)];
  }
  planted /= static_cast<double>(points) * static_cast<double>(points);
  InequalityCheck out;
  out.lhs = std::abs(null_mean - planted);
  out.rhs = std::pow(2.0, -n / 2.0) * std::sqrt(null_sq);
  out.holds = out.lhs <= out.rhs + 1e-12;
  return out;
}

}  // namespace parlab
