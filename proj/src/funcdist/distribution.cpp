#include "parlab/funcdist/distribution.hpp"

#include <cmath>
#include <string>
#include <numeric>

#include "parlab/common/error.hpp"
#include "parlab/common/overloaded.hpp"

namespace parlab {

namespace {

constexpr int kMaxTableArity = 24;

Mask random_k_subset(int n, int k, Rng& rng) {
  // Partial Fisher-Yates over the coordinates.
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Mask s = 0;
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
    s |= Mask{1} << idx[i];
  }
  return s;
}

std::vector<ExplicitTable> all_tables(int n, std::size_t cap) {
  const std::size_t points = std::size_t{1} << n;
  if (points >= 63 || (std::size_t{1} << points) > cap) {
    throw TooLarge("all " + std::to_string(points) + "-point tables exceed the cap of " +
                   std::to_string(cap));
  }
  std::vector<ExplicitTable> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << points); ++code) {
    std::vector<std::int8_t> v(points);
    for (std::size_t x = 0; x < points; ++x) v[x] = ((code >> x) & 1) ? -1 : 1;
    out.push_back(make_table(n, std::move(v)));
  }
  return out;
}

}  // namespace

int arity(const FunctionDistribution& d) {
  return std::visit(Overloaded{
                        [](const Explicit& e) { return e.items.empty() ? 0 : arity(e.items[0].f); },
                        [](const auto& g) { return g.n; },
                    },
                    d);
}

void validate(const FunctionDistribution& d) {
  std::visit(
      Overloaded{
          [](const ParityUniform& g) {
            if (g.n < 0 || g.n > 63) throw InvalidArgument("parity arity must be in [0, 63]");
          },
          [](const MonomialK& g) {
            if (g.n < 1 || g.n > 63 || g.k < 1 || g.k > g.n) {
              throw InvalidArgument("monomial distribution needs 1 <= k <= n <= 63");
            }
          },
          [](const UniformAll& g) {
            if (g.n < 0 || g.n > kMaxTableArity) {
              throw InvalidArgument("uniform-function arity must be in [0, 24]");
            }
          },
          [](const ConstantMixture& g) {
            if (g.n < 0 || g.n > kMaxTableArity) {
              throw InvalidArgument("constant-mixture arity must be in [0, 24]");
            }
            if (!(g.p_const >= 0.0 && g.p_const <= 0.5)) {
              throw InvalidArgument("constant-mixture mass must be in [0, 1/2]");
            }
          },
          [](const Explicit& e) {
            if (e.items.empty()) throw InvalidArgument("explicit distribution is empty");
            const int n = arity(e.items[0].f);
            double total = 0.0;
            for (const auto& item : e.items) {
              if (arity(item.f) != n) throw InvalidArgument("explicit functions differ in arity");
              if (!(item.p >= 0.0)) throw InvalidArgument("negative probability");
              total += item.p;
            }
            if (std::abs(total - 1.0) > 1e-12) {
              throw InvalidArgument("explicit probabilities must sum to 1");
            }
          },
      },
      d);
}

FunctionId draw_function(const FunctionDistribution& d, Rng& rng) {
  return std::visit(
      Overloaded{
          [&](const ParityUniform& g) -> FunctionId {
            return ParitySubset{g.n, rng.next_u64() & low_mask(g.n)};
          },
          [&](const MonomialK& g) -> FunctionId {
            return MonomialSubset{g.n, random_k_subset(g.n, g.k, rng)};
          },
          [&](const UniformAll& g) -> FunctionId { return RandomTable{g.n, rng.next_u64()}; },
          [&](const ConstantMixture& g) -> FunctionId {
            const double u = rng.uniform();
            if (u < g.p_const) return ConstPlus{g.n};
            if (u < 2 * g.p_const) return ConstMinus{g.n};
            return RandomTable{g.n, rng.next_u64()};
          },
          [&](const Explicit& e) -> FunctionId {
            const double u = rng.uniform();
            double acc = 0.0;
            for (const auto& item : e.items) {
              acc += item.p;
              if (u < acc) return item.f;
            }
            // Rounding slack: the last item with positive mass.
            for (auto it = e.items.rbegin(); it != e.items.rend(); ++it) {
              if (it->p > 0) return it->f;
            }
            return e.items.back().f;
          },
      },
      d);
}

FunctionId draw_function(const FunctionDistribution& d, std::uint64_t seed) {
  Rng rng(seed);
  return draw_function(d, rng);
}

std::vector<WeightedFunction> enumerate_support(const FunctionDistribution& d, std::size_t cap) {
  validate(d);
  return std::visit(
      Overloaded{
          [&](const ParityUniform& g) {
            if (g.n > 62 || (std::size_t{1} << g.n) > cap) {
              throw TooLarge("2^" + std::to_string(g.n) + " parities exceed the cap");
            }
            const std::size_t count = std::size_t{1} << g.n;
            std::vector<WeightedFunction> out;
            out.reserve(count);
            for (Mask s = 0; s < count; ++s) {
              out.push_back({ParitySubset{g.n, s}, 1.0 / static_cast<double>(count)});
            }
            return out;
          },
          [&](const MonomialK& g) {
            if (binomial_capped(g.n, g.k, cap) > cap) {
              throw TooLarge("C(" + std::to_string(g.n) + "," + std::to_string(g.k) +
                             ") monomials exceed the cap");
            }
            const auto subsets = subsets_of_size(g.n, g.k);
            std::vector<WeightedFunction> out;
            for (Mask s : subsets) {
              out.push_back({MonomialSubset{g.n, s}, 1.0 / static_cast<double>(subsets.size())});
            }
            return out;
          },
          [&](const UniformAll& g) {
            const auto tables = all_tables(g.n, cap);
            std::vector<WeightedFunction> out;
            for (const auto& t : tables) {
              out.push_back({t, 1.0 / static_cast<double>(tables.size())});
            }
            return out;
          },
          [&](const ConstantMixture& g) {
            const auto tables = all_tables(g.n, cap > 2 ? cap - 2 : 0);
            std::vector<WeightedFunction> out;
            out.push_back({ConstPlus{g.n}, g.p_const});
            out.push_back({ConstMinus{g.n}, g.p_const});
            const double rest = (1.0 - 2.0 * g.p_const) / static_cast<double>(tables.size());
            for (const auto& t : tables) out.push_back({t, rest});
            return out;
          },
          [&](const Explicit& e) {
            if (e.items.size() > cap) throw TooLarge("explicit support exceeds the cap");
            return e.items;
          },
      },
      d);
}

bool is_uniform_support(const FunctionDistribution& d) {
  if (const auto* e = std::get_if<Explicit>(&d)) {
    for (const auto& item : e->items) {
      if (item.p != e->items[0].p) return false;
    }
    return true;
  }
  return !std::holds_alternative<ConstantMixture>(d);
}

std::string describe(const FunctionDistribution& d) {
  return std::visit(
      Overloaded{
          [](const ParityUniform& g) { return "parity_uniform(" + std::to_string(g.n) + ")"; },
          [](const MonomialK& g) {
            return "monomial_k(" + std::to_string(g.n) + "," + std::to_string(g.k) + ")";
          },
          [](const UniformAll& g) { return "uniform_all(" + std::to_string(g.n) + ")"; },
          [](const ConstantMixture& g) {
            return "constant_mixture(" + std::to_string(g.n) + "," + std::to_string(g.p_const) +
                   ")";
          },
          [](const Explicit& e) { return "explicit(" + std::to_string(e.items.size()) + ")"; },
      },
      d);
}

}  // namespace parlab
