#include "parlab/funcdist/function.hpp"

#include "parlab/common/error.hpp"
#include "parlab/common/overloaded.hpp"

namespace parlab {

namespace {

std::string mask_text(Mask s) {
  std::string out = "{";
  bool first = true;
  for (int e : mask_elements(s)) {
    if (!first) out += ",";
    out += std::to_string(e);
    first = false;
  }
  return out + "}";
}

}  // namespace

int arity(const FunctionId& f) {
  return std::visit([](const auto& g) { return g.n; }, f);
}

int eval_point(const FunctionId& f, Mask x) {
  return std::visit(
      Overloaded{
          [x](const ParitySubset& g) { return parity_bit(g.s & x) ? -1 : 1; },
          [x](const MonomialSubset& g) { return parity_bit(g.s & x) ? -1 : 1; },
          [x](const RandomTable& g) {
            return (mix64(g.seed ^ mix64(x & low_mask(g.n))) >> 63) ? -1 : 1;
          },
          [](const ConstPlus&) { return 1; },
          [](const ConstMinus&) { return -1; },
          [x](const ExplicitTable& g) { return static_cast<int>((*g.values)[x]); },
      },
      f);
}

int eval_function(const FunctionId& f, std::span<const double> x) {
  const int n = arity(f);
  if (x.size() != static_cast<std::size_t>(n)) {
    throw DimensionMismatch("function of arity " + std::to_string(n) + " given " +
                            std::to_string(x.size()) + " inputs");
  }
  Mask m = 0;
  for (int i = 0; i < n; ++i) {
    if (x[i] == -1.0) {
      m |= Mask{1} << i;
    } else if (x[i] != 1.0) {
      throw InvalidArgument("function inputs must be +1 or -1");
    }
  }
  return eval_point(f, m);
}

bool is_parity(const FunctionId& f, Mask* subset) {
  Mask s = 0;
  if (const auto* p = std::get_if<ParitySubset>(&f)) {
    s = p->s;
  } else if (const auto* q = std::get_if<MonomialSubset>(&f)) {
    s = q->s;
  } else if (std::holds_alternative<ConstPlus>(f)) {
    s = 0;
  } else {
    return false;
  }
  if (subset) *subset = s;
  return true;
}

std::string describe(const FunctionId& f) {
  return std::visit(
      Overloaded{
          [](const ParitySubset& g) { return "parity" + mask_text(g.s); },
          [](const MonomialSubset& g) { return "monomial" + mask_text(g.s); },
          [](const RandomTable& g) { return "random_table(" + std::to_string(g.seed) + ")"; },
          [](const ConstPlus&) { return std::string("const+1"); },
          [](const ConstMinus&) { return std::string("const-1"); },
          [](const ExplicitTable&) { return std::string("table"); },
      },
      f);
}

ExplicitTable make_table(int n, std::vector<std::int8_t> values) {
  if (n < 0 || n > 24) throw TooLarge("explicit tables need n <= 24");
  if (values.size() != (std::size_t{1} << n)) {
    throw DimensionMismatch("explicit table must have 2^n entries");
  }
  for (auto v : values) {
    if (v != 1 && v != -1) throw InvalidArgument("explicit table entries must be +1 or -1");
  }
  return {n, std::make_shared<const std::vector<std::int8_t>>(std::move(values))};
}

}  // namespace parlab
