#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "parlab/funcdist/function.hpp"
#include "parlab/funcdist/inputs.hpp"

namespace parlab {

struct LabeledSample {
  Mask x = 0;
  int y = 1;  // +1 or -1
};

// Stream of labeled pairs: planted (X, f(X)) or null (X, independent fair
// sign). Owns its seeded stream.
class SampleSource {
 public:
  static SampleSource planted(FunctionId f, InputDistribution inputs, std::uint64_t seed);
  static SampleSource null(InputDistribution inputs, std::uint64_t seed);

  // FiniteSet inputs only: draw each listed point at most once, then
  // throw SourceExhausted.
  SampleSource& without_replacement();

  LabeledSample next();
  std::vector<LabeledSample> take(std::size_t count);

  int n() const { return arity(inputs_); }
  bool is_null() const { return !f_.has_value(); }
  const std::optional<FunctionId>& function() const { return f_; }
  const InputDistribution& inputs() const { return inputs_; }

 private:
  SampleSource(std::optional<FunctionId> f, InputDistribution inputs, std::uint64_t seed);

  std::optional<FunctionId> f_;
  InputDistribution inputs_;
  Rng rng_;
  bool replace_ = true;
  std::vector<Mask> remaining_;
};

}  // namespace parlab
