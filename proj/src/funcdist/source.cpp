#include "parlab/funcdist/source.hpp"

#include "parlab/common/error.hpp"

namespace parlab {

SampleSource::SampleSource(std::optional<FunctionId> f, InputDistribution inputs,
                           std::uint64_t seed)
    : f_(std::move(f)), inputs_(std::move(inputs)), rng_(seed) {
  validate(inputs_);
  if (f_ && arity(*f_) != arity(inputs_)) {
    throw DimensionMismatch("planted function and input distribution differ in arity");
  }
}

SampleSource SampleSource::planted(FunctionId f, InputDistribution inputs, std::uint64_t seed) {
  return SampleSource(std::move(f), std::move(inputs), seed);
}

SampleSource SampleSource::null(InputDistribution inputs, std::uint64_t seed) {
  return SampleSource(std::nullopt, std::move(inputs), seed);
}

SampleSource& SampleSource::without_replacement() {
  const auto* set = std::get_if<FiniteSet>(&inputs_);
  if (!set) throw InvalidArgument("sampling without replacement needs a finite input set");
  replace_ = false;
  remaining_ = set->points;
  return *this;
}

LabeledSample SampleSource::next() {
  LabeledSample z;
  if (replace_) {
    z.x = draw_input(inputs_, rng_);
  } else {
    if (remaining_.empty()) throw SourceExhausted("finite sample set exhausted");
    const auto i = rng_.below(remaining_.size());
    z.x = remaining_[i];
    remaining_[i] = remaining_.back();
    remaining_.pop_back();
  }
  z.y = f_ ? eval_point(*f_, z.x) : rng_.sign();
  return z;
}

std::vector<LabeledSample> SampleSource::take(std::size_t count) {
  std::vector<LabeledSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(next());
  return out;
}

}  // namespace parlab
