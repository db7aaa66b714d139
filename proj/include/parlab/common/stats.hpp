#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace parlab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double halfwidth() const { return 0.5 * (hi - lo); }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool overlaps(double a, double b) const { return lo <= b && a <= hi; }
};

// Exact (Clopper-Pearson) binomial confidence interval for k successes out
// of n trials at the given two-sided confidence level.
Interval clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence = 0.95);

double mean(std::span<const double> xs);
// Unbiased sample variance; zero for fewer than two values.
double sample_variance(std::span<const double> xs);

// Two-sided standard normal quantile, e.g. 1.95996 for 0.95.
double normal_two_sided_quantile(double confidence);

// Percentile bootstrap interval for the mean of xs.
Interval bootstrap_mean_interval(std::span<const double> xs, std::size_t resamples,
                                 std::uint64_t seed, double confidence = 0.95);

}  // namespace parlab
