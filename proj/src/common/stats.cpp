#include "parlab/common/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "parlab/common/error.hpp"
#include "parlab/common/rng.hpp"

namespace parlab {

Interval clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence) {
  if (n == 0 || k > n) throw InvalidArgument("clopper_pearson: need 0 <= k <= n, n > 0");
  const double alpha = 1.0 - confidence;
  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  Interval out;
  out.lo = k == 0 ? 0.0 : boost::math::ibeta_inv(kk, nn - kk + 1.0, alpha / 2.0);
  out.hi = k == n ? 1.0 : boost::math::ibeta_inv(kk + 1.0, nn - kk, 1.0 - alpha / 2.0);
  return out;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double normal_two_sided_quantile(double confidence) {
  boost::math::normal_distribution<double> z;
  return boost::math::quantile(z, 0.5 + 0.5 * confidence);
}

Interval bootstrap_mean_interval(std::span<const double> xs, std::size_t resamples,
                                 std::uint64_t seed, double confidence) {
  if (xs.empty() || resamples == 0) return {};
  Rng rng(seed);
  std::vector<double> means(resamples);
  const std::size_t n = xs.size();
  for (std::size_t b = 0; b < resamples; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += xs[rng.below(n)];
    means[b] = s / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double alpha = 1.0 - confidence;
  auto at = [&](double q) {
    const double pos = q * static_cast<double>(resamples - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const std::size_t j = std::min(i + 1, resamples - 1);
    const double frac = pos - static_cast<double>(i);
    return means[i] * (1.0 - frac) + means[j] * frac;
  };
  return {at(alpha / 2.0), at(1.0 - alpha / 2.0)};
}

}  // namespace parlab
