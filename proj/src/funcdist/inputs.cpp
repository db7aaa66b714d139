#include "parlab/funcdist/inputs.hpp"

#include <algorithm>
#include <cmath>

#include "parlab/common/error.hpp"
#include "parlab/common/overloaded.hpp"

namespace parlab {

int arity(const InputDistribution& d) {
  return std::visit([](const auto& g) { return g.n; }, d);
}

void validate(const InputDistribution& d) {
  const int n = arity(d);
  if (n < 0 || n > 63) throw InvalidArgument("input arity must be in [0, 63]");
  std::visit(Overloaded{
                 [](const UniformInputs&) {},
                 [n](const PointMass& p) {
                   if (p.x & ~low_mask(n)) throw InvalidArgument("point outside the cube");
                 },
                 [n](const FiniteSet& f) {
                   if (f.points.empty()) throw InvalidArgument("finite input set is empty");
                   for (Mask x : f.points) {
                     if (x & ~low_mask(n)) throw InvalidArgument("point outside the cube");
                   }
                 },
             },
             d);
}

Mask draw_input(const InputDistribution& d, Rng& rng) {
  return std::visit(Overloaded{
                        [&](const UniformInputs& u) { return rng.next_u64() & low_mask(u.n); },
                        [](const PointMass& p) { return p.x; },
                        [&](const FiniteSet& f) { return f.points[rng.below(f.points.size())]; },
                    },
                    d);
}

std::vector<WeightedPoint> enumerate_inputs(const InputDistribution& d, int max_n) {
  validate(d);
  return std::visit(
      Overloaded{
          [&](const UniformInputs& u) {
            if (u.n > max_n) {
              throw TooLarge("exhaustive input sums need n <= " + std::to_string(max_n));
            }
            const std::size_t count = std::size_t{1} << u.n;
            std::vector<WeightedPoint> out(count);
            for (Mask x = 0; x < count; ++x) out[x] = {x, 1.0 / static_cast<double>(count)};
            return out;
          },
          [](const PointMass& p) { return std::vector<WeightedPoint>{{p.x, 1.0}}; },
          [](const FiniteSet& f) {
            std::vector<WeightedPoint> out;
            for (Mask x : f.points) out.push_back({x, 1.0 / static_cast<double>(f.points.size())});
            return out;
          },
      },
      d);
}

double collision_probability(const InputDistribution& d) {
  validate(d);
  return std::visit(Overloaded{
                        [](const UniformInputs& u) { return std::ldexp(1.0, -u.n); },
                        [](const PointMass&) { return 1.0; },
                        [](const FiniteSet& f) {
                          // Merge repeated points before squaring.
                          std::vector<Mask> pts = f.points;
                          std::sort(pts.begin(), pts.end());
                          double total = 0.0;
                          const double m = static_cast<double>(pts.size());
                          for (std::size_t i = 0; i < pts.size();) {
                            std::size_t j = i;
                            while (j < pts.size() && pts[j] == pts[i]) ++j;
                            const double p = static_cast<double>(j - i) / m;
                            total += p * p;
                            i = j;
                          }
                          return total;
                        },
                    },
                    d);
}

std::string describe(const InputDistribution& d) {
  return std::visit(Overloaded{
                        [](const UniformInputs& u) { return "uniform(" + std::to_string(u.n) + ")"; },
                        [](const PointMass& p) {
                          return "point_mass(" + std::to_string(p.n) + "," + std::to_string(p.x) +
                                 ")";
                        },
                        [](const FiniteSet& f) {
                          return "finite_set(" + std::to_string(f.n) + "," +
                                 std::to_string(f.points.size()) + ")";
                        },
                    },
                    d);
}

}  // namespace parlab
