#include <gtest/gtest.h>

#include <cmath>

#include "parlab/common/error.hpp"
#include "parlab/crosspred/crosspred.hpp"

using namespace parlab;

namespace {

// Brute-force oracle for the function form with plain double loops.
double brute_pred(const std::vector<WeightedFunction>& fs, int n) {
  const Mask points = Mask{1} << n;
  double total = 0.0;
  for (const auto& a : fs) {
    for (const auto& b : fs) {
      double c = 0.0;
      for (Mask x = 0; x < points; ++x) c += eval_point(a.f, x) * eval_point(b.f, x);
      c /= static_cast<double>(points);
      total += a.p * b.p * c * c;
    }
  }
  return total;
}

}  // namespace

TEST(PredExact, ParityUniformIsTwoToMinusN) {
  for (int n = 2; n <= 10; ++n) {
    const auto e = pred_exact(UniformInputs{n}, ParityUniform{n});
    EXPECT_NEAR(e.value, std::ldexp(1.0, -n), 1e-12) << n;
    EXPECT_EQ(e.method, PredMethod::Exact);
    EXPECT_EQ(e.trials, 0u);
    EXPECT_EQ(e.ci95_halfwidth, 0.0);
  }
  EXPECT_NEAR(pred_exact(UniformInputs{4}, ParityUniform{4}).value, 0.0625, 1e-15);
}

TEST(PredExact, PointMassIsOne) {
  EXPECT_NEAR(pred_exact(PointMass{5, 11}, ParityUniform{5}).value, 1.0, 1e-12);
  EXPECT_NEAR(pred_exact(PointMass{6, 3}, MonomialK{6, 3}).value, 1.0, 1e-12);
  EXPECT_NEAR(pred_exact(PointMass{7, 0}, UniformAll{7}).value, 1.0, 1e-12);
}

TEST(PredExact, MonomialMatchesBruteForce) {
  EXPECT_NEAR(pred_exact(UniformInputs{6}, MonomialK{6, 2}).value, 1.0 / 15, 1e-12);
  for (int n = 2; n <= 8; ++n) {
    for (int k = 1; k <= n; ++k) {
      const auto support = enumerate_support(MonomialK{n, k});
      EXPECT_NEAR(pred_exact(UniformInputs{n}, MonomialK{n, k}).value, brute_pred(support, n), 1e-12);
    }
  }
}

TEST(PredExact, UniformAllIsCollision) {
  for (int n = 1; n <= 10; ++n) {
    EXPECT_NEAR(pred_exact(UniformInputs{n}, UniformAll{n}).value, std::ldexp(1.0, -n), 1e-12);
  }
  const FiniteSet fs{3, {1, 1, 2, 6}};
  EXPECT_NEAR(pred_exact(fs, UniformAll{3}).value, collision_probability(fs), 1e-12);
}

TEST(PredExact, ConstantMixtureKernel) {
  // Enumerable at n <= 3, where both exhaustive forms are compared internally.
  for (int n = 1; n <= 3; ++n) {
    for (double p : {0.0, 0.1, 0.25, 0.5}) {
      const double coll = std::ldexp(1.0, -n);
      const double expected = 4 * p * p + (1 - 4 * p * p) * coll;
      EXPECT_NEAR(pred_exact(UniformInputs{n}, ConstantMixture{n, p}).value, expected, 1e-12);
      EXPECT_NEAR(brute_pred(enumerate_support(ConstantMixture{n, p}), n), expected, 1e-12);
    }
  }
  const double p = 1 / std::log(10.0);
  const auto big = pred_exact(UniformInputs{10}, ConstantMixture{10, p});
  EXPECT_GT(big.value, 4 * p * p);
}

TEST(PredExact, ExplicitNonUniformWeights) {
  Explicit d{{{ParitySubset{3, 1}, 0.5}, {ParitySubset{3, 3}, 0.25}, {ConstMinus{3}, 0.25}}};
  // Distinct parities are orthogonal and the constant is p_0 up to sign.
  const double expected = 0.25 + 0.0625 + 0.0625;
  EXPECT_NEAR(pred_exact(UniformInputs{3}, d).value, expected, 1e-12);
  EXPECT_NEAR(brute_pred(d.items, 3), expected, 1e-12);
}

TEST(PredExact, Errors) {
  EXPECT_THROW(pred_exact(UniformInputs{13}, ParityUniform{13}), TooLarge);
  EXPECT_THROW(pred_exact(UniformInputs{4}, ParityUniform{5}), DimensionMismatch);
}

TEST(PredClosedForm, Routing) {
  EXPECT_NEAR(pred_closed_form(UniformAll{5}, UniformInputs{5})->value, 1.0 / 32, 1e-15);
  EXPECT_NEAR(pred_closed_form(ParityUniform{10}, UniformInputs{10})->value, 1.0 / 1024, 1e-15);
  EXPECT_NEAR(pred_closed_form(MonomialK{10, 3}, UniformInputs{10})->value, 1.0 / 120, 1e-15);
  EXPECT_EQ(pred_closed_form(MonomialK{10, 3}, PointMass{10, 5})->value, 1.0);
  EXPECT_FALSE(pred_closed_form(ConstantMixture{6, 0.2}, UniformInputs{6}).has_value());
  EXPECT_FALSE(pred_closed_form(MonomialK{4, 2}, FiniteSet{4, {1, 2}}).has_value());
  const auto c = *pred_closed_form(ParityUniform{4}, UniformInputs{4});
  EXPECT_EQ(c.method, PredMethod::ClosedForm);
  EXPECT_EQ(c.trials, 0u);
}

TEST(PredClosedForm, AgreesWithExact) {
  for (int n = 2; n <= 8; ++n) {
    for (int k = 1; k <= n; k += 2) {
      EXPECT_NEAR(pred_closed_form(MonomialK{n, k}, UniformInputs{n})->value,
                  pred_exact(UniformInputs{n}, MonomialK{n, k}).value, 1e-12);
    }
    const FiniteSet fs{n, {0, 1, 1, 3}};
    EXPECT_NEAR(pred_closed_form(ParityUniform{n}, fs)->value, pred_exact(fs, ParityUniform{n}).value,
                1e-12);
  }
}

TEST(PredMonteCarlo, ParityUniform8) {
  const auto e = pred_monte_carlo(ParityUniform{8}, UniformInputs{8}, 100000, 1000, 3);
  const double truth = std::ldexp(1.0, -8);
  EXPECT_LE(std::abs(e.value - truth), e.ci95_halfwidth);
  EXPECT_LT(e.ci95_halfwidth, truth);
  EXPECT_EQ(e.trials, 100000u);
  EXPECT_EQ(e.method, PredMethod::MonteCarlo);
}

TEST(PredMonteCarlo, ConstantPointMassAndDeterminism) {
  const auto e = pred_monte_carlo(Explicit{{{ConstPlus{4}, 1.0}}}, UniformInputs{4}, 10, 10, 1);
  EXPECT_DOUBLE_EQ(e.value, 1.0);
  const auto a = pred_monte_carlo(MonomialK{8, 2}, UniformInputs{8}, 500, 50, 9);
  const auto b = pred_monte_carlo(MonomialK{8, 2}, UniformInputs{8}, 500, 50, 9);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.ci95_halfwidth, b.ci95_halfwidth);
  EXPECT_EQ(a.inputs_digest, b.inputs_digest);
  EXPECT_THROW(pred_monte_carlo(ParityUniform{3}, UniformInputs{3}, 1, 10, 1), InvalidArgument);
  EXPECT_THROW(pred_monte_carlo(ParityUniform{3}, UniformInputs{3}, 10, 1, 1), InvalidArgument);
}

TEST(PredMonteCarlo, CalibratedCoverage) {
  const double truth = 1.0 / 6;  // MonomialK(4, 2)
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto e = pred_monte_carlo(MonomialK{4, 2}, UniformInputs{4}, 2000, 20, seed, 500);
    covered += std::abs(e.value - truth) <= e.ci95_halfwidth;
    ASSERT_GE(e.value, 0.0);
    ASSERT_LE(e.value, 1.0);
  }
  EXPECT_GE(covered, 93);
}

TEST(PredVsRandomNet, RangeLocalityAndScaling) {
  const RandomNetArch arch{{16}, Activation::Tanh};
  const auto constant = pred_vs_random_net(ConstPlus{8}, arch, 200, 1);
  EXPECT_GE(constant.value, 0.0);
  EXPECT_LE(constant.value, 1.0);
  const auto dictator = pred_vs_random_net(ParitySubset{8, 1}, arch, 2000, 2);
  const auto full = pred_vs_random_net(ParitySubset{8, 0xff}, arch, 2000, 3);
  EXPECT_GT(dictator.value - 3 * dictator.ci95_halfwidth / 1.96,
            full.value + 3 * full.ci95_halfwidth / 1.96);
  const auto half = pred_vs_random_net(ParitySubset{8, 1}, arch, 1000, 4);
  const auto twice = pred_vs_random_net(ParitySubset{8, 1}, arch, 2000, 5);
  EXPECT_NEAR(twice.ci95_halfwidth / half.ci95_halfwidth, 1 / std::sqrt(2.0), 0.2 / std::sqrt(2.0));
}

TEST(PredVsRandomNet, SampledInnerForLargeN) {
  const RandomNetArch arch{{8}, Activation::Tanh};
  const auto dictator = pred_vs_random_net(ParitySubset{16, 1}, arch, 400, 7, 512);
  const auto full = pred_vs_random_net(ParitySubset{16, 0xffff}, arch, 400, 8, 512);
  EXPECT_GE(full.value, 0.0);
  EXPECT_LE(dictator.value, 1.0);
  EXPECT_GT(dictator.value - dictator.ci95_halfwidth, full.value + full.ci95_halfwidth);
}

TEST(JsonOutput, Fields) {
  const auto j = to_json(pred_exact(UniformInputs{6}, ParityUniform{6}));
  EXPECT_EQ(j["method"], "exact");
  EXPECT_DOUBLE_EQ(j["value"].get<double>(), 0.015625);
  EXPECT_EQ(j["trials"], 0);
  EXPECT_EQ(j["ci95"], 0.0);
  EXPECT_EQ(j["inputs_digest"].get<std::string>().size(), 64u);
}

TEST(NewPred, ConstantTable) {
  std::vector<double> f(16, 0.7);
  const auto r = check_newpred(f, 3);
  EXPECT_NEAR(r.lhs, 0.0, 1e-15);
  EXPECT_NEAR(r.rhs, 0.49, 1e-15);
  EXPECT_TRUE(r.holds);
}

TEST(NewPred, IndicatorOfParityLabel) {
  // f(x, y) = [y = p_t(x)]: the s = t term is (1/2 - 1)^2 = 1/4 and every
  // other term vanishes; the Parseval mass is 2^{-n-2} * 2^n = 1/4.
  const int n = 4;
  const Mask t = 0b1011;
  std::vector<double> f(32);
  for (Mask x = 0; x < 16; ++x) {
    for (Mask y = 0; y < 2; ++y) f[x | (y << n)] = y == static_cast<Mask>(parity_bit(x & t));
  }
  const auto r = check_newpred(f, n);
  EXPECT_NEAR(r.lhs, 0.25, 1e-15);
  EXPECT_NEAR(r.lhs_parseval, 0.25, 1e-15);
  EXPECT_NEAR(r.rhs, 0.5, 1e-15);
  EXPECT_TRUE(r.holds);
}

TEST(NewPred, RandomTablesHoldAndParsevalAgrees) {
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + static_cast<int>(rng.below(8));
    std::vector<double> f(std::size_t{2} << n);
    for (double& v : f) v = rng.uniform(-2.0, 2.0);
    const auto r = check_newpred(f, n);
    ASSERT_TRUE(r.holds);
    ASSERT_NEAR(r.lhs, r.lhs_parseval, 1e-10);
  }
  EXPECT_THROW(check_newpred(std::vector<double>(std::size_t{2} << 11), 11), TooLarge);
  EXPECT_THROW(check_newpred(std::vector<double>(5), 2), DimensionMismatch);
}

TEST(BitInfo, IndependentOfLabel) {
  std::vector<int> g(32);
  for (Mask x = 0; x < 16; ++x) g[x] = g[x | 16] = static_cast<int>(x % 3);
  const auto r = check_bit_info_bound(g, 4, 3, ParityUniform{4}, UniformInputs{4});
  EXPECT_NEAR(r.lhs, 0.0, 1e-15);
  EXPECT_TRUE(r.holds);
}

TEST(BitInfo, LabelEchoParity4) {
  // W = label bit in {0, 1}. For s != 0 the label is balanced, so
  // P_{W|F} = P_W = (1/2, 1/2) up to the s = 0 function whose label is
  // always 0: P_W(0) = 1/2 + 1/32. Exhaustive lhs by hand:
  // (1/16) * 2 (1/2 - 1/32)^2 + (15/16) * 2 (1/32)^2.
  std::vector<int> g(32);
  for (Mask x = 0; x < 16; ++x) {
    g[x] = 0;
    g[x | 16] = 1;
  }
  const auto r = check_bit_info_bound(g, 4, 2, ParityUniform{4}, UniformInputs{4});
  const double a = 0.5 - 1.0 / 32, b = 1.0 / 32;
  EXPECT_NEAR(r.lhs, (1.0 / 16) * 2 * a * a + (15.0 / 16) * 2 * b * b, 1e-15);
  EXPECT_NEAR(r.rhs, 0.25, 1e-15);
  EXPECT_TRUE(r.holds);
}

TEST(BitInfo, RandomAudit) {
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng.below(6));
    const int m = 1 + static_cast<int>(rng.below(16));
    std::vector<int> g(std::size_t{2} << n);
    for (int& v : g) v = static_cast<int>(rng.below(m));
    FunctionDistribution d = ParityUniform{n};
    if (i % 3 == 1) d = MonomialK{n, 1 + static_cast<int>(rng.below(n))};
    if (i % 3 == 2 && n <= 3) d = ConstantMixture{n, rng.uniform(0.0, 0.5)};
    const auto r = check_bit_info_bound(g, n, m, d, UniformInputs{n});
    EXPECT_TRUE(r.holds) << i;
  }
  EXPECT_THROW(check_bit_info_bound(std::vector<int>(1024), 9, 2, ParityUniform{9}, UniformInputs{9}),
               TooLarge);
  EXPECT_THROW(check_bit_info_bound(std::vector<int>(8), 2, 65, ParityUniform{2}, UniformInputs{2}),
               TooLarge);
}

TEST(ParityAverage, HoldsOnRandomBoundedTables) {
  Rng rng(51);
  for (int i = 0; i < 200; ++i) {
    const int n = 1 + static_cast<int>(rng.below(8));
    std::vector<double> g(std::size_t{2} << n);
    for (double& v : g) v = rng.uniform(-1.0, 1.0);
    EXPECT_TRUE(check_parity_average(g, n).holds);
  }
  EXPECT_THROW(check_parity_average(std::vector<double>(4, 2.0), 1), InvalidArgument);
}
