#include <gtest/gtest.h>

#include <cmath>

#include "parlab/common/error.hpp"
#include "parlab/netcore/net.hpp"
#include "parlab/netcore/serialize.hpp"
#include "support/random_net.hpp"

using namespace parlab;

namespace {

NeuralNet make(Activation act, std::size_t vertices, VertexId c, std::vector<VertexId> in,
               VertexId out, std::vector<Edge> edges, WeightVector w) {
  NeuralNet net;
  net.activation = act;
  net.output_activation = act;
  net.graph = std::make_shared<const NetGraph>(vertices, c, std::move(in), out, std::move(edges));
  net.weights = std::move(w);
  return net;
}

// 2-2-1 sigmoid net: c=0, x=1,2, hidden 3,4, out 5.
NeuralNet two_two_one() {
  return make(Activation::Sigmoid, 6, 0, {1, 2}, 5,
              {{0, 3}, {1, 3}, {2, 3}, {0, 4}, {1, 4}, {2, 4}, {0, 5}, {3, 5}, {4, 5}},
              {0.5, 1.0, -1.0, -0.5, 2.0, 0.5, 0.1, 1.5, -2.0});
}

double central_difference(NeuralNet net, const std::vector<double>& x, double y, LossKind loss,
                          std::size_t e, double h) {
  Workspace ws;
  const double w0 = net.weights[e];
  net.weights[e] = w0 + h;
  double vp = evaluate(net, x, ws);
  const double lp = loss_value(loss, net, ws.pre[net.graph->output_vertex()], vp, y);
  net.weights[e] = w0 - h;
  double vm = evaluate(net, x, ws);
  const double lm = loss_value(loss, net, ws.pre[net.graph->output_vertex()], vm, y);
  return (lp - lm) / (2 * h);
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-4});
}

}  // namespace

TEST(Evaluate, SingleZeroEdgeSigmoidIsHalf) {
  auto net = make(Activation::Sigmoid, 2, 0, {}, 1, {{0, 1}}, {0.0});
  EXPECT_DOUBLE_EQ(evaluate(net, std::vector<double>{}), 0.5);
}

TEST(Evaluate, IdentityIsLinear) {
  auto net = make(Activation::Identity, 3, 0, {1}, 2, {{0, 2}, {1, 2}}, {0.0, 1.75});
  for (double c : {-2.0, 0.0, 0.5, 3.0}) {
    EXPECT_DOUBLE_EQ(evaluate(net, std::vector<double>{c}), 1.75 * c);
  }
}

TEST(Evaluate, TwoTwoOneByHand) {
  // h1 = s(0.5 + 1 + 1), h2 = s(-0.5 + 2 - 0.5), out = s(0.1 + 1.5 h1 - 2 h2)
  auto net = two_two_one();
  Workspace ws;
  const double v = evaluate(net, std::vector<double>{1.0, -1.0}, ws);
  EXPECT_NEAR(ws.post[3], 0.9241418199787566, 1e-15);
  EXPECT_NEAR(ws.post[4], 0.7310585786300049, 1e-15);
  EXPECT_NEAR(ws.pre[5], 0.024095572708125124, 1e-15);
  EXPECT_NEAR(v, 0.5060236017396151, 1e-15);
}

TEST(Evaluate, DimensionMismatch) {
  auto net = two_two_one();
  EXPECT_THROW(evaluate(net, std::vector<double>{1.0}), DimensionMismatch);
  EXPECT_THROW(gradient(net, std::vector<double>{1.0, 2.0, 3.0}, 0.0, LossKind::SquaredError),
               DimensionMismatch);
  net.weights.pop_back();
  EXPECT_THROW(evaluate(net, std::vector<double>{1.0, -1.0}), DimensionMismatch);
}

TEST(Gradient, ZeroIdentityChainIsFinite) {
  auto net = make(Activation::Identity, 4, 0, {1}, 3, {{0, 2}, {1, 2}, {2, 3}}, {0, 0, 0});
  const auto g = gradient(net, std::vector<double>{0.7}, 1.0, LossKind::SquaredError);
  ASSERT_EQ(g.size(), 3u);
  for (double v : g) EXPECT_TRUE(std::isfinite(v));
  // Only the last edge sees a non-zero upstream value.
  EXPECT_EQ(g[0], 0.0);
  EXPECT_EQ(g[1], 0.0);
  EXPECT_EQ(g[2], 0.0);
}

TEST(Gradient, ZeroAtExactFit) {
  auto net = make(Activation::Identity, 3, 0, {1}, 2, {{0, 2}, {1, 2}}, {0.25, -0.5});
  const std::vector<double> x{2.0};
  const double y = 0.25 - 0.5 * 2.0;
  for (double v : gradient(net, x, y, LossKind::SquaredError)) EXPECT_EQ(v, 0.0);
}

TEST(Gradient, HandDerivativeOneEdge) {
  auto net = make(Activation::Identity, 3, 0, {1}, 2, {{0, 2}, {1, 2}}, {0.0, 1.0});
  const auto g = gradient(net, std::vector<double>{1.0}, 0.0, LossKind::SquaredError);
  EXPECT_DOUBLE_EQ(g[1], 2.0);  // 2 (w x - y) x
  EXPECT_DOUBLE_EQ(g[0], 2.0);
}

TEST(Gradient, FiniteDifferenceSigmoidAndTanh) {
  Rng rng(2024);
  for (Activation act : {Activation::Sigmoid, Activation::Tanh}) {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 1 + static_cast<int>(rng.below(8));
      auto net = fixtures::random_net(rng, n, 1 + static_cast<int>(rng.below(8)), 40, act);
      const auto x = fixtures::random_input(rng, n);
      const double y = rng.uniform(-1.0, 1.0);
      const auto g = gradient(net, x, y, LossKind::SquaredError);
      for (std::size_t e = 0; e < g.size(); ++e) {
        worst = std::max(worst, rel_err(g[e], central_difference(net, x, y,
                                                                 LossKind::SquaredError, e, 1e-5)));
      }
    }
    EXPECT_LE(worst, 1e-6) << activation_name(act);
  }
}

TEST(Gradient, FiniteDifferenceLogisticBce) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(6));
    auto net = fixtures::random_net(rng, n, 1 + static_cast<int>(rng.below(6)), 40,
                                   Activation::Tanh);
    net.output_activation = Activation::Sigmoid;
    const auto x = fixtures::random_input(rng, n);
    const double y = static_cast<double>(rng.below(2));
    const auto g = gradient(net, x, y, LossKind::LogisticBCE);
    for (std::size_t e = 0; e < g.size(); ++e) {
      EXPECT_LE(rel_err(g[e], central_difference(net, x, y, LossKind::LogisticBCE, e, 1e-5)),
                1e-6);
    }
  }
}

TEST(Gradient, ReluSubgradientZeroAtKink) {
  // Hidden pre-activation is exactly 0, so nothing flows below it.
  auto net = make(Activation::ReLU, 4, 0, {1}, 3, {{0, 2}, {1, 2}, {2, 3}}, {1.0, 1.0, 1.0});
  net.output_activation = Activation::Identity;
  const auto g = gradient(net, std::vector<double>{-1.0}, 1.0, LossKind::SquaredError);
  EXPECT_EQ(g[0], 0.0);
  EXPECT_EQ(g[1], 0.0);
}

TEST(Serialize, RoundTrip) {
  Rng rng(3);
  auto net = fixtures::random_net(rng, 4, 5, 40, Activation::Tanh);
  net.output_activation = Activation::Identity;
  const auto back = parse_net(dump_net(net));
  EXPECT_EQ(back.weights, net.weights);
  EXPECT_EQ(back.output_activation, Activation::Identity);
  EXPECT_EQ(std::vector<Edge>(back.graph->edges().begin(), back.graph->edges().end()),
            std::vector<Edge>(net.graph->edges().begin(), net.graph->edges().end()));
  const auto x = fixtures::random_input(rng, 4);
  EXPECT_EQ(evaluate(back, x), evaluate(net, x));
}

TEST(Serialize, QuantizedWeightsAreExactDecimals) {
  auto net = make(Activation::Identity, 3, 0, {1}, 2, {{0, 2}, {1, 2}}, {0.3125, -1.5});
  net.quantization = QuantizationSpec{8, 4};
  const auto j = net_to_json(net);
  EXPECT_EQ(j["edges"][0]["weight"], "0.3125");
  EXPECT_EQ(j["edges"][1]["weight"], "-1.5");
  EXPECT_EQ(net_from_json(j).weights, net.weights);
}

TEST(Serialize, RejectsMalformed) {
  EXPECT_THROW(parse_net("{"), SchemaError);
  EXPECT_THROW(parse_net(R"({"activation":"sigmoid"})"), SchemaError);
}
