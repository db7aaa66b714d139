#include <gtest/gtest.h>

#include <cmath>

#include "parlab/common/error.hpp"
#include "parlab/common/rng.hpp"
#include "parlab/netcore/quantize.hpp"

using namespace parlab;

TEST(Quantize, Examples) {
  const QuantizationSpec q{8, 4};
  EXPECT_EQ(quantize(0.0, q), 0.0);
  EXPECT_EQ(quantize(0.33, q), 0.3125);
  EXPECT_EQ(q.max_value(), 127.0 / 16.0);
  EXPECT_EQ(quantize(100.0, q), q.max_value());
  EXPECT_EQ(quantize(-100.0, q), -q.max_value());
  EXPECT_EQ(quantize(INFINITY, q), q.max_value());
}

TEST(Quantize, TiesToEven) {
  const QuantizationSpec q{8, 4};
  EXPECT_EQ(quantize(1.0 / 32.0, q), 0.0);         // code 0.5 -> 0
  EXPECT_EQ(quantize(3.0 / 32.0, q), 2.0 / 16.0);  // code 1.5 -> 2
  EXPECT_EQ(quantize(-3.0 / 32.0, q), -2.0 / 16.0);
}

TEST(Quantize, IdempotentAndBounded) {
  Rng rng(5);
  for (QuantizationSpec q : {QuantizationSpec{8, 4}, QuantizationSpec{12, 8}, QuantizationSpec{4, 0},
                             QuantizationSpec{64, 40}}) {
    for (int i = 0; i < 20000; ++i) {
      const double w = rng.uniform(-1.2, 1.2) * q.max_value();
      const double a = quantize(w, q);
      EXPECT_EQ(quantize(a, q), a);
      EXPECT_LE(std::abs(a), q.max_value());
      if (std::abs(w) <= q.max_value()) {
        EXPECT_LE(std::abs(a - w), std::ldexp(1.0, -q.fractional_bits - 1));
      }
    }
  }
}

TEST(Quantize, ExactDecimal) {
  EXPECT_EQ(exact_decimal(5, 4), "0.3125");
  EXPECT_EQ(exact_decimal(-24, 4), "-1.5");
  EXPECT_EQ(exact_decimal(0, 4), "0");
  EXPECT_EQ(exact_decimal(3, 0), "3");
  EXPECT_EQ(exact_decimal(1, 10), "0.0009765625");
  EXPECT_EQ(std::stod(exact_decimal(123456789, 30)), std::ldexp(123456789.0, -30));
}

TEST(Quantize, InvalidSpecs) {
  EXPECT_THROW(validate(QuantizationSpec{65, 4}), InvalidArgument);
  EXPECT_THROW(validate(QuantizationSpec{1, 0}), InvalidArgument);
  EXPECT_THROW(validate(QuantizationSpec{8, -1}), InvalidArgument);
}
