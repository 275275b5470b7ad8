// Copyright 2026 The gaugesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>

#include "gaugesim/error.hpp"
#include "gaugesim/scalar.hpp"

namespace gaugesim {
namespace {

TEST(Scalar, RationalArithmeticIsCanonical) {
  const Scalar a = Scalar::ratio(2, 4);
  const Scalar b = Scalar::ratio(-1, -3);
  EXPECT_EQ(format_rational(a.exact()), "1/2");
  EXPECT_EQ(format_rational(b.exact()), "1/3");
  EXPECT_EQ((a + b).to_string(), "5/6");
  EXPECT_EQ((a - b).to_string(), "1/6");
  EXPECT_EQ((a * b).to_string(), "1/6");
  EXPECT_EQ((a / b).to_string(), "3/2");
  EXPECT_EQ((b - a).to_string(), "-1/6");
  EXPECT_TRUE((a + b).is_exact());
}

TEST(Scalar, DivisionByExactZeroThrows) {
  EXPECT_THROW(Scalar(1) / Scalar(0), Error);
}

TEST(Scalar, MixingWithFloatPromotes) {
  const Scalar mixed = Scalar::ratio(1, 4) + Scalar(0.5);
  EXPECT_FALSE(mixed.is_exact());
  EXPECT_DOUBLE_EQ(mixed.to_double(), 0.75);
}

TEST(Scalar, FloatComparisonsUseTolerance) {
  EXPECT_TRUE(approx_equal(Scalar(0.25), Scalar(0.25 + 5e-10)));
  EXPECT_FALSE(approx_equal(Scalar(0.25), Scalar(0.25 + 5e-9)));
  EXPECT_TRUE(Scalar(-5e-10).is_zero());
  EXPECT_FALSE(Scalar(-5e-10).is_negative());
  EXPECT_TRUE(Scalar(-2e-9).is_negative());
  // Exact scalars compare exactly.
  EXPECT_FALSE(approx_equal(Scalar::ratio(1, 3), Scalar(Rational(1, 3) + Rational(1, mpz_class("1000000000000")))));
}

TEST(Scalar, ParseRational) {
  EXPECT_EQ(parse_rational("3/8"), Rational(3, 8));
  EXPECT_EQ(parse_rational(" 6/16 "), Rational(3, 8));
  EXPECT_EQ(parse_rational("0.0625"), Rational(1, 16));
  EXPECT_EQ(parse_rational("-2"), Rational(-2));
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(parse_rational("2.5E2"), Rational(250));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("abc"), Error);
  EXPECT_THROW(parse_rational(""), Error);
}

TEST(Scalar, SnapFindsSimplestRational) {
  EXPECT_EQ(snap_to_rational(0.25), Rational(1, 4));
  EXPECT_EQ(snap_to_rational(1.0 / 3.0), Rational(1, 3));
  EXPECT_EQ(snap_to_rational(-5.0 / 24.0), Rational(-5, 24));
  EXPECT_EQ(snap_to_rational(0.0), Rational(0));
  const double x = 0.0366116523516816;
  EXPECT_LE(std::fabs(snap_to_rational(x).get_d() - x), kSnapTolerance);
}

TEST(Scalar, BackendConversion) {
  EXPECT_EQ(Scalar(0.125).as(Backend::Exact).exact(), Rational(1, 8));
  EXPECT_FALSE(Scalar::ratio(1, 8).as(Backend::Float).is_exact());
  EXPECT_THROW((void)Scalar(0.5).exact(), Error);
}

TEST(Scalar, AbsDifference) {
  EXPECT_DOUBLE_EQ(abs_difference(Scalar::ratio(1, 4), Scalar::ratio(1, 2)), 0.25);
  EXPECT_DOUBLE_EQ(abs_difference(Scalar(0.75), Scalar::ratio(1, 2)), 0.25);
}

TEST(Scalar, ConversionToDoubleRounds) {
  EXPECT_EQ(rational_to_double(Rational(1, 10)), 0.1);
  EXPECT_EQ(rational_to_double(Rational(1, 3)), 1.0 / 3.0);
  EXPECT_EQ(Scalar::ratio(2, 3).to_double(), 2.0 / 3.0);
  EXPECT_EQ(abs_difference(Scalar::ratio(3, 10), Scalar::ratio(1, 5)), 0.1);
  const Rational huge(mpz_class("123456789012345678901234567890"), mpz_class("3"));
  EXPECT_NEAR(rational_to_double(huge), 4.1152263004115226e28, 1e13);
}

}  // namespace
}  // namespace gaugesim
