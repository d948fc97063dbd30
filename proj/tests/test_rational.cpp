#include <gtest/gtest.h>

#include "ucvrp/rational.hpp"

using ucvrp::Rational;

TEST(Rational, ParsesDecimalsExactly) {
  EXPECT_EQ(Rational::parse("0.1") + Rational::parse("0.2"), Rational::parse("0.3"));
  EXPECT_EQ(Rational::parse("1.50"), Rational(3, 2));
  EXPECT_EQ(Rational::parse("-0.25"), Rational(-1, 4));
  EXPECT_EQ(Rational::parse("3/12"), Rational(1, 4));
  EXPECT_EQ(Rational::parse("0.000000000000000001"), Rational(1, 1000000000000000000L));
}

TEST(Rational, RejectsMalformed) {
  for (const char* bad : {"", "1.", ".5x", "1e3", "1/0", "abc", "0.0000000000000000001"})
    EXPECT_THROW(Rational::parse(bad), std::invalid_argument) << bad;
}

TEST(Rational, Printing) {
  EXPECT_EQ(Rational(3, 10).str(), "0.3");
  EXPECT_EQ(Rational(1, 3).str(), "1/3");
  EXPECT_EQ(Rational(4).str(), "4");
  EXPECT_EQ(Rational(-5, 8).str(), "-0.625");
  EXPECT_EQ(Rational(6, 4).fraction(), "3/2");
}

TEST(Rational, CanonicalAndOrdered) {
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
  EXPECT_EQ(Rational(2, -4), Rational(-1, 2));
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
  EXPECT_EQ(pow(Rational(1, 2), 5), Rational(1, 32));
  EXPECT_EQ(Rational(7, 2).floor_long(), 3);
  EXPECT_EQ(Rational(-7, 2).floor_long(), -4);
  EXPECT_EQ(Rational(1, 2).hash(), Rational(2, 4).hash());
}
