#include <gtest/gtest.h>

#include <random>

#include "hhrec/rational.hpp"

using hhrec::BigInt;
using hhrec::Error;
using hhrec::ErrorKind;
using hhrec::Rational;

namespace {

void expect_canonical(const Rational& r) {
  EXPECT_GT(r.den(), 0);
  BigInt g;
  mpz_gcd(g.get_mpz_t(), r.num().get_mpz_t(), r.den().get_mpz_t());
  EXPECT_EQ(g, 1) << r;
}

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(Rational::parse("3/4").to_string(), "3/4");
  EXPECT_EQ(Rational::parse("-6/8").to_string(), "-3/4");
  EXPECT_EQ(Rational::parse("+5").to_string(), "5");
  EXPECT_EQ(Rational::parse("4/2").to_string(), "2");
  EXPECT_EQ(Rational::parse("0/7").to_string(), "0");
  EXPECT_EQ(Rational::parse("123456789012345678901234567890").to_string(), "123456789012345678901234567890");
}

TEST(Rational, ParseRejectsMalformed) {
  for (const char* bad : {"", "1/", "/2", "1/-2", "1 /2", "a", "1.5", "--1", "1/2/3"}) {
    try {
      Rational::parse(bad);
      ADD_FAILURE() << "accepted '" << bad << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Parse) << bad;
    }
  }
  try {
    Rational::parse("1/0");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivisionByZero);
  }
}

TEST(Rational, Arithmetic) {
  const Rational x = Rational::parse("2/3");
  const Rational y = Rational::parse("-5/6");
  EXPECT_EQ(x + y, Rational::parse("-1/6"));
  EXPECT_EQ(x - y, Rational::parse("3/2"));
  EXPECT_EQ(x * y, Rational::parse("-5/9"));
  EXPECT_EQ(x / y, Rational::parse("-4/5"));
  EXPECT_EQ(-x, Rational::parse("-2/3"));
  EXPECT_EQ(y.inverse(), Rational::parse("-6/5"));
  EXPECT_TRUE(Rational(0).is_zero());
  EXPECT_TRUE(Rational(7).is_integer());
  EXPECT_FALSE(x.is_integer());
  EXPECT_LT(y, x);
  EXPECT_EQ(y.sign(), -1);
}

TEST(Rational, DivisionByZeroThrows) {
  EXPECT_THROW(Rational(1) / Rational(0), Error);
  EXPECT_THROW(Rational(0).inverse(), Error);
}

TEST(Rational, CanonicalAfterEveryOperation) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 30);
  for (int i = 0; i < 500; ++i) {
    const Rational x(BigInt(num(rng)), BigInt(den(rng)));
    Rational y(BigInt(num(rng)), BigInt(den(rng)));
    if (y.is_zero()) y = Rational(1);
    for (const auto& r : {x + y, x - y, x * y, x / y}) expect_canonical(r);
    // Equality agrees with cross-multiplication.
    EXPECT_EQ(x == y, x.num() * y.den() == y.num() * x.den());
  }
}

TEST(Rational, FloorDivAndMod) {
  EXPECT_EQ(hhrec::floor_div(7, 2), 3);
  EXPECT_EQ(hhrec::floor_div(-7, 2), -4);
  EXPECT_EQ(hhrec::floor_mod(-7, 2), 1);
  for (std::int64_t n = -25; n <= 25; ++n)
    for (std::int64_t d : {1, 2, 4, 6}) {
      const auto m = hhrec::floor_div(n, d);
      const auto j = hhrec::floor_mod(n, d);
      EXPECT_EQ(d * m + j, n);
      EXPECT_GE(j, 0);
      EXPECT_LT(j, d);
    }
}
