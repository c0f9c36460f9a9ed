#include <gtest/gtest.h>

#include <random>

#include "hhrec/closed_form.hpp"
#include "hhrec/invariants.hpp"

using hhrec::BigInt;
using hhrec::Error;
using hhrec::ErrorKind;
using hhrec::Rational;
using hhrec::RecurrenceSpec;

namespace {

RecurrenceSpec<Rational> ones(int k, Rational a = 1) {
  return {k, a, std::vector<Rational>(static_cast<std::size_t>(2 * k + 1), Rational(1))};
}

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(1, 9), den(1, 5), sign(0, 1);
  return Rational(BigInt(sign(rng) ? num(rng) : -num(rng)), BigInt(den(rng)));
}

}  // namespace

TEST(Chebyshev, Examples) {
  const Rational t = Rational::parse("13/2");
  EXPECT_EQ(hhrec::chebyshev_tu(t, 0), std::make_pair(Rational(1), Rational(1)));
  EXPECT_EQ(hhrec::chebyshev_tu(t, 1), std::make_pair(t, Rational(2) * t));
  EXPECT_EQ(hhrec::chebyshev_tu(t, -1), std::make_pair(t, Rational(0)));
  EXPECT_EQ(hhrec::chebyshev_tu(t, 2), std::make_pair(Rational::parse("167/2"), Rational(168)));
}

TEST(Chebyshev, PellAndThreeTermRelations) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    const Rational t = random_rational(rng);
    for (std::int64_t m = -20; m <= 20; ++m) {
      const auto [T, U] = hhrec::chebyshev_tu(t, m);
      const auto [Tm1, Um1] = hhrec::chebyshev_tu(t, m - 1);
      const auto [Tp1, Up1] = hhrec::chebyshev_tu(t, m + 1);
      EXPECT_EQ(T * T - (t * t - Rational(1)) * Um1 * Um1, Rational(1)) << "m=" << m;
      EXPECT_EQ(Tp1, Rational(2) * t * T - Tm1);
      EXPECT_EQ(Up1, Rational(2) * t * U - Um1);
      EXPECT_EQ(hhrec::chebyshev_tu(t, -m).first, T);
    }
  }
}

TEST(ClosedForm, GoldenTriple) {
  const auto w = hhrec::generate(ones(1), -2, 4);
  const auto c = hhrec::extract_coeffs(w, Rational(14));
  EXPECT_EQ(c.point.t, Rational::parse("13/2"));
  ASSERT_EQ(c.triples.size(), 2u);
  EXPECT_EQ(c.triples[0].q, Rational::parse("5/11"));
  EXPECT_EQ(c.triples[0].r, Rational::parse("144/143"));
  EXPECT_EQ(c.triples[0].s, Rational::parse("-66/143"));
  EXPECT_EQ(c.triples[0].q + c.triples[0].r + c.triples[0].s, Rational(1));
  EXPECT_EQ(hhrec::eval_closed_form(c, 0), Rational(1));
  EXPECT_EQ(hhrec::eval_closed_form(c, 4), Rational(7));
  const auto far = hhrec::generate(ones(1), 0, 100);
  EXPECT_EQ(hhrec::eval_closed_form(c, 100), far[100]);
}

TEST(ClosedForm, DegenerateT) {
  // All-ones with k = 1 gives K = 3 + 8a + 3a^2, so a = -8/3 gives K = 3 (t = 1).
  const auto spec = ones(1, Rational::parse("-8/3"));
  const auto K = hhrec::k_formula(spec).K;
  ASSERT_EQ(K, Rational(3));
  const auto w = hhrec::generate(spec, -2, 4);
  try {
    hhrec::extract_coeffs(w, K);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateT);
  }
  EXPECT_THROW(hhrec::extract_coeffs(w, Rational(1)), Error);
}

TEST(ClosedForm, NeedsWindow) {
  const auto w = hhrec::generate(ones(2), 0, 8);
  EXPECT_THROW(hhrec::extract_coeffs(w, Rational(28)), Error);
}

TEST(ClosedForm, MatchesIterationOnRandomSeeds) {
  std::mt19937_64 rng(32);
  for (int k = 1; k <= 3; ++k) {
    int done = 0;
    while (done < 10) {
      RecurrenceSpec<Rational> spec{k, random_rational(rng), {}};
      for (int i = 0; i < 2 * k + 1; ++i) spec.init.push_back(random_rational(rng));
      try {
        const auto w = hhrec::generate(spec, -6 * k, 12 * k);
        const auto c = hhrec::extract_coeffs(w, hhrec::k_formula(spec).K);
        for (std::int64_t n = -6 * k; n <= 12 * k; ++n) EXPECT_EQ(hhrec::eval_closed_form(c, n), w[n]) << n;
        ++done;
      } catch (const Error& e) {
        EXPECT_TRUE(hhrec::is_degeneracy(e.kind()));
      }
    }
  }
}
