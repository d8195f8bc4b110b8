#include <gtest/gtest.h>

#include <random>

#include "hypmop/exact_core.hpp"
#include "test_util.hpp"

using namespace hypmop;

TEST(Poch, Examples) {
  EXPECT_EQ(poch(Rat(2), 3), 24);
  EXPECT_EQ(poch(RatVec{1, 2}, 2), 12);
  EXPECT_EQ(poch(Rat(-2), 2), 2);
  EXPECT_EQ(poch(rat(7, 3), 0), 1);
  EXPECT_THROW(poch(Rat(1), -1), std::invalid_argument);
}

TEST(Poch, SplitsAcrossLengths) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    Rat x = testutil::random_rat(rng, -5, 5, 9);
    for (int j = 0; j <= 12; j += 3)
      for (int k = 0; k <= 12; k += 4) EXPECT_EQ(poch(x, j + k), poch(x, j) * poch(x + j, k));
  }
}

TEST(ParseRat, Forms) {
  EXPECT_EQ(parse_rat("3/6"), rat(1, 2));
  EXPECT_EQ(parse_rat("-0.25"), rat(-1, 4));
  EXPECT_EQ(parse_rat("7"), 7);
  EXPECT_EQ(parse_rat_list("0,1/2, -1/3"), (RatVec{0, rat(1, 2), rat(-1, 3)}));
  EXPECT_THROW(parse_rat("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rat("abc"), std::invalid_argument);
  Rat r = parse_rat("10/4");
  EXPECT_EQ(r.get_num(), 5);
  EXPECT_EQ(r.get_den(), 2);
}

TEST(RelMoment, Examples) {
  ParamSystem s1({rat(1, 2)}, {rat(3, 2)});
  EXPECT_EQ(rel_moment(s1, WeightId::w(1), 1), rat(6, 35));
  EXPECT_EQ(rel_moment(s1, WeightId::w0(), 0), 1);
  ParamSystem lag({0}, {});
  EXPECT_EQ(rel_moment(lag, WeightId::v(2), 3), 18);
  EXPECT_THROW(rel_moment(s1, WeightId::v(1), 2), std::invalid_argument);
  EXPECT_THROW(rel_moment(lag, WeightId::w(1), 2), std::invalid_argument);
}

TEST(RelMoment, ShiftedWeightTimesFactorIsBase) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    int p = 1 + trial % 3, q = 1 + (trial / 3) % 3;
    ParamSystem sys = testutil::random_system(rng, p, q);
    for (int j = 1; j <= sys.r(); ++j)
      for (int m = 0; m < 8; ++m)
        EXPECT_EQ(rel_moment(sys, WeightId::w(j), m) * (sys.b[j - 1] + m + 1), rel_moment(sys, WeightId::w0(), m));
  }
}

TEST(RelMoment, MatchesGammaRatio) {
  // Gamma(m+a+1)Gamma(b+1)/(Gamma(m+b+2)Gamma(a+1)) for a=1/2, b=3/2 in floating point.
  ParamSystem s({rat(1, 2)}, {rat(3, 2)});
  for (int m = 0; m < 6; ++m) {
    double expect = std::exp(std::lgamma(m + 1.5) + std::lgamma(2.5) - std::lgamma(m + 3.5) - std::lgamma(1.5));
    EXPECT_NEAR(rel_moment(s, WeightId::w(1), m).get_d(), expect, 1e-14);
  }
}

TEST(PartialFractions, Examples) {
  auto pf = partial_fractions(Poly{1, -1}, {{0, 2}});
  EXPECT_EQ(pf.coefficient(0, 1), -1);
  EXPECT_EQ(pf.coefficient(0, 2), 1);

  auto tel = partial_fractions(Poly{1}, {{0, 1}, {-1, 1}});
  EXPECT_EQ(tel.coefficient(0, 1), 1);
  EXPECT_EQ(tel.coefficient(1, 1), -1);

  auto res = partial_fractions(Poly{1, -1}, {{0, 1}, {-1, 1}});
  EXPECT_EQ(res.coefficient(0, 1), 1);
  EXPECT_EQ(res.coefficient(1, 1), -2);
}

TEST(PartialFractions, Errors) {
  EXPECT_THROW(partial_fractions(Poly{1}, {{0, 1}, {0, 2}}), std::invalid_argument);
  EXPECT_THROW(partial_fractions(Poly{0, 0, 1}, {{0, 1}}), std::invalid_argument);
  EXPECT_THROW(partial_fractions(Poly{0, 0, 0, 1}, {{0, 1}}, 1), std::invalid_argument);
}

TEST(PartialFractions, RecombinesOnRandomPoints) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Pole> poles;
    int total = 0;
    int npoles = 1 + trial % 4;
    for (int i = 0; i < npoles; ++i) {
      Rat loc;
      bool dup;
      do {
        loc = testutil::random_rat(rng, -4, 4, 5);
        dup = false;
        for (auto& p : poles) dup |= p.location == loc;
      } while (dup);
      int m = 1 + static_cast<int>(rng() % 3);
      poles.push_back({loc, m});
      total += m;
    }
    int extra = static_cast<int>(rng() % 3);
    RatVec num(total + extra);
    for (auto& c : num) c = testutil::random_rat(rng, -6, 6, 7);
    Poly numer(num);
    Rat center = testutil::random_rat(rng, -2, 2, 3);
    auto pf = partial_fractions(numer, poles, extra, center);
    Poly den = pf.denominator();
    EXPECT_EQ(pf.recombine(), numer);
    int tested = 0;
    while (tested < 20) {
      Rat s = testutil::random_rat(rng, -9, 9, 11);
      if (sgn(den.eval(s)) == 0) continue;
      EXPECT_EQ(pf.eval(s), numer.eval(s) / den.eval(s));
      ++tested;
    }
  }
}

TEST(Lcm, Examples) {
  EXPECT_EQ(lcm_range(1), 1);
  EXPECT_EQ(lcm_range(6), 60);
  EXPECT_EQ(lcm_range(10), 2520);
  EXPECT_THROW(lcm_range(0), std::invalid_argument);
}

TEST(Nullspace, OneDimensional) {
  RatMatrix M = {{1, 1, 1}, {rat(1, 2), rat(1, 3), rat(1, 4)}};
  auto ns = nullspace(M, 3);
  ASSERT_EQ(ns.size(), 1u);
  for (auto& row : M) {
    Rat acc = 0;
    for (int k = 0; k < 3; ++k) acc += row[k] * ns[0][k];
    EXPECT_EQ(acc, 0);
  }
}

TEST(Poly, TaylorShiftAndDivision) {
  Poly p{1, -6, 6};
  EXPECT_EQ(p.taylor_shift(1).eval(Rat(2)), p.eval(Rat(3)));
  auto [q, r] = divmod(p, Poly{-1, 1});
  EXPECT_EQ(q * Poly({-1, 1}) + r, p);
  EXPECT_EQ(p.monic(), (Poly{rat(1, 6), -1, 1}));
  EXPECT_EQ(proportionality(p * Rat(3), p).value(), 3);
  EXPECT_FALSE(proportionality(p, Poly{1, -2}).has_value());
}
