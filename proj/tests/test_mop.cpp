#include <gtest/gtest.h>

#include <random>

#include "hypmop/mop.hpp"
#include "test_util.hpp"

using namespace hypmop;

TEST(MultiIndex, Classify) {
  auto c1 = classify_multiindex(MultiIndex({2, 1, 2}));
  EXPECT_TRUE(c1.near_diagonal);
  EXPECT_FALSE(c1.step_line);
  auto c2 = classify_multiindex(MultiIndex({2, 2, 1}));
  EXPECT_TRUE(c2.near_diagonal);
  EXPECT_TRUE(c2.step_line);
  EXPECT_FALSE(classify_multiindex(MultiIndex({3, 1})).near_diagonal);
  EXPECT_EQ(canonical_stepline(3, 4), (std::vector<int>{2, 1, 1}));
  EXPECT_EQ(canonical_stepline(2, 0), (std::vector<int>{0, 0}));
}

TEST(MultiIndex, NearDiagonalEnumeration) {
  ParamSystem sys({0, 0, 0}, {1, 1, 1});
  auto idx = near_diagonal_indices(sys, 4);
  // sizes 1..4 in three components: 3 + 3 + 1 + 3
  EXPECT_EQ(idx.size(), 10u);
  for (auto& n : idx) EXPECT_TRUE(index_problem(sys, n).empty());
}

TEST(MultiIndex, LaguerreTailMustBeStepLine) {
  ParamSystem sys({0, rat(1, 3), rat(2, 3)}, {rat(1, 2)});
  EXPECT_TRUE(index_problem(sys, MultiIndex({1}, {1, 0})).empty());
  EXPECT_FALSE(index_problem(sys, MultiIndex({1}, {0, 1})).empty());
  EXPECT_THROW(type2_construct(sys, MultiIndex({1})), std::invalid_argument);
}

TEST(TypeII, Examples) {
  EXPECT_EQ(type2_construct(ParamSystem({0}, {0}), MultiIndex({2})).poly, (Poly{1, -6, 6}));
  EXPECT_EQ(type2_construct(ParamSystem({0}, {}), MultiIndex({}, {2})).poly, (Poly{1, -2, rat(1, 2)}));
  EXPECT_EQ(type2_construct(ParamSystem({}, {0}), MultiIndex({1})).poly, (Poly{1, -2}));
  auto monic = type2_construct(ParamSystem({0}, {0}), MultiIndex({2}), Normalization::Monic);
  EXPECT_EQ(monic.poly, (Poly{rat(1, 6), -1, 1}));
}

TEST(TypeII, OracleExamples) {
  EXPECT_EQ(type2_oracle(ParamSystem({0}, {0}), MultiIndex({2})), (Poly{1, -6, 6}));
  EXPECT_EQ(type2_oracle(ParamSystem({0}, {0}), MultiIndex({1})), (Poly{1, -2}));
  ParamSystem jp({0, rat(1, 2)}, {0, rat(1, 2)});
  auto hs = type2_construct(jp, MultiIndex({1, 1})).poly;
  EXPECT_TRUE(proportionality(type2_oracle(jp, MultiIndex({1, 1})), hs).has_value());
}

// Legendre-type check from first principles: integral of P x^k over [0,1].
TEST(TypeII, OrthogonalitySumsByHand) {
  auto res = type2_construct(ParamSystem({0}, {0}), MultiIndex({2}));
  auto rep = verify_orthogonality(res, ParamSystem({0}, {0}), MultiIndex({2}));
  EXPECT_TRUE(rep.ok());
  for (int k = 0; k < 2; ++k) {
    Rat acc = 0;
    for (int i = 0; i <= 2; ++i) acc += res.poly[i] / (i + k + 1);
    EXPECT_EQ(acc, 0);
  }
}

TEST(TypeII, PerturbedCoefficientFlagged) {
  ParamSystem sys({0}, {0});
  auto res = type2_construct(sys, MultiIndex({2}));
  res.poly.set(1, res.poly[1] + rat(1, 1000));
  EXPECT_FALSE(verify_orthogonality(res, sys, MultiIndex({2})).ok());
}

TEST(TypeII, OracleEquivalenceSweep) {
  std::mt19937_64 rng(2024);
  for (int p = 0; p <= 3; ++p)
    for (int q = 0; q <= 3; ++q) {
      if (p + q == 0) continue;
      for (int rep = 0; rep < 2; ++rep) {
        ParamSystem sys = testutil::random_system(rng, p, q);
        for (auto& n : near_diagonal_indices(sys, 6)) {
          auto res = type2_construct(sys, n);
          ASSERT_EQ(res.poly.degree(), n.size());
          EXPECT_EQ(res.poly[0], 1);
          auto oracle = type2_oracle(sys, n);
          EXPECT_TRUE(proportionality(oracle, res.poly).has_value()) << sys.str() << " " << n.str();
          EXPECT_TRUE(verify_orthogonality(res, sys, n).ok()) << sys.str() << " " << n.str();
        }
      }
    }
}

TEST(TypeI, Examples) {
  ParamSystem leg({0}, {0});
  auto A = type1_construct(leg, MultiIndex({2}));
  ASSERT_TRUE(A.closed_form);
  EXPECT_EQ(A.polys[0], (Poly{1, -2}));
  auto A1 = type1_construct(leg, MultiIndex({1}));
  EXPECT_EQ(A1.polys[0].degree(), 0);
  EXPECT_TRUE(verify_orthogonality(A1, leg, MultiIndex({1})).ok());
  auto B = type1_construct(ParamSystem({}, {0}), MultiIndex({2}));
  EXPECT_EQ(B.polys[0], (Poly{-1, 2}));
}

TEST(TypeI, MomentFormulaExamples) {
  ParamSystem leg({0}, {0});
  EXPECT_EQ(type1_moment_formula(leg, MultiIndex({2}), 1), 0);
  EXPECT_EQ(type1_moment_formula(leg, MultiIndex({2}), 3), rat(-1, 3));
  // int (1-2x) x^2 dx = -1/6 = -1/3 * 1/(1)_2
  EXPECT_EQ(type1_moment_formula(leg, MultiIndex({2}), 3) * type1_scale(leg, MultiIndex({2})), rat(-1, 6));
  ParamSystem sys({rat(1, 3), rat(1, 5)}, {rat(3, 2), rat(7, 4)});
  MultiIndex n({2, 2});
  for (int s = 1; s <= 3; ++s) EXPECT_EQ(type1_moment_formula(sys, n, s), 0);
  EXPECT_NE(type1_moment_formula(sys, n, 4), 0);
  EXPECT_EQ(type1_moment_formula(leg, MultiIndex({2}), 2), rat(-1, 3));
}

TEST(TypeI, ZeroComponentGivesZeroPolynomial) {
  ParamSystem sys({rat(1, 3), rat(1, 5)}, {rat(3, 2), rat(7, 4)});
  auto A = type1_construct(sys, MultiIndex({1, 0}));
  EXPECT_TRUE(A.polys[1].is_zero());
  EXPECT_TRUE(verify_orthogonality(A, sys, MultiIndex({1, 0})).ok());
}

TEST(TypeI, ClosedFormMatchesOracleSweep) {
  std::mt19937_64 rng(77);
  for (int p = 0; p <= 3; ++p)
    for (int q = 1; q <= 3; ++q) {
      if (p > q) continue;
      for (int rep = 0; rep < 2; ++rep) {
        ParamSystem sys = testutil::random_system(rng, p, q);
        for (auto& n : near_diagonal_indices(sys, 6)) {
          auto cf = type1_construct(sys, n);
          ASSERT_TRUE(cf.closed_form);
          auto orc = type1_oracle(sys, n);
          for (size_t j = 0; j < cf.polys.size(); ++j) EXPECT_EQ(cf.polys[j], orc.polys[j]) << sys.str() << n.str();
          EXPECT_TRUE(verify_orthogonality(cf, sys, n).ok()) << sys.str() << " " << n.str();
          for (size_t j = 0; j < cf.polys.size(); ++j)
            if (n.head[j] > 0) EXPECT_EQ(cf.polys[j].degree(), n.head[j] - 1) << sys.str() << n.str();
        }
      }
    }
}

// a_i = b_j is the removable case; the oracle is the reference.
TEST(TypeI, JacobiPineiroCancellation) {
  ParamSystem jp({0, rat(1, 2)}, {0, rat(1, 2)});
  for (auto& n : near_diagonal_indices(jp, 5)) {
    auto cf = type1_construct(jp, n);
    ASSERT_TRUE(cf.closed_form);
    auto orc = type1_oracle(jp, n);
    for (size_t j = 0; j < cf.polys.size(); ++j) EXPECT_EQ(cf.polys[j], orc.polys[j]) << n.str();
  }
}

TEST(TypeI, LaguerreOracle) {
  std::mt19937_64 rng(3);
  for (auto [p, q] : {std::pair{1, 0}, {2, 1}, {3, 1}, {2, 0}}) {
    ParamSystem sys = testutil::random_system(rng, p, q);
    for (auto& n : near_diagonal_indices(sys, 5)) {
      auto A = type1_construct(sys, n);
      EXPECT_FALSE(A.closed_form);
      EXPECT_TRUE(verify_orthogonality(A, sys, n).ok()) << sys.str() << " " << n.str();
    }
  }
}

TEST(TypeI, OracleFallbackCanBeDisabled) {
  ParamSystem bad({rat(1, 3), rat(1, 5)}, {rat(3, 2), rat(5, 2)});
  EXPECT_THROW(type1_construct(bad, MultiIndex({1, 1}), false), std::invalid_argument);
}

// Type II(n) paired with type I(n') vanishes when |n| <= |n'| - 2, and for
// n' = n + e_k the pairing is nonzero exactly at degree |n|.
TEST(Biorthogonality, ExactPairing) {
  std::mt19937_64 rng(99);
  for (auto [p, q] : {std::pair{1, 1}, {2, 2}, {1, 2}, {2, 1}, {3, 3}}) {
    ParamSystem sys = testutil::random_system(rng, p, q);
    auto idx = near_diagonal_indices(sys, 5);
    for (auto& n : idx)
      for (auto& m : idx) {
        if (n.size() > m.size() - 2) continue;
        auto P = type2_construct(sys, n).poly;
        auto A = type1_construct(sys, m);
        Rat acc = 0;
        for (int k = 0; k <= P.degree(); ++k) acc += P[k] * combined_type1_moment(sys, m, A.polys, k + 1);
        EXPECT_EQ(acc, 0) << n.str() << " vs " << m.str();
      }
    for (auto& n : idx) {
      if (n.size() > 4) continue;
      auto m = n;
      auto all = n.all();
      // first component that keeps the index valid
      for (size_t k = 0; k < all.size(); ++k) {
        auto t = all;
        ++t[k];
        MultiIndex cand = n.tail ? MultiIndex(std::vector<int>(t.begin(), t.begin() + n.head.size()),
                                              std::vector<int>(t.begin() + n.head.size(), t.end()))
                                 : MultiIndex(t);
        if (index_problem(sys, cand).empty()) {
          m = cand;
          break;
        }
      }
      auto P = type2_construct(sys, n).poly;
      auto A = type1_construct(sys, m);
      Rat acc = 0;
      for (int k = 0; k <= P.degree(); ++k) acc += P[k] * combined_type1_moment(sys, m, A.polys, k + 1);
      EXPECT_NE(acc, 0) << n.str() << " vs " << m.str();
    }
  }
}

TEST(Pearson, JacobiExample) {
  ParamSystem sys({0}, {1});
  auto pd = pearson_data(sys);
  ASSERT_EQ(pd.c.size(), 1u);
  EXPECT_EQ(pd.c[0] + sys.b[0], 0);
  // s = 2: s*w(s) = 1/3 = (s+2) w(s+1)
  Rat lhs = (pd.c[0] + 2 + sys.b[0]) * rel_mellin(sys, WeightId::w(1), 2);
  Rat rhs = (sys.b[0] + 3) * rel_mellin(sys, WeightId::w(1), 3);
  EXPECT_EQ(lhs, rat(1, 3));
  EXPECT_EQ(rhs, rat(1, 3));
  EXPECT_TRUE(pearson_verify(sys, pd).ok());
}

TEST(Pearson, LaguerreExample) {
  ParamSystem sys({0}, {});
  auto pd = pearson_data(sys);
  EXPECT_TRUE(pd.c.empty());
  ASSERT_EQ(pd.d.size(), 1u);
  EXPECT_EQ(pd.d[0], -1);
  EXPECT_TRUE(pearson_verify(sys, pd).ok());
}

// d_k from Taylor data at s = 1, independent of the division route:
// d_k = -R_k + (-1)^{k+1} sum_j c_j/(b_j+1)^{k+1}, R the Taylor series at 1 of
// prod(s+a)/prod(s+b).
TEST(Pearson, LaguerreDFromTaylorOracle) {
  std::mt19937_64 rng(8);
  for (auto [p, q] : {std::pair{2, 1}, {3, 1}, {3, 2}, {2, 0}, {4, 2}}) {
    for (int rep = 0; rep < 3; ++rep) {
      ParamSystem sys = testutil::random_system(rng, p, q);
      auto pd = pearson_data(sys);
      const int pq = p - q;
      Poly num = Poly::constant(1), den = Poly::constant(1);
      for (auto& ai : sys.a) num = num * Poly{ai, 1};
      for (auto& bj : sys.b) den = den * Poly{bj, 1};
      RatVec R = series_divide(num.taylor_shift(1).coeffs(), den.taylor_shift(1).coeffs(), pq);
      for (int k = 0; k < pq; ++k) {
        Rat s = 0;
        for (int j = 0; j < q; ++j) {
          Rat pw = 1;
          for (int t = 0; t <= k; ++t) pw *= sys.b[j] + 1;
          s += pd.c[j] / pw;
        }
        Rat expect = -R[k] + (k % 2 ? s : -s);
        EXPECT_EQ(pd.d[k], expect) << sys.str() << " k=" << k;
      }
      EXPECT_TRUE(pearson_verify(sys, pd).ok()) << sys.str();
    }
  }
}

TEST(Pearson, RandomSystemsAllSettings) {
  std::mt19937_64 rng(55);
  for (int p = 0; p <= 3; ++p)
    for (int q = 0; q <= 3; ++q) {
      if (p + q == 0) continue;
      ParamSystem sys = testutil::random_system(rng, p, q);
      auto pd = pearson_data(sys);
      EXPECT_TRUE(pearson_verify(sys, pd).ok()) << sys.str();
    }
}

TEST(Pearson, NegativeControlAndErrors) {
  ParamSystem sys({rat(1, 3), rat(1, 5)}, {rat(3, 2), rat(7, 4)});
  auto pd = pearson_data(sys);
  pd.c[1] += rat(1, 7);
  EXPECT_FALSE(pearson_verify(sys, pd).ok());
  EXPECT_THROW(pearson_data(ParamSystem({0, 0}, {1, 1})), std::invalid_argument);
}
