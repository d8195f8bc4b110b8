#include <gtest/gtest.h>

#include <gmpxx.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hypmop/freeconv.hpp"
#include "test_util.hpp"

using namespace hypmop;

namespace {

const std::vector<std::pair<int, int>> kSettings = {{1, 1}, {2, 2}, {1, 0}, {2, 1}, {3, 1}, {0, 1}, {1, 2}, {2, 3}};

Poly power_of_linear(const Rat& root, int d) { return Poly::linear_root(root).pow(d); }

MomentSeries<Rat> rat_series(std::initializer_list<long> v) {
  MomentSeries<Rat> m;
  for (long x : v) m.m.push_back(Rat(x));
  return m;
}

Rat binom(long n, long k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

double arcsine(double x) { return 1 / (std::numbers::pi * std::sqrt(x * (1 - x))); }

}  // namespace

TEST(Ffmc, Examples) {
  EXPECT_EQ(ffmc(Poly{-2, 1}, Poly{-3, 1}, 1), (Poly{-6, 1}));
  EXPECT_EQ(ffmc(power_of_linear(1, 2), power_of_linear(2, 2), 2), (Poly{4, -8, 1}));
  Poly q{5, -1, 3, 2};
  EXPECT_EQ(ffmc(Poly::monomial(3), q, 3), Poly::monomial(3, q[3]));
}

TEST(Ffmc, DegreeOneHypergeometricPair) {
  Rat A1 = rat(3, 2), B1 = rat(5, 7), A2 = rat(-1, 3), B2 = rat(2, 9);
  Poly out = ffmc(Poly{1, -B1 / A1}, Poly{1, -B2 / A2}, 1);
  auto s = proportionality(out, Poly{1, -B1 * B2 / (A1 * A2)});
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(*s, -1);
  EXPECT_EQ(ffmc(Poly{1, -B1 / A1}, Poly{1, -B2 / A2}, 1, FfmcConvention::Binomial), out);
}

TEST(Ffmc, BinomialConventionOnPowersOfLinears) {
  // (x-a)^d [x]_d (x-b)^d = (x-ab)^d
  std::mt19937_64 rng(11);
  for (int d = 1; d <= 6; ++d) {
    Rat a = testutil::random_rat(rng, -3, 3, 5), b = testutil::random_rat(rng, -3, 3, 5);
    EXPECT_EQ(ffmc(power_of_linear(a, d), power_of_linear(b, d), d, FfmcConvention::Binomial), power_of_linear(a * b, d));
  }
  EXPECT_EQ(ffmc(power_of_linear(1, 2), power_of_linear(2, 2), 2, FfmcConvention::Binomial), power_of_linear(2, 2));
}

TEST(Ffmc, CommutativeAssociativeAndUnits) {
  std::mt19937_64 rng(5);
  auto rand_poly = [&](int d) {
    RatVec c(d + 1);
    for (auto& x : c) x = testutil::random_rat(rng, -4, 4, 6);
    return Poly(c);
  };
  for (auto conv : {FfmcConvention::AsDisplayed, FfmcConvention::Binomial})
    for (int d = 0; d <= 6; ++d) {
      Poly p = rand_poly(d), q = rand_poly(d), r = rand_poly(d);
      EXPECT_EQ(ffmc(p, q, d, conv), ffmc(q, p, d, conv));
      EXPECT_EQ(ffmc(ffmc(p, q, d, conv), r, d, conv), ffmc(p, ffmc(q, r, d, conv), d, conv));
      EXPECT_EQ(ffmc(Poly::monomial(d), q, d, conv), Poly::monomial(d, q[d]));
    }
  // units: p[k] = 1 for the displayed product, (x-1)^d for the binomial one
  for (int d = 1; d <= 5; ++d) {
    Poly q = rand_poly(d);
    RatVec one(d + 1);
    for (int k = 0; k <= d; ++k) one[d - k] = (k % 2) ? -1 : 1;
    EXPECT_EQ(ffmc(Poly(one), q, d), q);
    EXPECT_EQ(ffmc(power_of_linear(1, d), q, d, FfmcConvention::Binomial), q);
  }
  EXPECT_THROW(ffmc(Poly{1, 1, 1}, Poly{1}, 1), std::invalid_argument);
}

TEST(Decomposition, JacobiEqualParameters) {
  ParamSystem sys({rat(1, 3), rat(1, 5)}, {rat(1, 3), rat(1, 5)});
  auto rep = verify_decomposition(sys, MultiIndex({1, 1}));
  EXPECT_TRUE(rep.report.ok());
  ASSERT_EQ(rep.items.size(), 2u);
  for (auto& it : rep.items) {
    ASSERT_TRUE(it.scalar);
    // L factors give (-1)^{N(L-1)}; N=2 here.
    EXPECT_EQ(*it.scalar, 1);
  }
  // The displayed (unnormalized) product does not factor at degree 2.
  EXPECT_FALSE(rep.items[0].displayed_scalar.has_value());
}

TEST(Decomposition, LaguerreStepIndex) {
  ParamSystem sys({rat(1, 4), rat(2, 3)}, {rat(3, 2)});
  auto rep = verify_decomposition(sys, MultiIndex({1}, {1}));
  EXPECT_TRUE(rep.report.ok()) << rep.report.first_failure()->name;
  ASSERT_EQ(rep.items.size(), 2u);
  EXPECT_EQ(rep.items[1].name, "Laguerre factors");
  // by hand: target 3F2... of degree 2; the first factor is P(x; a, (b, a_2)) for index (1,1)
  EXPECT_EQ(rep.items[1].factors[0], type2_construct(ParamSystem(sys.a, {rat(3, 2), rat(2, 3)}), MultiIndex({1, 1})).poly);
  EXPECT_EQ(rep.items[1].factors[1], (Poly{1, rat(-2) / rat(8, 3), Rat(2) / (rat(8, 3) * rat(11, 3) * 2)}));
}

TEST(Decomposition, SweepAllSettings) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (auto [p, q] : kSettings)
    for (int draw = 0; draw < 2; ++draw) {
      auto sys = testutil::random_system(rng, p, q);
      for (auto& n : near_diagonal_indices(sys, 6)) {
        auto rep = verify_decomposition(sys, n);
        ASSERT_TRUE(rep.report.ok()) << sys.str() << " " << n.str();
        for (auto& it : rep.items) {
          const int L = static_cast<int>(it.factors.size());
          EXPECT_EQ(*it.scalar, ((n.size() * (L - 1)) % 2) ? -1 : 1) << it.name;
        }
        ++checked;
      }
    }
  EXPECT_GT(checked, 50);
}

TEST(Decomposition, PerturbedTargetFails) {
  ParamSystem sys({rat(1, 3)}, {rat(7, 5)});
  auto rep = verify_decomposition(sys, MultiIndex({3}));
  ASSERT_TRUE(rep.report.ok());
  Poly bad = rep.items[0].target;
  bad.set(1, bad[1] + 1);
  EXPECT_FALSE(proportionality(bad, rep.items[0].product).has_value());
}

TEST(STransform, PointMass) {
  auto ms = rat_series({1, 1, 1, 1, 1, 1});
  auto s = s_transform(ms);
  EXPECT_EQ(s, (RatVec{1, 0, 0, 0, 0, 0}));
  EXPECT_EQ(stransform_roundtrip(ms).m, ms.m);
}

TEST(STransform, MarchenkoPastur) {
  auto ms = rat_series({1, 2, 5, 14});
  EXPECT_EQ(s_transform(ms), (RatVec{1, -1, 1, -1}));
  EXPECT_EQ(stransform_roundtrip(ms).m, ms.m);
}

TEST(STransform, RandomRoundTrip) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 20; ++t) {
    MomentSeries<Rat> ms;
    const int K = 1 + t % 9;
    for (int k = 0; k < K; ++k) ms.m.push_back(testutil::random_rat(rng, -5, 5, 9));
    if (sgn(ms.m[0]) == 0) ms.m[0] = 1;
    EXPECT_EQ(stransform_roundtrip(ms).m, ms.m);
  }
  EXPECT_THROW(s_transform(rat_series({0, 1})), std::domain_error);
}

TEST(STransform, HighPrecisionRoundTrip) {
  // mpf temporaries take the default precision
  const auto saved = mpf_get_default_prec();
  mpf_set_default_prec(256);
  MomentSeries<mpf_class> ms;
  for (int k = 1; k <= 8; ++k) ms.m.push_back(mpf_class(1.0 / (k + 0.5), 256));
  auto back = stransform_roundtrip(ms);
  for (int k = 1; k <= 8; ++k) EXPECT_LT(std::fabs(mpf_class(back.at(k) - ms.at(k)).get_d()), 1e-60);
  mpf_set_default_prec(saved);
}

TEST(FreeMult, IdentityAndFirstMoment) {
  std::mt19937_64 rng(3);
  MomentSeries<Rat> mu;
  for (int k = 0; k < 7; ++k) mu.m.push_back(testutil::random_rat(rng, 1, 4, 5));
  auto delta = rat_series({1, 1, 1, 1, 1, 1, 1});
  EXPECT_EQ(free_mult_moments(delta, mu, 7).m, mu.m);
  MomentSeries<Rat> nu;
  for (int k = 0; k < 7; ++k) nu.m.push_back(testutil::random_rat(rng, 1, 4, 5));
  EXPECT_EQ(free_mult_moments(mu, nu, 7).at(1), mu.at(1) * nu.at(1));
  EXPECT_EQ(free_mult_moments(mu, nu, 7).m, free_mult_moments(nu, mu, 7).m);
}

TEST(FreeMult, FussCatalan) {
  // MP^{[x]s} has moments C((s+1)k, k)/(s k + 1).
  MomentSeries<Rat> mp;
  for (int k = 1; k <= 8; ++k) mp.m.push_back(binom(2 * k, k) / (k + 1));
  auto two = free_mult_moments(mp, mp, 8);
  EXPECT_EQ(two.at(1), 1);
  EXPECT_EQ(two.at(2), 3);
  auto three = free_mult_moments<Rat>({mp, mp, mp}, 8);
  for (int k = 1; k <= 8; ++k) {
    EXPECT_EQ(two.at(k), binom(3 * k, k) / (2 * k + 1));
    EXPECT_EQ(three.at(k), binom(4 * k, k) / (3 * k + 1));
  }
}

TEST(Density, ClosedFormSpecialCases) {
  auto u0 = DensityModel::deformed_arcsin(0);
  auto v1 = DensityModel::vjacobi(1);
  for (double x : {0.01, 0.2, 0.5, 0.77, 0.99}) {
    EXPECT_NEAR(density_eval(u0, x), arcsine(x), 1e-12 * arcsine(x));
    EXPECT_NEAR(density_eval(v1, x), arcsine(x), 1e-9 * arcsine(x));
  }
  EXPECT_DOUBLE_EQ(support(DensityModel::deformed_arcsin(2)).hi, 0.75);
  EXPECT_THROW(density_eval(DensityModel::deformed_arcsin(2), 0.8), std::domain_error);
  EXPECT_THROW(density_eval(u0, 1.0), std::domain_error);
  EXPECT_THROW(density_eval(DensityModel::point_mass_at_one(), 1.0), std::domain_error);
}

TEST(Density, UnitMass) {
  for (double a : {0.0, 0.5, 1.0, 2.0, 3.0})
    EXPECT_NEAR(density_moment(DensityModel::deformed_arcsin(a), 0), 1.0, 1e-8) << a;
  for (int r = 1; r <= 4; ++r) EXPECT_NEAR(density_moment(DensityModel::vjacobi(r), 0), 1.0, 1e-8) << r;
  EXPECT_NEAR(density_moment(DensityModel::marchenko_pastur(), 0), 1.0, 1e-8);
}

TEST(Density, KnownMoments) {
  EXPECT_NEAR(density_moment(DensityModel::deformed_arcsin(0), 1), 0.5, 1e-10);
  // arcsine: m_k = C(2k,k)/4^k
  auto u0 = density_moments(DensityModel::deformed_arcsin(0), 6);
  for (int k = 1; k <= 6; ++k) EXPECT_NEAR(u0.at(k), binom(2 * k, k).get_d() / std::pow(4, k), 1e-10);
  auto mp = density_moments(DensityModel::marchenko_pastur(), 6);
  for (int k = 1; k <= 6; ++k) EXPECT_NEAR(mp.at(k), Rat(binom(2 * k, k) / (k + 1)).get_d(), 1e-9 * mp.at(k));
}

TEST(Density, MixtureLinearity) {
  for (int r : {2, 3}) {
    auto mix = DensityModel::delta_arcsine_mixture(r);
    double m1 = density_moment(mix, 1);
    EXPECT_NEAR(m1, (1 - 1.0 / r) + density_moment(DensityModel::deformed_arcsin(r - 1), 1) / r, 1e-14);
    EXPECT_NEAR(density_moment(mix, 0), 1.0, 1e-8);
  }
}

TEST(Density, DeformedArcsinStieltjesRelation) {
  // S summed from the moment series far from the support
  for (double a : {0.0, 1.0, 2.5}) {
    auto ms = density_moments(DensityModel::deformed_arcsin(a), 40);
    for (Complex z : {Complex(-5, 0), Complex(6, 0), Complex(0, 5)}) {
      auto S = stieltjes_from_moments(ms, z);
      EXPECT_LT(std::abs(stieltjes_residual(StieltjesEquation::deformed_arcsin(a), z, S)), 1e-8) << a << " " << z;
    }
  }
}

TEST(Density, VJacobiTwoRoutes) {
  // phi-parametrized density against the algebraic-equation density
  for (int r = 1; r <= 4; ++r) {
    auto v = DensityModel::vjacobi(r);
    auto law = DensityModel::jacobi_laguerre_law(r, r);
    for (double x : {0.02, 0.1, 0.35, 0.6, 0.9, 0.98})
      EXPECT_NEAR(density_eval(v, x), density_eval(law, x), 1e-9 * density_eval(v, x)) << r << " " << x;
  }
}

TEST(Density, FreeProductMatchesVJacobi) {
  for (int r : {2, 3}) {
    std::vector<DensityModel> ps(r, DensityModel::delta_arcsine_mixture(r));
    auto fp = density_moments(DensityModel::free_product(ps), 8);
    auto vj = density_moments(DensityModel::vjacobi(r), 8);
    for (int k = 1; k <= 8; ++k) EXPECT_NEAR(fp.at(k), vj.at(k), 1e-6) << r << " " << k;
  }
}

TEST(Density, JacobiLaguerreLaw) {
  auto mp = DensityModel::marchenko_pastur();
  auto l10 = DensityModel::jacobi_laguerre_law(1, 0);
  for (double x : {0.1, 1.0, 2.5, 3.9}) EXPECT_NEAR(density_eval(l10, x), density_eval(mp, x), 1e-9);
  EXPECT_NEAR(support(l10).hi, 4.0, 1e-9);
  // MP^{[x]2}: right edge 27/4
  EXPECT_NEAR(support(DensityModel::jacobi_laguerre_law(2, 0)).hi, 6.75, 1e-7);

  QuadConfig cfg;
  for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 0}, {2, 1}, {3, 1}, {3, 2}}) {
    auto law = DensityModel::jacobi_laguerre_law(p, q);
    auto iv = support(law);
    auto algebra = density_moments(law, 4);
    EXPECT_NEAR(detail::integrate([&](double x) { return density_eval(law, x); }, iv.lo, iv.hi, cfg), 1.0, 1e-6);
    for (int k = 1; k <= 4; ++k) {
      double quad = detail::integrate([&](double x) { return std::pow(x, k) * density_eval(law, x); }, iv.lo, iv.hi, cfg);
      EXPECT_NEAR(quad, algebra.at(k), 1e-6 * algebra.at(k)) << p << "," << q << " k=" << k;
    }
  }
}

TEST(Density, Cdf) {
  QuadConfig cfg;
  auto v2 = DensityModel::vjacobi(2);
  double prev = 0;
  for (double x = 0.05; x < 1; x += 0.05) {
    double c = density_cdf(v2, x, cfg);
    EXPECT_GT(c, prev);
    prev = c;
  }
  EXPECT_NEAR(density_cdf(v2, 0.999999, cfg), 1.0, 1e-3);
  double direct = detail::integrate([&](double t) { return density_eval(v2, t); }, 0.0, 0.3, cfg);
  EXPECT_NEAR(density_cdf(v2, 0.3, cfg), direct, 1e-8);
  EXPECT_NEAR(density_cdf(DensityModel::deformed_arcsin(0), 0.5, cfg), 0.5, 1e-10);
  auto mix = DensityModel::delta_arcsine_mixture(2);
  EXPECT_NEAR(density_cdf(mix, 0.999, cfg), 0.5, 1e-8);
  EXPECT_DOUBLE_EQ(density_cdf(mix, 1.0, cfg), 1.0);
}

TEST(Stieltjes, Arcsine) {
  const Complex z(-1, 0);
  const Complex S = 1.0 / (std::sqrt(z) * std::sqrt(z - 1.0));
  EXPECT_NEAR(S.real(), -1 / std::sqrt(2.0), 1e-15);
  EXPECT_LT(std::abs(stieltjes_residual(StieltjesEquation::jacobi(1), z, S)), 1e-12);
  EXPECT_GT(std::abs(stieltjes_residual(StieltjesEquation::jacobi(1), z, S + 0.1)), 1e-2);
  // the alternative form (S + 1/4)^2 = z S^2 is not satisfied by the arcsine law
  EXPECT_GT(std::abs(stieltjes_residual(StieltjesEquation::jacobi_as_displayed(1), z, S)), 0.1);
}

TEST(Stieltjes, MarchenkoPasturLaguerre) {
  for (Complex z : {Complex(-1, 0), Complex(2, 1), Complex(5, 0)}) {
    const Complex S = (z - std::sqrt(z) * std::sqrt(z - 4.0)) / (2.0 * z);
    EXPECT_LT(std::abs(stieltjes_residual(StieltjesEquation::laguerre(1, 0), z, S)), 1e-10) << z;
  }
  auto ms = density_moments(DensityModel::marchenko_pastur(), 60);
  const Complex z(-12, 0);
  EXPECT_LT(std::abs(stieltjes_residual(StieltjesEquation::laguerre(1, 0), z, stieltjes_from_moments(ms, z))), 1e-10);
}

TEST(Stieltjes, JacobiRTwoByQuadrature) {
  QuadConfig cfg;
  for (int r : {2, 3})
    for (Complex z : {Complex(-1, 0), Complex(0.5, 0.5), Complex(3, 0)}) {
      auto re = detail::integrate(
          [&](double phi) { return (1.0 / (z - detail::vj_x(r, phi))).real() * detail::vj_phi_weight(r, phi); }, 0.0,
          std::numbers::pi / (r + 1), cfg);
      auto im = detail::integrate(
          [&](double phi) { return (1.0 / (z - detail::vj_x(r, phi))).imag() * detail::vj_phi_weight(r, phi); }, 0.0,
          std::numbers::pi / (r + 1), cfg);
      Complex S(re, im);
      EXPECT_LT(std::abs(stieltjes_residual(StieltjesEquation::jacobi(r), z, S)), 1e-8) << r << " " << z;
      EXPECT_LT(std::abs(stieltjes_residual(StieltjesEquation::laguerre(r, r), z, S)), 1e-8);
      EXPECT_GT(std::abs(stieltjes_residual(StieltjesEquation::jacobi_as_displayed(r), z, S)), 1e-3);
    }
}

TEST(Stieltjes, Empirical) {
  EXPECT_EQ(empirical_stieltjes({0.5}, Complex(1, 0)), Complex(2, 0));
  // zeros of 6x^2-6x+1: mean resolvent is P'(2)/(2 P(2)) = 9/13
  const double r1 = (3 - std::sqrt(3.0)) / 6, r2 = (3 + std::sqrt(3.0)) / 6;
  EXPECT_NEAR(empirical_stieltjes({r1, r2}, Complex(2, 0)).real(), 9.0 / 13, 1e-15);
  EXPECT_THROW(empirical_stieltjes({0.5}, Complex(0.5, 0)), std::domain_error);
}
