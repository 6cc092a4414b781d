#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <type_traits>

#include "fpsop/algebra.hpp"
#include "fpsop/series.hpp"
#include "oracles.hpp"

using namespace fpsop;

namespace {

RationalSeries S(std::vector<Rational> c) { return RationalSeries(std::move(c)); }

std::vector<Rational> coeffs(const RationalSeries& f) { return {f.coeffs().begin(), f.coeffs().end()}; }

// Mixing scalar modes must not compile.
template <class A, class B>
concept Multipliable = requires(A a, B b, std::size_t n) { cauchy_product(a, b, n); };
static_assert(Multipliable<RationalSeries, RationalSeries>);
static_assert(Multipliable<RealSeries, RealSeries>);
static_assert(!Multipliable<RationalSeries, RealSeries>);
static_assert(!std::is_convertible_v<RealSeries, RationalSeries>);

}  // namespace

TEST(Norm, Examples) {
  const auto hardy = make_beta(NamedPreset{"hardy"});
  const auto dirichlet = make_beta(NamedPreset{"dirichlet"});
  EXPECT_DOUBLE_EQ(norm(S({1, 2}), hardy, 2.0), std::sqrt(5.0));
  EXPECT_DOUBLE_EQ(norm(RationalSeries::monomial(1, 4), dirichlet, 2.0), std::sqrt(2.0));
  for (std::size_t n = 0; n < 10; ++n) {
    EXPECT_DOUBLE_EQ(norm(RealSeries::monomial(n, 12), dirichlet, 3.0), dirichlet(n));
  }
}

TEST(Norm, UsesLogsForTinyWeights) {
  // beta(n) = 2^{-n^2} underflows at n = 40 but the coefficient compensates.
  const auto beta = make_beta(GaussianWeight{0.5});
  std::vector<double> c(41, 0.0);
  c[40] = std::ldexp(1.0, 1000);
  EXPECT_NEAR(norm(RealSeries(c), beta, 2.0), std::ldexp(1.0, -600), std::ldexp(1.0, -600) * 1e-12);
}

TEST(Norm, TriangleInequality) {
  std::mt19937_64 rng(11);
  const auto beta = make_beta(PowerLaw{0.75});
  for (int t = 0; t < 200; ++t) {
    const auto f = to_real(random_rational_series(rng, 15));
    const auto g = to_real(random_rational_series(rng, 15));
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
      const double lhs = norm(f + g, beta, p);
      const double rhs = norm(f, beta, p) + norm(g, beta, p);
      EXPECT_LE(lhs, rhs * (1 + 1e-12));
    }
  }
}

TEST(Cauchy, Examples) {
  EXPECT_EQ(cauchy_product(S({1, 1}), S({1, 1}), 2), S({1, 2, 1}));
  EXPECT_EQ(cauchy_product(S({1, 1}), S({1, 1}), 1), S({1, 2}));
}

TEST(Cauchy, MatchesDoubleLoop) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const auto f = random_rational_series(rng, rng() % 12);
    const auto g = random_rational_series(rng, rng() % 12);
    const std::size_t N = rng() % 25;
    EXPECT_EQ(coeffs(cauchy_product(f, g, N)), oracle::convolve(coeffs(f), coeffs(g), N));
  }
}

TEST(Diamond, Examples) {
  const auto z = RationalSeries::monomial(1, 1);
  EXPECT_EQ(diamond_product(z, z, DeltaSequence::factorial(), 2), S({0, 0, 2}));
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const auto f = random_rational_series(rng, 10);
    const auto g = random_rational_series(rng, 10);
    EXPECT_EQ(diamond_product(f, g, DeltaSequence::ones(), 20), cauchy_product(f, g, 20));
    for (const auto& delta : {DeltaSequence::factorial(), DeltaSequence::inverse_factorial()}) {
      EXPECT_EQ(diamond_product(f, RationalSeries::one(0), delta, 10), f);
    }
  }
}

TEST(Diamond, MatchesDoubleSum) {
  std::mt19937_64 rng(9);
  const auto delta = DeltaSequence::geometric(Rational(2, 3));
  const auto fact = DeltaSequence::factorial();
  for (int t = 0; t < 30; ++t) {
    const auto f = random_rational_series(rng, 8);
    const auto g = random_rational_series(rng, 8);
    for (const auto* d : {&delta, &fact}) {
      const auto h = diamond_product(f, g, *d, 16);
      for (std::size_t n = 0; n <= 16; ++n) {
        Rational s = 0;
        for (std::size_t k = 0; k <= n; ++k) s += d->exact(n) / (d->exact(k) * d->exact(n - k)) * f.at(k) * g.at(n - k);
        EXPECT_EQ(h[n], s);
      }
    }
  }
}

TEST(Diamond, AlgebraLaws) {
  std::mt19937_64 rng(21);
  for (const auto& delta : {DeltaSequence::ones(), DeltaSequence::factorial(), DeltaSequence::inverse_factorial()}) {
    for (int t = 0; t < 25; ++t) {
      const auto f = random_rational_series(rng, 7);
      const auto g = random_rational_series(rng, 7);
      const auto h = random_rational_series(rng, 7);
      const Rational a = oracle::ratio(static_cast<long>(rng() % 17) - 8, 1 + rng() % 7);
      EXPECT_EQ(diamond_product(f, g, delta, 21), diamond_product(g, f, delta, 21));
      EXPECT_EQ(diamond_product(diamond_product(f, g, delta, 21), h, delta, 21),
                diamond_product(f, diamond_product(g, h, delta, 21), delta, 21));
      EXPECT_EQ(diamond_product(a * f + g, h, delta, 21),
                a * diamond_product(f, h, delta, 21) + diamond_product(g, h, delta, 21));
    }
  }
}

TEST(Compose, Examples) {
  const auto f = S({1, 1, 1});
  EXPECT_EQ(compose(f, PolynomialSymbol::monomial(1), 2), f);
  EXPECT_EQ(compose(f, PolynomialSymbol::monomial(2), 4), S({1, 0, 1, 0, 1}));
  EXPECT_EQ(compose(S({0, 0, 0, 1}), PolynomialSymbol({1, 1}), 3), S({1, 3, 3, 1}));
}

TEST(Compose, BinomialExpansionOracle) {
  // (1+z)^k expanded independently.
  for (std::size_t k = 0; k <= 12; ++k) {
    const auto out = compose(RationalSeries::monomial(k, k), PolynomialSymbol({1, 1}), k);
    for (std::size_t n = 0; n <= k; ++n) EXPECT_EQ(out[n], oracle::binom(k, n));
  }
}

TEST(Compose, LinearInF) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const auto phi = random_symbol(rng, 3);
    const auto f = random_rational_series(rng, 6);
    const auto g = random_rational_series(rng, 6);
    const Rational a = oracle::ratio(static_cast<long>(rng() % 9) - 4, 1 + rng() % 5);
    EXPECT_EQ(compose(a * f + g, phi, 18), a * compose(f, phi, 18) + compose(g, phi, 18));
  }
}

TEST(DiamondSubstitute, Examples) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const auto phi = random_symbol(rng, 3);
    const auto f = random_rational_series(rng, 5);
    EXPECT_EQ(diamond_substitute(RationalSeries::one(0), f, phi, DeltaSequence::factorial(), 15), compose(f, phi, 15));
  }
  for (std::size_t m1 = 0; m1 <= 3; ++m1) {
    for (std::size_t m2 = 1; m2 <= 3; ++m2) {
      for (std::size_t m = 0; m <= 4; ++m) {
        const std::size_t N = m1 + m * m2 + 2;
        const auto out = diamond_substitute(RationalSeries::monomial(m1, m1), RationalSeries::monomial(m, m),
                                            PolynomialSymbol::monomial(m2), DeltaSequence::ones(), N);
        EXPECT_EQ(out, RationalSeries::monomial(m1 + m * m2, N));
      }
    }
  }
  const auto z = RationalSeries::monomial(1, 1);
  EXPECT_EQ(diamond_substitute(z, z, PolynomialSymbol::monomial(1), DeltaSequence::factorial(), 2), S({0, 0, 2}));
}

TEST(Symbol, Normalises) {
  const PolynomialSymbol phi({0, 1, 0, 0});
  EXPECT_EQ(phi.degree(), 1u);
  EXPECT_EQ(phi.valuation(), 1u);
  EXPECT_EQ(phi.monomial_degree(), std::optional<std::size_t>(1));
  EXPECT_EQ(PolynomialSymbol({0, 2}).monomial_degree(), std::nullopt);
  EXPECT_EQ(PolynomialSymbol({0}).degree(), 0u);
}

TEST(Series, Basics) {
  const auto f = S({0, 3, 0, 0});
  EXPECT_EQ(f.degree_bound(), 3u);
  EXPECT_EQ(f.degree(), 1u);
  EXPECT_EQ(f.at(10), Rational(0));
  EXPECT_EQ(f.truncated(1), S({0, 3}));
  EXPECT_TRUE(RationalSeries(4).is_zero());
  EXPECT_THROW(RationalSeries::monomial(5, 4), std::invalid_argument);
}
