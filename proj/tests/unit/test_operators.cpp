#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fpsop/algebra.hpp"
#include "fpsop/combinatorics.hpp"
#include "fpsop/errors.hpp"
#include "fpsop/operators.hpp"

using namespace fpsop;

namespace {

const auto kHardy = make_beta(NamedPreset{"hardy"});
const auto kDirichlet = make_beta(NamedPreset{"dirichlet"});

RealOperator identity(std::size_t n) {
  std::vector<std::vector<double>> rows(n + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i <= n; ++i) rows[i][i] = 1.0;
  return RealOperator::from_dense(rows);
}

}  // namespace

TEST(BuildMatrix, CompositionMonomial) {
  for (std::size_t m = 1; m <= 3; ++m) {
    const auto T = build_matrix<Rational>(OperatorKind::composition, std::nullopt, PolynomialSymbol::monomial(m),
                                          DeltaSequence::ones(), 3 * 10, 10);
    for (std::size_t L = 0; L <= 10; ++L) {
      for (std::size_t n = 0; n <= 30; ++n) EXPECT_EQ(T.entry(n, L), Rational(n == m * L ? 1 : 0));
    }
    EXPECT_EQ(T.nonzeros(), 11u);
  }
}

TEST(BuildMatrix, SubstitutionMonomials) {
  const auto u = RationalSeries::monomial(2, 2);
  const auto T = build_matrix<Rational>(OperatorKind::substitution, u, PolynomialSymbol::monomial(3),
                                        DeltaSequence::ones(), 40, 12);
  for (std::size_t L = 0; L <= 12; ++L) {
    for (std::size_t n = 0; n <= 40; ++n) EXPECT_EQ(T.entry(n, L), Rational(n == 2 + 3 * L ? 1 : 0));
  }
}

TEST(BuildMatrix, SubstitutionMonomialMultiplierFormula) {
  std::mt19937_64 rng(4);
  const auto delta = DeltaSequence::factorial();
  for (int t = 0; t < 10; ++t) {
    const auto phi = random_symbol(rng, 3);
    const std::size_t m0 = rng() % 4;
    const std::size_t n_cols = 5;
    const std::size_t n_rows = m0 + phi.degree() * n_cols;
    const auto T = build_matrix<Rational>(OperatorKind::substitution, RationalSeries::monomial(m0, m0), phi, delta,
                                          n_rows, n_cols);
    for (std::size_t L = 0; L <= n_cols; ++L) {
      for (std::size_t n = 0; n <= n_rows; ++n) {
        const Rational want = n < m0 ? Rational(0) : delta.exact_kernel(n, m0) * theta(n - m0, L, phi);
        EXPECT_EQ(T.entry(n, L), want);
      }
    }
  }
}

TEST(BuildMatrix, DiamondMultByOneIsIdentity) {
  const auto T = build_matrix<Rational>(OperatorKind::diamond_multiplication, RationalSeries::one(0),
                                        PolynomialSymbol::monomial(1), DeltaSequence::factorial(), 9, 9);
  for (std::size_t L = 0; L <= 9; ++L) {
    for (std::size_t n = 0; n <= 9; ++n) EXPECT_EQ(T.entry(n, L), Rational(n == L ? 1 : 0));
  }
}

TEST(BuildMatrix, Errors) {
  EXPECT_THROW(build_matrix<double>(OperatorKind::substitution, std::nullopt, PolynomialSymbol::monomial(1),
                                    DeltaSequence::ones(), 4, 4),
               std::invalid_argument);
  EXPECT_THROW(build_matrix<double>(OperatorKind::composition, std::nullopt, PolynomialSymbol({1, 1, 1}),
                                    DeltaSequence::ones(), 20000, 10000),
               ResourceError);
  const auto clipped = build_matrix<double>(OperatorKind::composition, std::nullopt, PolynomialSymbol::monomial(2),
                                            DeltaSequence::ones(), 5, 5);
  EXPECT_FALSE(clipped.warnings().empty());
}

TEST(Apply, MatchesDiamondSubstitute) {
  std::mt19937_64 rng(8);
  const DeltaSequence deltas[] = {DeltaSequence::ones(), DeltaSequence::factorial(),
                                  DeltaSequence::inverse_factorial()};
  for (int t = 0; t < 30; ++t) {
    const auto& delta = deltas[t % 3];
    const auto u = random_rational_series(rng, rng() % 4);
    const auto f = random_rational_series(rng, rng() % 6);
    const auto phi = random_symbol(rng, 3);
    const std::size_t N = 20;
    const auto T = build_matrix<Rational>(OperatorKind::substitution, u, phi, delta, N, f.degree_bound());
    EXPECT_EQ(apply(T, f), diamond_substitute(u, f, phi, delta, N));
  }
}

TEST(Apply, EdgeCases) {
  const auto T = build_matrix<Rational>(OperatorKind::composition, std::nullopt, PolynomialSymbol({1, 2}),
                                        DeltaSequence::ones(), 6, 6);
  EXPECT_TRUE(apply(T, RationalSeries(6)).is_zero());
  for (std::size_t L = 0; L <= 6; ++L) {
    const auto col = apply(T, RationalSeries::monomial(L, 6));
    for (std::size_t n = 0; n <= 6; ++n) EXPECT_EQ(col.at(n), T.entry(n, L));
  }
  EXPECT_THROW(apply(T, RationalSeries::monomial(7, 7)), std::invalid_argument);
}

TEST(ColumnLowerBound, Examples) {
  const auto id = column_lower_bound(identity(10), kHardy, 2.0);
  EXPECT_DOUBLE_EQ(id.value, 1.0);
  EXPECT_EQ(id.attained_at, std::optional<std::size_t>(0));

  const auto T = build_matrix<double>(OperatorKind::substitution, RealSeries::monomial(1, 1),
                                      PolynomialSymbol::monomial(2), DeltaSequence::ones(), 201, 100);
  EXPECT_NEAR(column_lower_bound(T, kDirichlet, 2.0).value, std::sqrt(2.0), 1e-12);
}

TEST(NormEstimateL2, Diagonal) {
  const auto D = RealOperator::from_dense({{1, 0, 0}, {0, 3, 0}, {0, 0, 2}});
  const auto est = norm_estimate_l2(D, kHardy);
  EXPECT_NEAR(est.value, 3.0, 1e-9);
  EXPECT_TRUE(est.converged);
  EXPECT_EQ(est.kind, BoundKind::lower);
}

TEST(NormEstimateL2, CompositionHardyIsOne) {
  for (std::size_t m = 1; m <= 3; ++m) {
    const auto T = build_matrix<double>(OperatorKind::composition, std::nullopt, PolynomialSymbol::monomial(m),
                                        DeltaSequence::ones(), m * 200, 200);
    EXPECT_NEAR(norm_estimate_l2(T, kHardy).value, 1.0, 1e-12);
  }
}

TEST(NormEstimateL2, DirichletApproachesRootTwoFromBelow) {
  double previous = 0.0;
  for (std::size_t n : {64u, 256u, 1024u}) {
    const auto T = build_matrix<double>(OperatorKind::composition, std::nullopt, PolynomialSymbol::monomial(2),
                                        DeltaSequence::ones(), 2 * n, n);
    const double v = norm_estimate_l2(T, kDirichlet, 200000, 1e-13).value;
    EXPECT_LT(v, std::sqrt(2.0));
    EXPECT_GT(v, previous);
    previous = v;
  }
  EXPECT_NEAR(previous, std::sqrt(2.0), 1e-3);
}

TEST(NormLowerSearch, AgreesWithPowerIterationOnRandomMatrices) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    std::vector<std::vector<double>> rows(20, std::vector<double>(20));
    for (auto& r : rows) {
      for (auto& x : r) x = U(rng);
    }
    const auto T = RealOperator::from_dense(rows);
    const double l2 = norm_estimate_l2(T, kHardy).value;
    const auto search = norm_lower_search(T, kHardy, 2.0, 20000, t);
    EXPECT_NEAR(search.value, l2, 1e-6);
    EXPECT_LE(search.value, l2 + 1e-9);
    EXPECT_GE(search.value, column_lower_bound(T, kHardy, 2.0).value - 1e-12);
  }
}

TEST(NormLowerSearch, IdentityAndDeterminism) {
  EXPECT_NEAR(norm_lower_search(identity(6), kHardy, 3.0).value, 1.0, 1e-12);
  const auto T = build_matrix<double>(OperatorKind::substitution, RealSeries(std::vector<double>{1, 0.5}),
                                      PolynomialSymbol({0, 1, 1}), DeltaSequence::ones(), 60, 29);
  const auto a = norm_lower_search(T, kDirichlet, 3.0, 3000, 5);
  const auto b = norm_lower_search(T, kDirichlet, 3.0, 3000, 5);
  EXPECT_EQ(a.value, b.value);
  EXPECT_GE(a.value, column_lower_bound(T, kDirichlet, 3.0).value - 1e-12);
}

TEST(NormEstimateL2, MonotoneInTruncationAndAboveColumns) {
  std::mt19937_64 rng(31);
  const auto beta = make_beta(GeometricWeight{0.7});
  for (int t = 0; t < 10; ++t) {
    const auto phi = random_symbol(rng, 2);
    const auto u = to_real(random_rational_series(rng, 2));
    double previous = 0.0;
    for (std::size_t n_cols : {8u, 16u, 32u, 64u}) {
      const std::size_t n_rows = 2 + std::max<std::size_t>(1, phi.degree()) * n_cols;
      const auto T = build_matrix<double>(OperatorKind::substitution, u, phi, DeltaSequence::ones(), n_rows, n_cols);
      const double est = norm_estimate_l2(T, beta).value;
      EXPECT_GE(est, previous * (1 - 1e-9));
      EXPECT_GE(est, column_lower_bound(T, beta, 2.0).value * (1 - 1e-9));
      previous = est;
    }
  }
}
