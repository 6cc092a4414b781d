#include <benchmark/benchmark.h>

#include <random>

#include "fpsop/algebra.hpp"
#include "fpsop/combinatorics.hpp"
#include "fpsop/criteria.hpp"
#include "fpsop/operators.hpp"

using namespace fpsop;

namespace {

void BM_ThetaTableExact(benchmark::State& state) {
  const PolynomialSymbol phi({Rational(1, 2), 1, Rational(-2, 3), Rational(1, 5)});
  const auto l_max = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ThetaTable<Rational>::build(phi, phi.degree() * l_max, l_max));
  }
}
BENCHMARK(BM_ThetaTableExact)->Arg(8)->Arg(16)->Arg(32);

void BM_ThetaTableReal(benchmark::State& state) {
  const PolynomialSymbol phi({Rational(1, 2), 1, Rational(-2, 3), Rational(1, 5)});
  const auto l_max = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ThetaTable<double>::build(phi, phi.degree() * l_max, l_max));
  }
}
BENCHMARK(BM_ThetaTableReal)->Arg(64)->Arg(256)->Arg(1024);

void BM_DiamondProductExact(benchmark::State& state) {
  std::mt19937_64 rng(0);
  const auto degree = static_cast<std::size_t>(state.range(0));
  const auto f = random_rational_series(rng, degree);
  const auto g = random_rational_series(rng, degree);
  const auto delta = DeltaSequence::factorial();
  for (auto _ : state) benchmark::DoNotOptimize(diamond_product(f, g, delta, 2 * degree));
}
BENCHMARK(BM_DiamondProductExact)->Arg(16)->Arg(64)->Arg(128);

void BM_NormEstimateComposition(benchmark::State& state) {
  const auto n_cols = static_cast<std::size_t>(state.range(0));
  const auto beta = make_beta(NamedPreset{"dirichlet"});
  const auto T = build_matrix<double>(OperatorKind::composition, std::nullopt, PolynomialSymbol::monomial(2),
                                      DeltaSequence::ones(), 2 * n_cols, n_cols);
  for (auto _ : state) benchmark::DoNotOptimize(norm_estimate_l2(T, beta, 1'000'000, 1e-12));
}
BENCHMARK(BM_NormEstimateComposition)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_PolynomialCompositionBounds(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const CriterionContext ctx{make_beta(GeometricWeight{0.5}), DeltaSequence::ones(), SpaceConfig::make(2.0, N)};
  const PolynomialSymbol phi({0, 0, 1, Rational(1, 2)});
  for (auto _ : state) benchmark::DoNotOptimize(polynomial_composition_bounds(ctx, phi));
}
BENCHMARK(BM_PolynomialCompositionBounds)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
