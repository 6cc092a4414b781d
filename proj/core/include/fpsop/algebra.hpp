#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fpsop/series.hpp"
#include "fpsop/weights.hpp"

namespace fpsop {

/// Random exact series of the given degree bound; numerators in [-bound, bound],
/// denominators in [1, bound].
RationalSeries random_rational_series(std::mt19937_64& rng, std::size_t degree, int bound = 8);

/// Random exact symbol of degree at most max_degree with the same coefficient ranges.
PolynomialSymbol random_symbol(std::mt19937_64& rng, std::size_t max_degree, int bound = 8);

struct LawCheck {
  std::string law;
  std::size_t trials = 0;
  std::size_t failures = 0;
  bool passed() const { return failures == 0; }
};

/// Samples commutativity, associativity, bilinearity and the unit law of the
/// diamond product exactly; when `multiplier_bound` (alpha_0^{1/q}) is finite
/// also samples norm(f diamond g) <= multiplier_bound * norm(f) * norm(g) + 1e-9.
std::vector<LawCheck> check_algebra(const DeltaSequence& delta, const WeightSequence& beta, double p,
                                    double multiplier_bound, std::size_t trials, std::size_t degree,
                                    std::uint64_t seed);

}  // namespace fpsop
