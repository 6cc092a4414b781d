#include "fpsop/algebra.hpp"

#include <cmath>

namespace fpsop {

namespace {

Rational random_rational(std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> num(-bound, bound);
  std::uniform_int_distribution<int> den(1, bound);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

}  // namespace

RationalSeries random_rational_series(std::mt19937_64& rng, std::size_t degree, int bound) {
  std::vector<Rational> c;
  c.reserve(degree + 1);
  for (std::size_t n = 0; n <= degree; ++n) c.push_back(random_rational(rng, bound));
  return RationalSeries(std::move(c));
}

PolynomialSymbol random_symbol(std::mt19937_64& rng, std::size_t max_degree, int bound) {
  std::uniform_int_distribution<std::size_t> deg(0, max_degree);
  std::vector<Rational> a;
  const std::size_t d = deg(rng);
  for (std::size_t m = 0; m <= d; ++m) a.push_back(random_rational(rng, bound));
  return PolynomialSymbol(std::move(a));
}

std::vector<LawCheck> check_algebra(const DeltaSequence& delta, const WeightSequence& beta, double p,
                                    double multiplier_bound, std::size_t trials, std::size_t degree,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LawCheck commutative{"commutativity"};
  LawCheck associative{"associativity"};
  LawCheck bilinear{"bilinearity"};
  LawCheck unity{"unity"};
  LawCheck submultiplicative{"submultiplicativity"};
  const std::size_t full = 3 * degree;

  for (std::size_t t = 0; t < trials; ++t) {
    const auto f = random_rational_series(rng, degree);
    const auto g = random_rational_series(rng, degree);
    const auto h = random_rational_series(rng, degree);
    const Rational scalar = random_rational(rng, 8);

    ++commutative.trials;
    if (!(diamond_product(f, g, delta, full) == diamond_product(g, f, delta, full))) ++commutative.failures;

    ++associative.trials;
    const auto left = diamond_product(diamond_product(f, g, delta, full), h, delta, full);
    const auto right = diamond_product(f, diamond_product(g, h, delta, full), delta, full);
    if (!(left == right)) ++associative.failures;

    ++bilinear.trials;
    const auto lhs = diamond_product(scalar * f + g, h, delta, full);
    const auto rhs = scalar * diamond_product(f, h, delta, full) + diamond_product(g, h, delta, full);
    if (!(lhs == rhs)) ++bilinear.failures;

    ++unity.trials;
    if (!(diamond_product(f, RationalSeries::one(degree), delta, degree) == f)) ++unity.failures;

    if (std::isfinite(multiplier_bound)) {
      ++submultiplicative.trials;
      const auto product = to_real(diamond_product(f, g, delta, 2 * degree));
      const double bound = multiplier_bound * norm(f, beta, p) * norm(g, beta, p) + 1e-9;
      if (!(norm(product, beta, p) <= bound)) ++submultiplicative.failures;
    }
  }
  std::vector<LawCheck> out{commutative, associative, bilinear, unity};
  if (std::isfinite(multiplier_bound)) out.push_back(submultiplicative);
  return out;
}

}  // namespace fpsop
