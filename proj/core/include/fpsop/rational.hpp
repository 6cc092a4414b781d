#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace fpsop {

/// Exact rational scalar backed by GMP. Always kept canonical.
using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "a", "a/b", or a decimal literal such as "0.25" into an exact rational.
Rational parse_rational(std::string_view text);

/// Exact binary value of a finite double.
Rational rational_from_double(double x);

/// "num/den", or "num" when the denominator is 1.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

BigInt factorial(std::size_t n);
BigInt binomial(std::size_t n, std::size_t k);

}  // namespace fpsop
