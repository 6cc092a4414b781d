#pragma once

#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fpsop/rational.hpp"
#include "fpsop/weights.hpp"

namespace fpsop {

/// The two scalar modes. Series of different modes never mix: every binary
/// operation is a template over a single Scalar, so mixing fails to compile.
template <class S>
concept Scalar = std::same_as<S, double> || std::same_as<S, Rational>;

template <Scalar S>
S scalar_from(const Rational& q) {
  if constexpr (std::same_as<S, double>) {
    return to_double(q);
  } else {
    return q;
  }
}

/// Coefficients f(0..N) of a formal power series truncated at degree N.
template <Scalar S>
class TruncatedSeries {
 public:
  /// The zero series of degree bound N.
  explicit TruncatedSeries(std::size_t degree_bound) : coeffs_(degree_bound + 1, S(0)) {}

  explicit TruncatedSeries(std::vector<S> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("a truncated series needs at least one coefficient");
  }

  static TruncatedSeries monomial(std::size_t k, std::size_t degree_bound) {
    if (k > degree_bound) throw std::invalid_argument("monomial degree exceeds the degree bound");
    TruncatedSeries s(degree_bound);
    s.coeffs_[k] = S(1);
    return s;
  }

  static TruncatedSeries one(std::size_t degree_bound) { return monomial(0, degree_bound); }

  std::size_t degree_bound() const { return coeffs_.size() - 1; }
  const S& operator[](std::size_t n) const { return coeffs_[n]; }
  /// Coefficient n, or zero beyond the degree bound.
  S at(std::size_t n) const { return n < coeffs_.size() ? coeffs_[n] : S(0); }
  std::span<const S> coeffs() const { return coeffs_; }

  /// Index of the highest nonzero coefficient; 0 for the zero series.
  std::size_t degree() const {
    for (std::size_t n = coeffs_.size(); n-- > 0;) {
      if (coeffs_[n] != S(0)) return n;
    }
    return 0;
  }
  bool is_zero() const {
    for (const auto& c : coeffs_) {
      if (c != S(0)) return false;
    }
    return true;
  }

  /// Drops or zero-pads coefficients to the new degree bound.
  TruncatedSeries truncated(std::size_t degree_bound) const {
    std::vector<S> c(degree_bound + 1, S(0));
    for (std::size_t n = 0; n <= degree_bound && n < coeffs_.size(); ++n) c[n] = coeffs_[n];
    return TruncatedSeries(std::move(c));
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    std::vector<S> c(std::max(a.coeffs_.size(), b.coeffs_.size()), S(0));
    for (std::size_t n = 0; n < c.size(); ++n) c[n] = a.at(n) + b.at(n);
    return TruncatedSeries(std::move(c));
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    std::vector<S> c(std::max(a.coeffs_.size(), b.coeffs_.size()), S(0));
    for (std::size_t n = 0; n < c.size(); ++n) c[n] = a.at(n) - b.at(n);
    return TruncatedSeries(std::move(c));
  }
  friend TruncatedSeries operator*(const S& alpha, const TruncatedSeries& a) {
    std::vector<S> c(a.coeffs_);
    for (auto& x : c) x = alpha * x;
    return TruncatedSeries(std::move(c));
  }
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) { return a.coeffs_ == b.coeffs_; }

 private:
  std::vector<S> coeffs_;
};

using RationalSeries = TruncatedSeries<Rational>;
using RealSeries = TruncatedSeries<double>;

/// Exact to floating conversion of every coefficient.
RealSeries to_real(const RationalSeries& f);

/// The symbol phi(z) = sum_{m=0}^d alpha_m z^m, stored exactly.
class PolynomialSymbol {
 public:
  /// Trailing zero coefficients are trimmed so that alpha_d != 0 unless d = 0.
  explicit PolynomialSymbol(std::vector<Rational> alphas);
  static PolynomialSymbol monomial(std::size_t m);

  std::size_t degree() const { return alphas_.size() - 1; }
  /// Smallest m with alpha_m != 0 (0 for the zero symbol).
  std::size_t valuation() const;
  /// Some m with phi = z^m, if phi is a monomial with unit coefficient.
  std::optional<std::size_t> monomial_degree() const;

  const std::vector<Rational>& alphas() const { return alphas_; }
  const Rational& alpha(std::size_t m) const { return alphas_[m]; }

  template <Scalar S>
  TruncatedSeries<S> as_series(std::size_t degree_bound) const {
    std::vector<S> c(degree_bound + 1, S(0));
    for (std::size_t m = 0; m <= degree() && m <= degree_bound; ++m) c[m] = scalar_from<S>(alphas_[m]);
    return TruncatedSeries<S>(std::move(c));
  }

  friend bool operator==(const PolynomialSymbol&, const PolynomialSymbol&) = default;

 private:
  std::vector<Rational> alphas_;
};

/// (sum_{n<=N} |f(n)|^p beta(n)^p)^{1/p}, evaluated in floating point.
template <Scalar S>
double norm(const TruncatedSeries<S>& f, const WeightSequence& beta, double p);

/// Ordinary Cauchy product truncated at degree N.
template <Scalar S>
TruncatedSeries<S> cauchy_product(const TruncatedSeries<S>& f, const TruncatedSeries<S>& g, std::size_t degree_bound);

/// Weighted Cauchy product: coefficient n = sum_k delta_n/(delta_k delta_{n-k}) f(k) g(n-k).
template <Scalar S>
TruncatedSeries<S> diamond_product(const TruncatedSeries<S>& f, const TruncatedSeries<S>& g,
                                   const DeltaSequence& delta, std::size_t degree_bound);

/// f o phi = sum_L f(L) phi^L truncated at N, with phi^L from repeated Cauchy products.
template <Scalar S>
TruncatedSeries<S> compose(const TruncatedSeries<S>& f, const PolynomialSymbol& phi, std::size_t degree_bound);

/// (u diamond C_phi)(f) = u diamond (f o phi).
template <Scalar S>
TruncatedSeries<S> diamond_substitute(const TruncatedSeries<S>& u, const TruncatedSeries<S>& f,
                                      const PolynomialSymbol& phi, const DeltaSequence& delta,
                                      std::size_t degree_bound);

}  // namespace fpsop
