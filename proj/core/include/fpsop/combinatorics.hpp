#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fpsop/rational.hpp"
#include "fpsop/series.hpp"

namespace fpsop {

/// (l_0, ..., l_d) with sum l_i = L and sum i*l_i = n.
using CompositionTuple = std::vector<std::size_t>;

/// Every tuple in N(n, L) for a symbol of degree d, in lexicographic order of (l_1, ..., l_d).
std::vector<CompositionTuple> enumerate_compositions(std::size_t n, std::size_t L, std::size_t d);

/// Coefficient of z^n in phi(z)^L as the multinomial sum over N(n, L).
Rational theta(std::size_t n, std::size_t L, const PolynomialSymbol& phi);

/// {k in [0, n] : (n - k) mod m == 0}. Throws ValidationError for m == 0.
std::vector<std::size_t> a_set(std::size_t n, std::size_t m);

/// n >= m1 and (n - m1) mod m2 == 0. Throws ValidationError for m2 == 0.
bool in_b_set(std::size_t n, std::size_t m1, std::size_t m2);

/// theta_{n,L} for n <= n_max, L <= l_max, stored per L over the support
/// band [L * valuation(phi), L * degree(phi)] clipped to n_max.
template <Scalar S>
class ThetaTable {
 public:
  /// Exact tables come from the multinomial enumeration; floating tables from
  /// the recurrence phi^L = phi^(L-1) * phi restricted to the band.
  static ThetaTable build(const PolynomialSymbol& phi, std::size_t n_max, std::size_t l_max);

  S operator()(std::size_t n, std::size_t L) const {
    if (L >= columns_.size()) return S(0);
    const auto& c = columns_[L];
    if (n < c.offset || n >= c.offset + c.values.size()) return S(0);
    return c.values[n - c.offset];
  }

  /// Nonzero range of column L: coefficients of z^offset, z^(offset+1), ... in phi^L.
  std::size_t offset(std::size_t L) const { return columns_[L].offset; }
  std::span<const S> band(std::size_t L) const { return columns_[L].values; }

  const PolynomialSymbol& phi() const { return phi_; }
  std::size_t n_max() const { return n_max_; }
  std::size_t l_max() const { return columns_.size() - 1; }
  std::size_t stored_entries() const;

 private:
  struct Column {
    std::size_t offset = 0;
    std::vector<S> values;
  };

  explicit ThetaTable(PolynomialSymbol phi, std::size_t n_max) : phi_(std::move(phi)), n_max_(n_max) {}

  PolynomialSymbol phi_;
  std::size_t n_max_;
  std::vector<Column> columns_;
};

/// Upper bound on the entries a table of this shape would store.
std::size_t theta_table_footprint(const PolynomialSymbol& phi, std::size_t n_max, std::size_t l_max);

}  // namespace fpsop
