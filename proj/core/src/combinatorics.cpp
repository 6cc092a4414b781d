#include "fpsop/combinatorics.hpp"

#include <algorithm>

#include "fpsop/errors.hpp"

namespace fpsop {

namespace {

// Walks l_1..l_d; l_0 is whatever remains of L. Partial sums prune the search.
void enumerate_into(std::size_t i, std::size_t d, std::size_t n_left, std::size_t L_left, CompositionTuple& current,
                    std::vector<CompositionTuple>& out) {
  if (i > d) {
    if (n_left == 0) {
      current[0] = L_left;
      out.push_back(current);
    }
    return;
  }
  // Remaining indices i..d each contribute at most d per unit of L.
  if (n_left > L_left * d) return;
  const std::size_t limit = std::min(L_left, n_left / i);
  for (std::size_t l = 0; l <= limit; ++l) {
    current[i] = l;
    enumerate_into(i + 1, d, n_left - i * l, L_left - l, current, out);
  }
  current[i] = 0;
}

std::size_t band_lo(const PolynomialSymbol& phi, std::size_t L) { return L * phi.valuation(); }

}  // namespace

std::vector<CompositionTuple> enumerate_compositions(std::size_t n, std::size_t L, std::size_t d) {
  std::vector<CompositionTuple> out;
  if (d == 0) {
    if (n == 0) out.push_back(CompositionTuple{L});
    return out;
  }
  CompositionTuple current(d + 1, 0);
  enumerate_into(1, d, n, L, current, out);
  return out;
}

Rational theta(std::size_t n, std::size_t L, const PolynomialSymbol& phi) {
  const std::size_t d = phi.degree();
  Rational total(0);
  for (const auto& tuple : enumerate_compositions(n, L, d)) {
    // L! / (l_0! ... l_d!) as a product of binomials keeps everything integral.
    BigInt multinomial(1);
    std::size_t used = 0;
    Rational weight(1);
    bool vanishes = false;
    for (std::size_t i = 0; i <= d && !vanishes; ++i) {
      const std::size_t li = tuple[i];
      if (li == 0) continue;
      if (phi.alpha(i) == 0) {
        vanishes = true;
        break;
      }
      used += li;
      multinomial *= binomial(used, li);
      Rational power;
      mpz_pow_ui(power.get_num_mpz_t(), phi.alpha(i).get_num_mpz_t(), static_cast<unsigned long>(li));
      mpz_pow_ui(power.get_den_mpz_t(), phi.alpha(i).get_den_mpz_t(), static_cast<unsigned long>(li));
      power.canonicalize();
      weight *= power;
    }
    if (vanishes) continue;
    total += Rational(multinomial) * weight;
  }
  total.canonicalize();
  return total;
}

std::vector<std::size_t> a_set(std::size_t n, std::size_t m) {
  if (m == 0) throw ValidationError("M(0) = {0} is degenerate; m must be ≥ 1");
  std::vector<std::size_t> out;
  out.reserve(n / m + 1);
  for (std::size_t k = n % m; k <= n; k += m) out.push_back(k);
  return out;
}

bool in_b_set(std::size_t n, std::size_t m1, std::size_t m2) {
  if (m2 == 0) throw ValidationError("m2 must be ≥ 1");
  return n >= m1 && (n - m1) % m2 == 0;
}

std::size_t theta_table_footprint(const PolynomialSymbol& phi, std::size_t n_max, std::size_t l_max) {
  std::size_t total = 0;
  for (std::size_t L = 0; L <= l_max; ++L) {
    const std::size_t lo = band_lo(phi, L);
    if (lo > n_max) break;
    const std::size_t hi = std::min(n_max, L * phi.degree());
    total += hi - lo + 1;
  }
  return total;
}

template <Scalar S>
std::size_t ThetaTable<S>::stored_entries() const {
  std::size_t total = 0;
  for (const auto& c : columns_) total += c.values.size();
  return total;
}

template <>
ThetaTable<Rational> ThetaTable<Rational>::build(const PolynomialSymbol& phi, std::size_t n_max, std::size_t l_max) {
  ThetaTable table(phi, n_max);
  table.columns_.resize(l_max + 1);
  for (std::size_t L = 0; L <= l_max; ++L) {
    auto& col = table.columns_[L];
    col.offset = band_lo(phi, L);
    if (col.offset > n_max) continue;
    const std::size_t hi = std::min(n_max, L * phi.degree());
    for (std::size_t n = col.offset; n <= hi; ++n) col.values.push_back(theta(n, L, phi));
  }
  return table;
}

template <>
ThetaTable<double> ThetaTable<double>::build(const PolynomialSymbol& phi, std::size_t n_max, std::size_t l_max) {
  ThetaTable table(phi, n_max);
  table.columns_.resize(l_max + 1);
  std::vector<double> alphas;
  for (const auto& a : phi.alphas()) alphas.push_back(to_double(a));
  const std::size_t v = phi.valuation();
  const std::size_t d = phi.degree();

  table.columns_[0] = Column{0, {1.0}};
  for (std::size_t L = 1; L <= l_max; ++L) {
    const auto& prev = table.columns_[L - 1];
    auto& col = table.columns_[L];
    col.offset = band_lo(phi, L);
    if (col.offset > n_max || prev.values.empty()) {
      col.offset = std::max(col.offset, n_max + 1);
      continue;
    }
    const std::size_t hi = std::min(n_max, L * d);
    col.values.assign(hi - col.offset + 1, 0.0);
    for (std::size_t j = 0; j < prev.values.size(); ++j) {
      const double a = prev.values[j];
      if (a == 0.0) continue;
      const std::size_t base = prev.offset + j;
      for (std::size_t m = v; m <= d; ++m) {
        const std::size_t n = base + m;
        if (n > hi) break;
        if (alphas[m] != 0.0) col.values[n - col.offset] += a * alphas[m];
      }
    }
  }
  return table;
}

template class ThetaTable<Rational>;
template class ThetaTable<double>;

}  // namespace fpsop
