#pragma once

// Independent reference computations. Nothing here calls into the library
// code it is used to check.

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

using Q = mpq_class;

/// n/d in lowest terms (the two-argument mpq_class constructor does not reduce).
inline Q ratio(long n, unsigned long d) {
  Q q(n, d);
  q.canonicalize();
  return q;
}

inline std::vector<Q> convolve(const std::vector<Q>& a, const std::vector<Q>& b, std::size_t n_max) {
  std::vector<Q> c(n_max + 1, Q(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (i + j <= n_max) c[i + j] += a[i] * b[j];
    }
  }
  return c;
}

inline std::vector<Q> power(const std::vector<Q>& phi, std::size_t L, std::size_t n_max) {
  std::vector<Q> out(n_max + 1, Q(0));
  out[0] = 1;
  for (std::size_t i = 0; i < L; ++i) out = convolve(out, phi, n_max);
  return out;
}

inline Q binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  Q r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * Q(static_cast<long>(n - k + i)) / Q(static_cast<long>(i));
  return r;
}

/// Every (l_0..l_d) in [0, L]^{d+1}, filtered by the two defining sums.
inline std::vector<std::vector<std::size_t>> brute_compositions(std::size_t n, std::size_t L, std::size_t d) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> t(d + 1, 0);
  while (true) {
    std::size_t sum = 0, weighted = 0;
    for (std::size_t i = 0; i <= d; ++i) {
      sum += t[i];
      weighted += i * t[i];
    }
    if (sum == L && weighted == n) out.push_back(t);
    std::size_t i = 0;
    while (i <= d && t[i] == L) t[i++] = 0;
    if (i > d) break;
    ++t[i];
  }
  return out;
}

/// sup_{n <= n_max} sum_{k <= n} term(n, k), exactly.
inline Q sup_of_sums(std::size_t n_max, const std::function<Q(std::size_t, std::size_t)>& term,
                     std::size_t* argmax = nullptr) {
  Q best = -1;
  for (std::size_t n = 0; n <= n_max; ++n) {
    Q s = 0;
    for (std::size_t k = 0; k <= n; ++k) s += term(n, k);
    if (s > best) {
      best = s;
      if (argmax) *argmax = n;
    }
  }
  return best;
}

}  // namespace oracle
