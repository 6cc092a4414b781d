#include "fpsop/series.hpp"

#include <algorithm>
#include <cmath>

namespace fpsop {

namespace {

template <Scalar S>
double magnitude(const S& x) {
  if constexpr (std::same_as<S, double>) {
    return std::fabs(x);
  } else {
    return std::fabs(to_double(x));
  }
}

template <Scalar S>
S kernel_of(const DeltaSequence& delta, std::size_t n, std::size_t k) {
  if constexpr (std::same_as<S, double>) {
    return delta.kernel(n, k);
  } else {
    return delta.exact_kernel(n, k);
  }
}

}  // namespace

RealSeries to_real(const RationalSeries& f) {
  std::vector<double> c;
  c.reserve(f.degree_bound() + 1);
  for (const auto& x : f.coeffs()) c.push_back(to_double(x));
  return RealSeries(std::move(c));
}

PolynomialSymbol::PolynomialSymbol(std::vector<Rational> alphas) : alphas_(std::move(alphas)) {
  if (alphas_.empty()) alphas_.emplace_back(0);
  while (alphas_.size() > 1 && alphas_.back() == 0) alphas_.pop_back();
  for (auto& a : alphas_) a.canonicalize();
}

PolynomialSymbol PolynomialSymbol::monomial(std::size_t m) {
  std::vector<Rational> a(m + 1, Rational(0));
  a[m] = 1;
  return PolynomialSymbol(std::move(a));
}

std::size_t PolynomialSymbol::valuation() const {
  for (std::size_t m = 0; m < alphas_.size(); ++m) {
    if (alphas_[m] != 0) return m;
  }
  return 0;
}

std::optional<std::size_t> PolynomialSymbol::monomial_degree() const {
  const std::size_t d = degree();
  if (alphas_[d] != 1) return std::nullopt;
  for (std::size_t m = 0; m < d; ++m) {
    if (alphas_[m] != 0) return std::nullopt;
  }
  return d;
}

template <Scalar S>
double norm(const TruncatedSeries<S>& f, const WeightSequence& beta, double p) {
  std::vector<double> terms;
  terms.reserve(f.degree_bound() + 1);
  double largest = 0.0;
  for (std::size_t n = 0; n <= f.degree_bound(); ++n) {
    const double a = magnitude(f[n]);
    if (a == 0.0) continue;
    terms.push_back(stable_product({{a, std::log(a)}, beta.factor(n)}, {}));
    largest = std::max(largest, terms.back());
  }
  if (p == 1.0) {
    double sum = 0.0;
    for (double t : terms) sum += t;
    return sum;
  }
  // Scale by the largest term so that t^p neither underflows nor overflows.
  if (largest == 0.0 || !std::isfinite(largest)) return largest;
  double sum = 0.0;
  for (double t : terms) sum += std::pow(t / largest, p);
  return largest * std::pow(sum, 1.0 / p);
}

template <Scalar S>
TruncatedSeries<S> cauchy_product(const TruncatedSeries<S>& f, const TruncatedSeries<S>& g, std::size_t degree_bound) {
  std::vector<S> c(degree_bound + 1, S(0));
  for (std::size_t k = 0; k <= f.degree_bound() && k <= degree_bound; ++k) {
    if (f[k] == S(0)) continue;
    for (std::size_t j = 0; j <= g.degree_bound() && k + j <= degree_bound; ++j) {
      if (g[j] == S(0)) continue;
      c[k + j] += f[k] * g[j];
    }
  }
  return TruncatedSeries<S>(std::move(c));
}

template <Scalar S>
TruncatedSeries<S> diamond_product(const TruncatedSeries<S>& f, const TruncatedSeries<S>& g,
                                   const DeltaSequence& delta, std::size_t degree_bound) {
  std::vector<S> c(degree_bound + 1, S(0));
  for (std::size_t k = 0; k <= f.degree_bound() && k <= degree_bound; ++k) {
    if (f[k] == S(0)) continue;
    for (std::size_t j = 0; j <= g.degree_bound() && k + j <= degree_bound; ++j) {
      if (g[j] == S(0)) continue;
      c[k + j] += kernel_of<S>(delta, k + j, k) * f[k] * g[j];
    }
  }
  return TruncatedSeries<S>(std::move(c));
}

template <Scalar S>
TruncatedSeries<S> compose(const TruncatedSeries<S>& f, const PolynomialSymbol& phi, std::size_t degree_bound) {
  const auto phi_series = phi.as_series<S>(degree_bound);
  TruncatedSeries<S> result(degree_bound);
  auto power = TruncatedSeries<S>::one(degree_bound);
  const std::size_t top = f.degree();
  for (std::size_t L = 0; L <= top; ++L) {
    if (L > 0) power = cauchy_product(power, phi_series, degree_bound);
    if (f[L] != S(0)) result = result + f[L] * power;
  }
  return result;
}

template <Scalar S>
TruncatedSeries<S> diamond_substitute(const TruncatedSeries<S>& u, const TruncatedSeries<S>& f,
                                      const PolynomialSymbol& phi, const DeltaSequence& delta,
                                      std::size_t degree_bound) {
  return diamond_product(u, compose(f, phi, degree_bound), delta, degree_bound);
}

template double norm(const RealSeries&, const WeightSequence&, double);
template double norm(const RationalSeries&, const WeightSequence&, double);
template RealSeries cauchy_product(const RealSeries&, const RealSeries&, std::size_t);
template RationalSeries cauchy_product(const RationalSeries&, const RationalSeries&, std::size_t);
template RealSeries diamond_product(const RealSeries&, const RealSeries&, const DeltaSequence&, std::size_t);
template RationalSeries diamond_product(const RationalSeries&, const RationalSeries&, const DeltaSequence&,
                                        std::size_t);
template RealSeries compose(const RealSeries&, const PolynomialSymbol&, std::size_t);
template RationalSeries compose(const RationalSeries&, const PolynomialSymbol&, std::size_t);
template RealSeries diamond_substitute(const RealSeries&, const RealSeries&, const PolynomialSymbol&,
                                       const DeltaSequence&, std::size_t);
template RationalSeries diamond_substitute(const RationalSeries&, const RationalSeries&, const PolynomialSymbol&,
                                           const DeltaSequence&, std::size_t);

}  // namespace fpsop
