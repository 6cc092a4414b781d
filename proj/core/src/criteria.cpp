#include "fpsop/criteria.hpp"

#include <cmath>
#include <string>

#include "fpsop/combinatorics.hpp"
#include "fpsop/errors.hpp"
#include "fpsop/operators.hpp"

namespace fpsop {

namespace {

constexpr const char* kHolderLimitNote = "p=1: inner l^q sums replaced by suprema (q=inf)";

LogFactor positive(double x) { return {x, std::log(x)}; }

/// Accumulates sum t^q, or max t when q is infinite.
class PowerSum {
 public:
  explicit PowerSum(double q) : q_(q) {}
  void add(double t) {
    if (std::isinf(q_)) {
      acc_ = std::max(acc_, t);
    } else if (t > 0.0) {
      acc_ += q_ == 1.0 ? t : std::pow(t, q_);
    }
  }
  /// sum t^q (or max t).
  double power() const { return acc_; }
  /// The l^q norm of the added terms.
  double norm() const { return std::isinf(q_) || q_ == 1.0 ? acc_ : std::pow(acc_, 1.0 / q_); }

 private:
  double q_;
  double acc_ = 0.0;
};

/// Truncated inner L-sums must end in a strictly decaying tail whose
/// geometric extrapolation is below tolerance.
bool inner_tail_resolved(double t1, double t2, double t3, double q, double tolerance) {
  auto pw = [q](double t) { return std::isinf(q) || q == 1.0 ? t : std::pow(t, q); };
  const double a1 = pw(t1);
  const double a2 = pw(t2);
  const double a3 = pw(t3);
  if (a1 == 0.0 && a2 == 0.0 && a3 == 0.0) return true;
  if (!(a1 > a2 && a2 > a3)) return false;
  if (a3 == 0.0) return true;
  const double rho = a3 / a2;
  if (std::isinf(q)) return true;
  return a3 * rho / (1.0 - rho) <= tolerance;
}

double pth_root(double x, double p) { return p == 1.0 ? x : std::pow(x, 1.0 / p); }
double pth_power(double x, double p) { return p == 1.0 ? x : std::pow(x, p); }

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

void require_table_fits(const PolynomialSymbol& phi, std::size_t n_max, std::size_t l_max) {
  const std::size_t footprint = theta_table_footprint(phi, n_max, l_max);
  if (footprint > kMaxStoredEntries) {
    throw ResourceError("theta table of " + std::to_string(footprint) + " entries exceeds the storage guard");
  }
}

/// l^q norm over L of |theta_{row,L}| * scale / beta(L), with the L-range
/// implied by the symbol's support and the tail check when it is unbounded.
struct InnerNorm {
  double norm = 0.0;
  bool resolved = true;
};

InnerNorm inner_theta_norm(const ThetaTable<double>& table, const CriterionContext& ctx, std::size_t row,
                           LogFactor scale) {
  const auto& phi = table.phi();
  const std::size_t d = phi.degree();
  const std::size_t v = phi.valuation();
  const std::size_t l_max = ctx.space.l_max;
  const double q = ctx.space.q;

  InnerNorm out;
  std::size_t lo = d == 0 ? 0 : ceil_div(row, d);
  std::size_t hi = l_max;
  if (d == 0 && row > 0) return out;
  if (v >= 1) {
    hi = std::min(hi, row / v);
    if (row / v > l_max) out.resolved = false;
  }
  PowerSum acc(q);
  double tail[3] = {0.0, 0.0, 0.0};
  for (std::size_t L = lo; L <= hi; ++L) {
    const double th = std::fabs(table(row, L));
    double t = 0.0;
    if (th != 0.0) t = stable_product({positive(th), scale}, {ctx.beta.factor(L)});
    acc.add(t);
    if (L + 3 > l_max) tail[L + 2 - l_max] = t;
  }
  if (v == 0 && !inner_tail_resolved(tail[0], tail[1], tail[2], q, ctx.space.tolerance)) out.resolved = false;
  out.norm = acc.norm();
  return out;
}

void add_common_notes(BoundCertificate& cert, const CriterionContext& ctx) {
  if (ctx.space.p == 1.0) cert.notes.emplace_back(kHolderLimitNote);
}

}  // namespace

BoundCertificate monomial_composition_norm(const CriterionContext& ctx, std::size_t m) {
  if (m == 0) {
    throw ValidationError("phi = z^0 is rank one; use polynomial_composition_bounds with a constant symbol");
  }
  RunningValue running(RunningValue::Mode::supremum);
  for (std::size_t n = 0; n <= ctx.space.truncation_degree; ++n) {
    running.push(stable_product({ctx.beta.factor(n * m)}, {ctx.beta.factor(n)}));
  }
  return running.finish(BoundKind::exact, ctx.space, [](double x) { return x; }, true);
}

BoundPair polynomial_composition_bounds(const CriterionContext& ctx, const PolynomialSymbol& phi) {
  const auto& space = ctx.space;
  const std::size_t N = space.truncation_degree;
  const std::size_t d = phi.degree();
  const std::size_t n_in = d == 0 ? N : N / d;
  require_table_fits(phi, N, std::max(space.l_max, n_in));
  const auto table = ThetaTable<double>::build(phi, N, std::max(space.l_max, n_in));

  RunningValue upper(RunningValue::Mode::sum);
  bool inner_resolved = true;
  for (std::size_t n = 0; n <= N; ++n) {
    const InnerNorm inner = inner_theta_norm(table, ctx, n, ctx.beta.factor(n));
    inner_resolved = inner_resolved && inner.resolved;
    upper.push(pth_power(inner.norm, space.p));
  }
  BoundPair out;
  out.upper = upper.finish(BoundKind::upper, space, [p = space.p](double b) { return pth_root(b, p); }, false);
  if (!inner_resolved) {
    out.upper.converged = false;
    out.upper.notes.emplace_back("inner L-sum tail not resolved at L_max=" + std::to_string(space.l_max));
  }
  add_common_notes(out.upper, ctx);

  RunningValue lower(RunningValue::Mode::supremum);
  for (std::size_t n = 0; n <= n_in; ++n) {
    const LogFactor bn = ctx.beta.factor(n);
    double sum = 0.0;
    const auto band = table.band(n);
    const std::size_t offset = table.offset(n);
    for (std::size_t j = 0; j < band.size(); ++j) {
      const double th = std::fabs(band[j]);
      if (th == 0.0) continue;
      sum += pth_power(stable_product({positive(th), ctx.beta.factor(offset + j)}, {bn}), space.p);
    }
    lower.push(pth_root(sum, space.p));
  }
  out.lower = lower.finish(BoundKind::lower, space, [](double x) { return x; }, true);
  return out;
}

BoundPair monomial_symbol_substitution_bounds(const CriterionContext& ctx, const RealSeries& u, std::size_t m) {
  if (m == 0) throw ValidationError("m must be ≥ 1");
  const auto& space = ctx.space;
  const std::size_t N = space.truncation_degree;

  RunningValue alpha(RunningValue::Mode::supremum);
  for (std::size_t n = 0; n <= N; ++n) {
    const LogFactor bn = ctx.beta.factor(n);
    PowerSum acc(space.q);
    for (std::size_t k = n % m; k <= n; k += m) {
      acc.add(stable_product({ctx.delta.kernel_factor(n, k), bn},
                             {ctx.beta.factor(k), ctx.beta.factor((n - k) / m)}));
    }
    alpha.push(acc.power());
  }
  const double u_norm = norm(u, ctx.beta, space.p);
  BoundPair out;
  out.upper = alpha.finish(
      BoundKind::upper, space,
      [q = space.q, u_norm](double a) { return (std::isinf(q) ? a : std::pow(a, 1.0 / q)) * u_norm; }, true);
  add_common_notes(out.upper, ctx);

  RunningValue lower(RunningValue::Mode::supremum);
  const std::size_t u_top = u.degree();
  for (std::size_t l = 0; l * m <= N; ++l) {
    const std::size_t base = l * m;
    const LogFactor bl = ctx.beta.factor(l);
    double sum = 0.0;
    for (std::size_t j = 0; j <= u_top && base + j <= N; ++j) {
      const double a = std::fabs(u[j]);
      if (a == 0.0) continue;
      const std::size_t n = base + j;
      sum += pth_power(stable_product({ctx.delta.kernel_factor(n, base), ctx.beta.factor(n), positive(a)}, {bl}),
                       space.p);
    }
    lower.push(pth_root(sum, space.p));
  }
  out.lower = lower.finish(BoundKind::lower, space, [](double x) { return x; }, true);
  return out;
}

BoundCertificate diamond_multiplication_bound(const CriterionContext& ctx) {
  const auto& space = ctx.space;
  RunningValue alpha(RunningValue::Mode::supremum);
  for (std::size_t n = 0; n <= space.truncation_degree; ++n) {
    const LogFactor bn = ctx.beta.factor(n);
    PowerSum acc(space.q);
    for (std::size_t k = 0; k <= n; ++k) {
      acc.add(stable_product({ctx.delta.kernel_factor(n, k), bn}, {ctx.beta.factor(k), ctx.beta.factor(n - k)}));
    }
    alpha.push(acc.power());
  }
  BoundCertificate cert = alpha.finish(
      BoundKind::upper, space, [q = space.q](double a) { return std::isinf(q) ? a : std::pow(a, 1.0 / q); }, true);
  add_common_notes(cert, ctx);
  return cert;
}

BoundPair monomial_multiplier_substitution_bounds(const CriterionContext& ctx, std::size_t m0,
                                                  const PolynomialSymbol& phi) {
  const auto& space = ctx.space;
  const std::size_t N = space.truncation_degree;
  const std::size_t d = phi.degree();
  if (m0 > N) throw ValidationError("m0 exceeds the truncation degree");
  const std::size_t rows = N - m0;
  const std::size_t l_in = d == 0 ? N : rows / d;
  require_table_fits(phi, rows, std::max(space.l_max, l_in));
  const auto table = ThetaTable<double>::build(phi, rows, std::max(space.l_max, l_in));

  RunningValue alpha(RunningValue::Mode::sum);
  bool inner_resolved = true;
  for (std::size_t n = 0; n <= N; ++n) {
    if (n < m0) {
      alpha.push(0.0);
      continue;
    }
    const InnerNorm inner = inner_theta_norm(table, ctx, n - m0, {1.0, 0.0});
    inner_resolved = inner_resolved && inner.resolved;
    if (inner.norm == 0.0) {
      alpha.push(0.0);
      continue;
    }
    const double weight =
        stable_product({ctx.delta.kernel_factor(n, m0), ctx.beta.factor(n), positive(inner.norm)}, {});
    alpha.push(pth_power(weight, space.p));
  }
  BoundPair out;
  out.upper = alpha.finish(BoundKind::upper, space, [p = space.p](double a) { return pth_root(a, p); }, false);
  if (!inner_resolved) {
    out.upper.converged = false;
    out.upper.notes.emplace_back("inner L-sum tail not resolved at L_max=" + std::to_string(space.l_max));
  }
  add_common_notes(out.upper, ctx);

  RunningValue lower(RunningValue::Mode::supremum);
  for (std::size_t l = 0; l <= l_in; ++l) {
    const LogFactor bl = ctx.beta.factor(l);
    double sum = 0.0;
    const auto band = table.band(l);
    const std::size_t offset = table.offset(l);
    for (std::size_t j = 0; j < band.size(); ++j) {
      const double th = std::fabs(band[j]);
      if (th == 0.0) continue;
      const std::size_t n = m0 + offset + j;
      sum += pth_power(
          stable_product({ctx.delta.kernel_factor(n, m0), positive(th), ctx.beta.factor(n)}, {bl}), space.p);
    }
    lower.push(pth_root(sum, space.p));
  }
  out.lower = lower.finish(BoundKind::lower, space, [](double x) { return x; }, true);
  return out;
}

BoundPair monomial_pair_bounds(const CriterionContext& ctx, std::size_t m1, std::size_t m2) {
  if (m2 == 0) throw ValidationError("m2 must be ≥ 1");
  const auto& space = ctx.space;
  const std::size_t N = space.truncation_degree;

  RunningValue gamma(RunningValue::Mode::supremum);
  for (std::size_t n = 0; n <= N; ++n) {
    if (!in_b_set(n, m1, m2)) {
      gamma.skip();
      continue;
    }
    gamma.push(stable_product({ctx.delta.kernel_factor(n, m1), ctx.beta.factor(n)},
                              {ctx.beta.factor((n - m1) / m2)}));
  }
  // K runs over the same rows n = m1 + m*m2 <= N as gamma and the truncated matrix.
  if (m1 > N) throw ValidationError("m1 exceeds the truncation degree");
  RunningValue k_sup(RunningValue::Mode::supremum);
  for (std::size_t m = 0; m <= (N - m1) / m2; ++m) {
    const std::size_t n = m1 + m * m2;
    k_sup.push(stable_product({ctx.delta.kernel_factor(n, m1), ctx.beta.factor(n)}, {ctx.beta.factor(m)}));
  }
  BoundPair out;
  out.upper = gamma.finish(BoundKind::upper, space, [](double x) { return x; }, true);
  out.lower = k_sup.finish(BoundKind::lower, space, [](double x) { return x; }, true);
  return out;
}

}  // namespace fpsop
