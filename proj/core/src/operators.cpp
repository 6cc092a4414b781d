#include "fpsop/operators.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "fpsop/combinatorics.hpp"
#include "fpsop/errors.hpp"

namespace fpsop {

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::composition:
      return "composition";
    case OperatorKind::diamond_multiplication:
      return "diamond-mult";
    case OperatorKind::substitution:
      return "substitution";
  }
  return "composition";
}

// ---------------------------------------------------------------------------
// OperatorMatrix

template <Scalar S>
OperatorMatrix<S>::OperatorMatrix(OperatorKind kind, std::size_t n_rows, std::size_t n_cols,
                                  std::vector<std::size_t> col_start, std::vector<std::size_t> row_index,
                                  std::vector<S> values, std::string provenance, std::vector<std::string> warnings)
    : kind_(kind),
      n_rows_(n_rows),
      n_cols_(n_cols),
      col_start_(std::move(col_start)),
      row_index_(std::move(row_index)),
      values_(std::move(values)),
      provenance_(std::move(provenance)),
      warnings_(std::move(warnings)) {
  if (col_start_.size() != n_cols_ + 2 || col_start_.back() != values_.size() ||
      row_index_.size() != values_.size()) {
    throw std::invalid_argument("inconsistent column-compressed operator layout");
  }
  for (std::size_t L = 0; L <= n_cols_; ++L) {
    for (std::size_t i = col_start_[L]; i < col_start_[L + 1]; ++i) {
      if (row_index_[i] > n_rows_ || (i > col_start_[L] && row_index_[i] <= row_index_[i - 1])) {
        throw std::invalid_argument("operator row indices must be increasing and within N_rows");
      }
    }
  }
}

template <Scalar S>
OperatorMatrix<S> OperatorMatrix<S>::from_dense(const std::vector<std::vector<S>>& rows, OperatorKind kind) {
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("dense operator needs at least one entry");
  const std::size_t n_cols = rows.front().size() - 1;
  std::vector<std::size_t> col_start{0};
  std::vector<std::size_t> row_index;
  std::vector<S> values;
  for (std::size_t L = 0; L <= n_cols; ++L) {
    for (std::size_t n = 0; n < rows.size(); ++n) {
      if (rows[n].size() != n_cols + 1) throw std::invalid_argument("ragged dense operator");
      if (rows[n][L] != S(0)) {
        row_index.push_back(n);
        values.push_back(rows[n][L]);
      }
    }
    col_start.push_back(values.size());
  }
  return OperatorMatrix(kind, rows.size() - 1, n_cols, std::move(col_start), std::move(row_index), std::move(values),
                        "dense");
}

template <Scalar S>
S OperatorMatrix<S>::entry(std::size_t n, std::size_t L) const {
  if (L > n_cols_ || n > n_rows_) return S(0);
  const auto first = row_index_.begin() + static_cast<std::ptrdiff_t>(col_start_[L]);
  const auto last = row_index_.begin() + static_cast<std::ptrdiff_t>(col_start_[L + 1]);
  const auto it = std::lower_bound(first, last, n);
  if (it == last || *it != n) return S(0);
  return values_[static_cast<std::size_t>(it - row_index_.begin())];
}

template <Scalar S>
typename OperatorMatrix<S>::Column OperatorMatrix<S>::column(std::size_t L) const {
  const std::size_t b = col_start_[L];
  const std::size_t e = col_start_[L + 1];
  return {std::span<const std::size_t>(row_index_).subspan(b, e - b), std::span<const S>(values_).subspan(b, e - b)};
}

template <Scalar S>
OperatorMatrix<double> OperatorMatrix<S>::to_real() const {
  std::vector<double> v;
  v.reserve(values_.size());
  for (const auto& x : values_) {
    if constexpr (std::same_as<S, double>) {
      v.push_back(x);
    } else {
      v.push_back(to_double(x));
    }
  }
  return OperatorMatrix<double>(kind_, n_rows_, n_cols_, col_start_, row_index_, std::move(v), provenance_,
                                warnings_);
}

template class OperatorMatrix<double>;
template class OperatorMatrix<Rational>;

// ---------------------------------------------------------------------------
// build_matrix / apply

namespace {

template <Scalar S>
S kernel_of(const DeltaSequence& delta, std::size_t n, std::size_t k) {
  if constexpr (std::same_as<S, double>) {
    return delta.kernel(n, k);
  } else {
    return delta.exact_kernel(n, k);
  }
}

std::string describe(OperatorKind kind, std::size_t u_degree, bool has_u, const PolynomialSymbol& phi,
                     const DeltaSequence& delta) {
  std::string s(to_string(kind));
  if (has_u) s += " u:deg" + std::to_string(u_degree);
  if (kind != OperatorKind::diamond_multiplication) s += " phi:deg" + std::to_string(phi.degree());
  s += " delta:" + delta.label();
  return s;
}

}  // namespace

template <Scalar S>
OperatorMatrix<S> build_matrix(OperatorKind kind, const std::optional<TruncatedSeries<S>>& u,
                               const PolynomialSymbol& phi, const DeltaSequence& delta, std::size_t n_rows,
                               std::size_t n_cols) {
  if (kind != OperatorKind::composition && !u) {
    throw std::invalid_argument(std::string(to_string(kind)) + " operator requires a multiplier u");
  }
  const std::size_t u_degree = u ? u->degree() : 0;
  std::vector<std::string> warnings;

  std::optional<ThetaTable<S>> thetas;
  std::size_t footprint = 0;
  if (kind != OperatorKind::diamond_multiplication) {
    footprint = theta_table_footprint(phi, n_rows, n_cols);
    if (footprint > kMaxStoredEntries) {
      throw ResourceError("theta table of " + std::to_string(footprint) + " entries exceeds the storage guard");
    }
    const std::size_t needed = phi.degree() * n_cols + (kind == OperatorKind::substitution ? u_degree : 0);
    if (n_rows < needed) {
      warnings.push_back("columns clipped: N_rows=" + std::to_string(n_rows) + " < d*N_cols + deg u=" +
                         std::to_string(needed));
    }
    thetas = ThetaTable<S>::build(phi, n_rows, n_cols);
  } else if (n_rows < n_cols + u_degree) {
    warnings.push_back("columns clipped: N_rows=" + std::to_string(n_rows) + " < N_cols + deg u=" +
                       std::to_string(n_cols + u_degree));
  }

  std::vector<std::size_t> u_support;
  if (u) {
    for (std::size_t k = 0; k <= u->degree_bound() && k <= n_rows; ++k) {
      if ((*u)[k] != S(0)) u_support.push_back(k);
    }
  }

  std::vector<std::size_t> col_start{0};
  std::vector<std::size_t> row_index;
  std::vector<S> values;
  std::vector<S> buffer(n_rows + 1, S(0));
  std::vector<char> touched(n_rows + 1, 0);
  std::vector<std::size_t> touched_rows;

  auto add = [&](std::size_t n, const S& x) {
    if (!touched[n]) {
      touched[n] = 1;
      touched_rows.push_back(n);
    }
    buffer[n] += x;
  };

  for (std::size_t L = 0; L <= n_cols; ++L) {
    switch (kind) {
      case OperatorKind::composition: {
        const auto band = thetas->band(L);
        for (std::size_t j = 0; j < band.size(); ++j) {
          if (band[j] != S(0)) add(thetas->offset(L) + j, band[j]);
        }
        break;
      }
      case OperatorKind::diamond_multiplication: {
        for (const std::size_t k : u_support) {
          const std::size_t n = L + k;
          if (n > n_rows) break;
          add(n, kernel_of<S>(delta, n, L) * (*u)[k]);
        }
        break;
      }
      case OperatorKind::substitution: {
        const auto band = thetas->band(L);
        const std::size_t offset = thetas->offset(L);
        for (const std::size_t k : u_support) {
          for (std::size_t j = 0; j < band.size(); ++j) {
            const std::size_t n = k + offset + j;
            if (n > n_rows) break;
            if (band[j] == S(0)) continue;
            add(n, kernel_of<S>(delta, n, k) * (*u)[k] * band[j]);
          }
        }
        break;
      }
    }
    std::sort(touched_rows.begin(), touched_rows.end());
    for (const std::size_t n : touched_rows) {
      if (buffer[n] != S(0)) {
        row_index.push_back(n);
        values.push_back(buffer[n]);
      }
      buffer[n] = S(0);
      touched[n] = 0;
    }
    touched_rows.clear();
    col_start.push_back(values.size());
    if (values.size() + footprint > kMaxStoredEntries) {
      throw ResourceError("operator build exceeds the storage guard of " + std::to_string(kMaxStoredEntries) +
                          " entries");
    }
  }

  return OperatorMatrix<S>(kind, n_rows, n_cols, std::move(col_start), std::move(row_index), std::move(values),
                           describe(kind, u_degree, u.has_value(), phi, delta), std::move(warnings));
}

template <Scalar S>
TruncatedSeries<S> apply(const OperatorMatrix<S>& T, const TruncatedSeries<S>& f) {
  if (f.degree() > T.n_cols()) {
    throw std::invalid_argument("series degree " + std::to_string(f.degree()) + " exceeds operator N_cols " +
                                std::to_string(T.n_cols()));
  }
  std::vector<S> out(T.n_rows() + 1, S(0));
  for (std::size_t L = 0; L <= T.n_cols() && L <= f.degree_bound(); ++L) {
    if (f[L] == S(0)) continue;
    const auto col = T.column(L);
    for (std::size_t i = 0; i < col.rows.size(); ++i) out[col.rows[i]] += col.values[i] * f[L];
  }
  return TruncatedSeries<S>(std::move(out));
}

template RealOperator build_matrix(OperatorKind, const std::optional<RealSeries>&, const PolynomialSymbol&,
                                   const DeltaSequence&, std::size_t, std::size_t);
template RationalOperator build_matrix(OperatorKind, const std::optional<RationalSeries>&, const PolynomialSymbol&,
                                       const DeltaSequence&, std::size_t, std::size_t);
template RealSeries apply(const RealOperator&, const RealSeries&);
template RationalSeries apply(const RationalOperator&, const RationalSeries&);

// ---------------------------------------------------------------------------
// Norm estimation. Everything below works on S = D_beta T D_beta^{-1}, where
// ||T x||_beta / ||x||_beta = ||S y||_p / ||y||_p with y = D_beta x.

namespace {

struct ScaledMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> col_start;
  std::vector<std::size_t> row_index;
  std::vector<double> values;

  void multiply(std::span<const double> x, std::span<double> y) const {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t L = 0; L < cols; ++L) {
      const double xl = x[L];
      if (xl == 0.0) continue;
      for (std::size_t i = col_start[L]; i < col_start[L + 1]; ++i) y[row_index[i]] += values[i] * xl;
    }
  }

  void multiply_transposed(std::span<const double> y, std::span<double> z) const {
    for (std::size_t L = 0; L < cols; ++L) {
      double acc = 0.0;
      for (std::size_t i = col_start[L]; i < col_start[L + 1]; ++i) acc += values[i] * y[row_index[i]];
      z[L] = acc;
    }
  }
};

ScaledMatrix scale(const RealOperator& T, const WeightSequence& beta) {
  ScaledMatrix s;
  s.rows = T.n_rows() + 1;
  s.cols = T.n_cols() + 1;
  s.col_start.push_back(0);
  for (std::size_t L = 0; L < s.cols; ++L) {
    const auto col = T.column(L);
    const LogFactor bl = beta.factor(L);
    for (std::size_t i = 0; i < col.rows.size(); ++i) {
      const double v = col.values[i];
      if (!std::isfinite(v)) throw std::domain_error("operator has a non-finite entry");
      const double a = std::fabs(v);
      const double scaled = stable_product({{a, std::log(a)}, beta.factor(col.rows[i])}, {bl});
      s.row_index.push_back(col.rows[i]);
      s.values.push_back(std::copysign(scaled, v));
    }
    s.col_start.push_back(s.values.size());
  }
  return s;
}

double p_norm(std::span<const double> x, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const double v : x) m = std::max(m, std::fabs(v));
    return m;
  }
  double scale = 0.0;
  for (const double v : x) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (const double v : x) sum += p == 1.0 ? std::fabs(v) / scale : std::pow(std::fabs(v) / scale, p);
  return scale * (p == 1.0 ? sum : std::pow(sum, 1.0 / p));
}

// Fills `out` with the dual vector of x: <out, x> = ||x||_p and ||out||_q = 1.
void dual_vector(std::span<const double> x, double p, std::span<double> out) {
  const double nx = p_norm(x, p);
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = nx == 0.0 ? 0.0 : std::copysign(std::pow(std::fabs(x[i]) / nx, p - 1.0), x[i]);
  }
}

double column_norm(const ScaledMatrix& s, std::size_t L, double p) {
  return p_norm(std::span<const double>(s.values).subspan(s.col_start[L], s.col_start[L + 1] - s.col_start[L]), p);
}

}  // namespace

BoundCertificate column_lower_bound(const RealOperator& T, const WeightSequence& beta, double p,
                                    std::size_t tail_window, double tolerance) {
  if (!(p >= 1.0)) throw ValidationError("p must be ≥ 1");
  const ScaledMatrix s = scale(T, beta);
  RunningValue running(RunningValue::Mode::supremum);
  for (std::size_t L = 0; L < s.cols; ++L) running.push(column_norm(s, L, p));

  SpaceConfig space;
  space.p = p;
  space.truncation_degree = T.n_cols();
  space.tail_window = std::max<std::size_t>(1, tail_window);
  space.tolerance = tolerance;
  space.cap = kInfinity;
  BoundCertificate cert = running.finish(BoundKind::lower, space, [](double x) { return x; }, false);
  // A finite monomial maximum is a valid lower bound whatever the tail does.
  cert.value = running.raw();
  cert.constant = cert.value;
  cert.attained_at = running.argmax();
  cert.notes.clear();
  for (const auto& w : T.warnings()) cert.notes.push_back(w);
  return cert;
}

BoundCertificate norm_estimate_l2(const RealOperator& T, const WeightSequence& beta, std::size_t max_iters,
                                  double tol) {
  // Power iteration on G = S^T S, accelerated by taking the best Rayleigh
  // quotient over the span of the iterates (Lanczos with full
  // reorthogonalisation, explicitly restarted from the best Ritz vector).
  // Every Ritz value is a Rayleigh quotient of G, so the result stays a lower
  // bound, and it never falls below plain power iteration from the same start.
  const ScaledMatrix s = scale(T, beta);
  const std::size_t n = s.cols;
  const std::size_t krylov = std::min<std::size_t>(n, 96);
  std::vector<double> y(s.rows);
  std::vector<double> w(n);
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<std::vector<double>> basis;
  basis.reserve(krylov);

  auto gram = [&](const std::vector<double>& v, std::vector<double>& out) {
    s.multiply(v, y);
    s.multiply_transposed(y, out);
  };
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
  };

  BoundCertificate cert;
  cert.kind = BoundKind::lower;
  cert.truncation_degree = T.n_cols();
  cert.converged = false;

  double best = 0.0;
  double previous_cycle = -1.0;
  std::size_t it = 0;
  while (it < max_iters) {
    basis.assign(1, x);
    std::vector<double> alpha;
    std::vector<double> offdiag;
    bool invariant = false;
    double residual = 0.0;
    Eigen::VectorXd ritz;
    double theta = 0.0;
    while (it < max_iters) {
      ++it;
      gram(basis.back(), w);
      alpha.push_back(dot(w, basis.back()));
      // Two passes of Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& v : basis) {
          const double c = dot(w, v);
          for (std::size_t i = 0; i < n; ++i) w[i] -= c * v[i];
        }
      }
      const double b = std::sqrt(dot(w, w));

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(alpha.size()));
      Eigen::VectorXd sub =
          Eigen::Map<const Eigen::VectorXd>(offdiag.data(), static_cast<Eigen::Index>(offdiag.size()));
      eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const Eigen::Index top = eig.eigenvalues().size() - 1;
      theta = eig.eigenvalues()(top);
      ritz = eig.eigenvectors().col(top);
      residual = b * std::fabs(ritz(top));

      if (b <= 1e-14 * std::max(theta, 1e-300) || basis.size() == krylov) {
        invariant = b <= 1e-14 * std::max(theta, 1e-300);
        break;
      }
      offdiag.push_back(b);
      std::vector<double> next(n);
      for (std::size_t i = 0; i < n; ++i) next[i] = w[i] / b;
      basis.push_back(std::move(next));
    }

    if (theta > best) best = theta;
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) x[i] += ritz(static_cast<Eigen::Index>(k)) * basis[k][i];
    }
    const double nx = std::sqrt(dot(x, x));
    if (!(nx > 0.0)) {
      cert.converged = true;
      break;
    }
    for (double& v : x) v /= nx;

    if (previous_cycle >= 0.0) cert.tail_delta = std::sqrt(best) - std::sqrt(previous_cycle);
    if (invariant || residual <= tol * best || (previous_cycle >= 0.0 && best - previous_cycle <= tol * best)) {
      cert.converged = true;
      if (previous_cycle < 0.0) cert.tail_delta = 0.0;
      break;
    }
    previous_cycle = best;
  }
  cert.iterations = it;
  cert.value = std::sqrt(std::max(best, 0.0));
  cert.constant = cert.value;
  for (const auto& note : T.warnings()) cert.notes.push_back(note);
  return cert;
}

BoundCertificate norm_lower_search(const RealOperator& T, const WeightSequence& beta, double p, std::size_t budget,
                                   std::uint64_t seed) {
  if (!(p >= 1.0)) throw ValidationError("p must be ≥ 1");
  const ScaledMatrix s = scale(T, beta);
  const double q = conjugate_exponent(p);
  std::size_t evaluations = 0;
  std::vector<double> y(s.rows);

  auto ratio = [&](std::span<const double> x) {
    ++evaluations;
    const double nx = p_norm(x, p);
    if (nx == 0.0) return 0.0;
    s.multiply(x, y);
    return p_norm(y, p) / nx;
  };

  // Monomials.
  double best = 0.0;
  std::optional<std::size_t> best_column;
  for (std::size_t L = 0; L < s.cols; ++L) {
    ++evaluations;
    const double v = column_norm(s, L, p);
    if (v > best) {
      best = v;
      best_column = L;
    }
  }
  std::vector<double> best_x(s.cols, 0.0);
  if (best_column) best_x[*best_column] = 1.0;

  // Random sparse vectors.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, s.cols - 1);
  const std::size_t samples = std::min<std::size_t>(64, budget / 8);
  const std::size_t support = std::min<std::size_t>(4, s.cols);
  std::vector<double> x(s.cols);
  for (std::size_t r = 0; r < samples; ++r) {
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t j = 0; j < support; ++j) x[pick(rng)] = gauss(rng);
    const double v = ratio(x);
    if (v > best) {
      best = v;
      best_x = x;
      best_column.reset();
    }
  }

  // p-norm power steps (Boyd's iteration); for p = 1 the column maximum is already the norm.
  if (p > 1.0) {
    std::vector<std::vector<double>> starts{best_x, std::vector<double>(s.cols, 1.0)};
    std::vector<double> w(s.rows);
    std::vector<double> z(s.cols);
    for (auto start : starts) {
      double current = ratio(start);
      while (evaluations < budget) {
        s.multiply(start, y);
        dual_vector(y, p, w);
        s.multiply_transposed(w, z);
        if (p_norm(z, q) == 0.0) break;
        dual_vector(z, q, start);
        const double next = ratio(start);
        if (!(next > current * (1.0 + 1e-15))) {
          current = std::max(current, next);
          break;
        }
        current = next;
      }
      if (current > best) {
        best = current;
        best_x = start;
        best_column.reset();
      }
    }
  }

  // Coordinate ascent from the best point.
  double step = 0.5;
  x = best_x;
  while (evaluations < budget && step > 1e-12) {
    bool improved = false;
    double scale = 0.0;
    for (const double v : x) scale = std::max(scale, std::fabs(v));
    for (std::size_t i = 0; i < s.cols && evaluations < budget; ++i) {
      for (const double sign : {1.0, -1.0}) {
        const double saved = x[i];
        x[i] = saved + sign * step * scale;
        const double v = ratio(x);
        if (v > best * (1.0 + 1e-15)) {
          best = v;
          best_column.reset();
          improved = true;
          break;
        }
        x[i] = saved;
      }
    }
    if (!improved) step *= 0.5;
  }

  BoundCertificate cert;
  cert.kind = BoundKind::lower;
  cert.value = best;
  cert.constant = best;
  cert.attained_at = best_column;
  cert.truncation_degree = T.n_cols();
  cert.iterations = evaluations;
  cert.converged = true;
  for (const auto& wmsg : T.warnings()) cert.notes.push_back(wmsg);
  return cert;
}

}  // namespace fpsop
