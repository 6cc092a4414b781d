#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpsop/certificate.hpp"
#include "fpsop/series.hpp"
#include "fpsop/weights.hpp"

namespace fpsop {

enum class OperatorKind { composition, diamond_multiplication, substitution };

std::string_view to_string(OperatorKind kind);

/// Builds whose stored entries (matrix nonzeros plus theta table) exceed this are rejected.
inline constexpr std::size_t kMaxStoredEntries = 10'000'000;

/// Truncated matrix of C_phi, M_{diamond,u} or u diamond C_phi in the monomial
/// basis: rows n in [0, N_rows], columns L in [0, N_cols]. Column L holds the
/// image of z^L. Stored column-compressed; only nonzeros are kept.
template <Scalar S>
class OperatorMatrix {
 public:
  struct Column {
    std::span<const std::size_t> rows;
    std::span<const S> values;
  };

  OperatorMatrix(OperatorKind kind, std::size_t n_rows, std::size_t n_cols, std::vector<std::size_t> col_start,
                 std::vector<std::size_t> row_index, std::vector<S> values, std::string provenance = {},
                 std::vector<std::string> warnings = {});

  /// Dense (row-major) input, mostly for tests.
  static OperatorMatrix from_dense(const std::vector<std::vector<S>>& rows, OperatorKind kind = OperatorKind::composition);

  OperatorKind kind() const { return kind_; }
  /// Largest row index N_rows and column index N_cols.
  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }
  std::size_t nonzeros() const { return values_.size(); }
  const std::string& provenance() const { return provenance_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  S entry(std::size_t n, std::size_t L) const;
  Column column(std::size_t L) const;

  OperatorMatrix<double> to_real() const;

 private:
  OperatorKind kind_;
  std::size_t n_rows_;
  std::size_t n_cols_;
  std::vector<std::size_t> col_start_;
  std::vector<std::size_t> row_index_;
  std::vector<S> values_;
  std::string provenance_;
  std::vector<std::string> warnings_;
};

using RealOperator = OperatorMatrix<double>;
using RationalOperator = OperatorMatrix<Rational>;

/// Column L is the coefficient vector of (u diamond C_phi)(z^L), C_phi z^L or
/// u diamond z^L, truncated at N_rows. Substitution and diamond_multiplication
/// require u. Throws ResourceError past kMaxStoredEntries.
template <Scalar S>
OperatorMatrix<S> build_matrix(OperatorKind kind, const std::optional<TruncatedSeries<S>>& u,
                               const PolynomialSymbol& phi, const DeltaSequence& delta, std::size_t n_rows,
                               std::size_t n_cols);

/// Matrix-vector product on coefficient vectors. Requires deg f <= N_cols.
template <Scalar S>
TruncatedSeries<S> apply(const OperatorMatrix<S>& T, const TruncatedSeries<S>& f);

/// max_L ||T z^L||_beta / beta(L); attained_at is the smallest maximising column.
BoundCertificate column_lower_bound(const RealOperator& T, const WeightSequence& beta, double p,
                                    std::size_t tail_window = 8, double tolerance = 1e-4);

/// Largest singular value of D_beta T D_beta^{-1} by power iteration on the
/// Gram operator from the normalised all-ones vector. Reported as a lower
/// bound on the untruncated norm. Throws std::domain_error on non-finite entries.
BoundCertificate norm_estimate_l2(const RealOperator& T, const WeightSequence& beta, std::size_t max_iters = 100000,
                                  double tol = 1e-12);

/// Best ||Tx||_beta / ||x||_beta over monomials, seeded random sparse vectors,
/// p-norm power steps and coordinate ascent, within `budget` evaluations.
BoundCertificate norm_lower_search(const RealOperator& T, const WeightSequence& beta, double p,
                                   std::size_t budget = 20000, std::uint64_t seed = 0);

}  // namespace fpsop
