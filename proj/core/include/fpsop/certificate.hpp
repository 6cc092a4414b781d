#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fpsop/weights.hpp"

namespace fpsop {

enum class BoundKind { lower, upper, exact };

std::string_view to_string(BoundKind kind);

/// A computed operator-norm bound together with the diagnostics of the
/// truncation that produced it.
struct BoundCertificate {
  /// Bound on the operator norm; +infinity when divergence was detected.
  double value = 0.0;
  BoundKind kind = BoundKind::lower;
  /// The criterion constant before its final root/scaling (alpha, alpha_0,
  /// B_d, gamma, K, M); equals value when no transform applies.
  double constant = 0.0;
  std::optional<std::size_t> attained_at;
  std::size_t truncation_degree = 0;
  /// Change of the running value over the last tail_window indices.
  double tail_delta = 0.0;
  bool converged = true;
  /// Power-iteration steps or search evaluations; 0 for closed-form criteria.
  std::size_t iterations = 0;
  std::vector<std::string> notes;
};

/// Tracks a running sup or partial sum over an outer index and turns its
/// history into a certificate with the divergence policy applied.
///
/// converged: |value(N) - value(N - W)| <= tolerance.
/// divergent: the value is non-finite, or it has not converged and either
/// exceeds the cap or its growth over the last window is at least half its
/// growth over the window ending at N/2 (increments are not dying out).
class RunningValue {
 public:
  enum class Mode { supremum, sum };

  explicit RunningValue(Mode mode) : mode_(mode) {}

  /// Feeds the term for the next outer index.
  void push(double term);
  /// Records an index without a contribution, keeping the history aligned.
  void skip() { push(mode_ == Mode::sum ? 0.0 : -kInfinity); }

  double raw() const { return history_.empty() ? 0.0 : std::max(history_.back(), 0.0); }
  std::size_t size() const { return history_.size(); }
  std::optional<std::size_t> argmax() const { return argmax_; }

  /// `transform` maps the raw running value (sup or partial sum) to the
  /// reported certificate value, e.g. a p-th root.
  BoundCertificate finish(BoundKind kind, const SpaceConfig& space, const std::function<double(double)>& transform,
                          bool report_attainment) const;

 private:
  Mode mode_;
  std::vector<double> history_;
  std::optional<std::size_t> argmax_;
};

}  // namespace fpsop
