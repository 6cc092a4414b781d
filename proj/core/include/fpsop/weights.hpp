#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fpsop/rational.hpp"

namespace fpsop {

/// A positive quantity carried both directly and as its natural logarithm.
///
/// Weight ratios such as beta(nm)/beta(n) routinely leave the double range
/// for exponential weights while the ratio itself stays moderate; the log
/// form lets stable_product recover it.
struct LogFactor {
  double value;
  double log;
};

/// prod(num) / prod(den). Uses the direct values when every factor and the
/// result are normal doubles, otherwise exponentiates the summed logs.
double stable_product(std::initializer_list<LogFactor> num, std::initializer_list<LogFactor> den);

inline constexpr std::size_t kDefaultMaxCached = 4096;

/// The weight beta(n) defining ||f||_beta. Immutable; values up to max_cached
/// are computed once at construction so concurrent reads need no locking.
class WeightSequence {
 public:
  using Formula = std::function<double(std::size_t)>;

  /// Builds from closed forms for the value and its log. `length` bounds the
  /// valid index range for explicitly listed sequences.
  WeightSequence(std::string label, Formula value, Formula log_value,
                 std::optional<std::size_t> length = std::nullopt,
                 std::vector<std::string> warnings = {},
                 std::size_t max_cached = kDefaultMaxCached);

  double operator()(std::size_t n) const { return factor(n).value; }
  double log(std::size_t n) const { return factor(n).log; }
  LogFactor factor(std::size_t n) const;

  const std::string& label() const { return state_->label; }
  const std::vector<std::string>& warnings() const { return state_->warnings; }
  std::size_t max_cached() const { return state_->cache.size() == 0 ? 0 : state_->cache.size() - 1; }
  /// Number of valid indices for explicit sequences; nullopt when unbounded.
  std::optional<std::size_t> length() const { return state_->length; }

 private:
  struct State {
    std::string label;
    Formula value;
    Formula log_value;
    std::optional<std::size_t> length;
    std::vector<LogFactor> cache;
    std::vector<std::string> warnings;
  };
  std::shared_ptr<const State> state_;
};

/// The delta_n sequence behind the diamond-product kernel delta_{n+m}/(delta_n delta_m).
class DeltaSequence {
 public:
  enum class Kind { ones, factorial, inverse_factorial, geometric, explicit_values };

  static DeltaSequence ones();
  static DeltaSequence factorial();
  static DeltaSequence inverse_factorial();
  static DeltaSequence geometric(const Rational& ratio);
  /// Throws ValidationError unless values[0] == 1 and every value is positive.
  static DeltaSequence explicit_values(std::vector<Rational> values);

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  const Rational& ratio() const { return ratio_; }
  const std::vector<Rational>& values() const { return exact_; }

  Rational exact(std::size_t n) const;
  double operator()(std::size_t n) const;
  double log(std::size_t n) const;

  /// delta_n / (delta_k delta_{n-k}) for k <= n.
  Rational exact_kernel(std::size_t n, std::size_t k) const;
  double kernel(std::size_t n, std::size_t k) const { return kernel_factor(n, k).value; }
  LogFactor kernel_factor(std::size_t n, std::size_t k) const;

  /// True when the kernel is identically 1 (ones and geometric presets).
  bool unit_kernel() const { return kind_ == Kind::ones || kind_ == Kind::geometric; }

  friend bool operator==(const DeltaSequence& a, const DeltaSequence& b) {
    return a.kind_ == b.kind_ && a.ratio_ == b.ratio_ && a.exact_ == b.exact_;
  }

 private:
  DeltaSequence(Kind kind, std::string label) : kind_(kind), label_(std::move(label)) {}
  void check_index(std::size_t n) const;

  Kind kind_;
  std::string label_;
  Rational ratio_{1};
  std::vector<Rational> exact_;
  std::vector<double> values_;
  std::vector<double> logs_;
};

struct PowerLaw {
  double exponent;
  friend bool operator==(const PowerLaw&, const PowerLaw&) = default;
};
/// beta(n) = ratio^n
struct GeometricWeight {
  double ratio;
  friend bool operator==(const GeometricWeight&, const GeometricWeight&) = default;
};
/// beta(n) = ratio^(n^2)
struct GaussianWeight {
  double ratio;
  friend bool operator==(const GaussianWeight&, const GaussianWeight&) = default;
};
struct NamedPreset {
  std::string name;
  friend bool operator==(const NamedPreset&, const NamedPreset&) = default;
};

using BetaSpec = std::variant<NamedPreset, std::vector<double>, PowerLaw, GeometricWeight, GaussianWeight>;

/// Presets: hardy (1), bergman ((n+1)^-1/2), dirichlet ((n+1)^1/2).
/// A warning is attached when beta(0) != 1.
WeightSequence make_beta(const BetaSpec& spec);

struct GeometricDelta {
  Rational ratio;
  friend bool operator==(const GeometricDelta&, const GeometricDelta&) = default;
};
using DeltaSpec = std::variant<NamedPreset, std::vector<Rational>, GeometricDelta>;

/// Presets: ones, factorial, inverse-factorial; geometric(r) via GeometricDelta.
DeltaSequence make_delta(const DeltaSpec& spec);

/// beta~(n) = delta_{n+1} beta(n) / (delta_1 delta_n).
WeightSequence tilde_beta(const WeightSequence& beta, const DeltaSequence& delta);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// q with 1/p + 1/q = 1; p = 1 gives infinity.
double conjugate_exponent(double p);
/// Exact form for rational p > 1.
Rational conjugate_exponent(const Rational& p);

/// Parameters of l^p(beta) and of every truncated evaluation.
struct SpaceConfig {
  double p = 2.0;
  double q = 2.0;
  std::size_t truncation_degree = 1024;
  std::size_t tail_window = 8;
  double tolerance = 1e-4;
  /// Running values beyond this are treated as divergent when still growing.
  double cap = 1e12;
  /// Truncation of inner L-sums; defaults to truncation_degree.
  std::size_t l_max = 1024;

  /// Validates and derives q. Throws ValidationError.
  static SpaceConfig make(double p, std::size_t truncation_degree = 1024, std::size_t tail_window = 8,
                          double tolerance = 1e-4, double cap = 1e12,
                          std::optional<std::size_t> l_max = std::nullopt);

  friend bool operator==(const SpaceConfig&, const SpaceConfig&) = default;
};

}  // namespace fpsop
