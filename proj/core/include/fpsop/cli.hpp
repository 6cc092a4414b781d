#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fpsop/certificate.hpp"
#include "fpsop/rational.hpp"
#include "fpsop/series.hpp"
#include "fpsop/weights.hpp"

namespace fpsop::cli {

/// Malformed JSON; the message carries line and column.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad command-line usage, e.g. an unknown theorem name.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A series or symbol given either as z^monomial or as an explicit coefficient list.
struct SeriesSpec {
  std::optional<std::size_t> monomial;
  std::vector<Rational> coeffs;

  static SeriesSpec unity() { return SeriesSpec{std::nullopt, {Rational(1)}}; }

  std::size_t degree() const;
  RationalSeries to_series(std::size_t degree_bound) const;
  PolynomialSymbol to_symbol() const;
  /// m when the spec is z^m with unit coefficient, in either form.
  std::optional<std::size_t> monomial_degree() const;

  friend bool operator==(const SeriesSpec&, const SeriesSpec&) = default;
};

struct TruncationSpec {
  std::size_t degree = 1024;
  std::optional<std::size_t> l_max;
  std::size_t tail_window = 8;
  double tolerance = 1e-4;
  double cap = 1e12;
  friend bool operator==(const TruncationSpec&, const TruncationSpec&) = default;
};

struct EstimateSpec {
  std::size_t max_iters = 100000;
  double tol = 1e-12;
  std::size_t budget = 20000;
  friend bool operator==(const EstimateSpec&, const EstimateSpec&) = default;
};

struct AlgebraSpec {
  std::size_t trials = 20;
  std::size_t degree = 8;
  friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;
};

struct Config {
  double p = 2.0;
  BetaSpec beta = NamedPreset{"hardy"};
  DeltaSpec delta = NamedPreset{"ones"};
  SeriesSpec u = SeriesSpec::unity();
  std::optional<SeriesSpec> phi;
  std::optional<SeriesSpec> f;
  std::optional<SeriesSpec> g;
  TruncationSpec truncation;
  EstimateSpec estimate;
  AlgebraSpec algebra;
  std::uint64_t seed = 0;

  SpaceConfig space() const;
  friend bool operator==(const Config&, const Config&) = default;
};

/// Parses and validates a JSON configuration. Throws ParseError for malformed
/// JSON and ValidationError for p < 1, delta_0 != 1 and similar.
Config parse_config(std::string_view text);
Config load_config(const std::string& path);

/// Canonical JSON text of a configuration; parse_config inverts it.
std::string serialize(const Config& config);

enum class Command { norm, product, compose, theta, bound, estimate, check_algebra };

Command parse_command(std::string_view name);
std::string_view to_string(Command command);

/// Certificate names used in reports.
///   thm21.norm              exact ||C_phi|| for phi = z^m
///   thm22.upper/lower       polynomial phi, u = 1
///   thm23.upper/lower       series u, phi = z^m
///   cor24.alpha0            diamond-multiplication bound
///   thm25.upper/lower       u = z^m0, polynomial phi
///   cor26.gamma/K           u = z^m1, phi = z^m2
///   operator.column_lower   monomial lower bound on the truncated matrix
inline constexpr std::string_view kTheorems[] = {"thm21", "thm22", "thm23", "cor24", "thm25", "cor26"};

struct RunOptions {
  std::optional<std::string> theorem;
  bool quiet = false;
  bool timing = false;
  std::optional<std::uint64_t> seed;
};

/// Runs one command and returns the pretty-printed JSON report.
/// Divergent certificates are findings, not errors; errors throw.
std::string run(Command command, const Config& config, const RunOptions& options);

}  // namespace fpsop::cli
