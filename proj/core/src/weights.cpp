#include "fpsop/weights.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fpsop/errors.hpp"

namespace fpsop {

namespace {

bool is_normal_positive(double x) { return std::isnormal(x) && x > 0.0; }

double binomial_double(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  // Each partial product is C(n-k+i, i), so intermediate values stay integral.
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

double log_binomial(std::size_t n, std::size_t k) {
  const auto dn = static_cast<double>(n);
  const auto dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
}

}  // namespace

double stable_product(std::initializer_list<LogFactor> num, std::initializer_list<LogFactor> den) {
  double direct = 1.0;
  bool ok = true;
  for (const auto& f : num) {
    ok = ok && is_normal_positive(f.value);
    direct *= f.value;
  }
  for (const auto& f : den) {
    ok = ok && is_normal_positive(f.value);
    direct /= f.value;
  }
  if (ok && is_normal_positive(direct)) return direct;
  double log_sum = 0.0;
  for (const auto& f : num) log_sum += f.log;
  for (const auto& f : den) log_sum -= f.log;
  return std::exp(log_sum);
}

// ---------------------------------------------------------------------------

WeightSequence::WeightSequence(std::string label, Formula value, Formula log_value,
                               std::optional<std::size_t> length, std::vector<std::string> warnings,
                               std::size_t max_cached) {
  auto state = std::make_shared<State>();
  state->label = std::move(label);
  state->value = std::move(value);
  state->log_value = std::move(log_value);
  state->length = length;
  state->warnings = std::move(warnings);
  std::size_t cached = max_cached + 1;
  if (length) cached = std::min(cached, *length);
  state->cache.reserve(cached);
  for (std::size_t n = 0; n < cached; ++n) {
    const LogFactor f{state->value(n), state->log_value(n)};
    if (!(f.value > 0.0) && !std::isfinite(f.log)) {
      throw ValidationError("weight " + state->label + " is not positive at n=" + std::to_string(n));
    }
    state->cache.push_back(f);
  }
  state_ = std::move(state);
}

LogFactor WeightSequence::factor(std::size_t n) const {
  if (n < state_->cache.size()) return state_->cache[n];
  if (state_->length && n >= *state_->length) {
    throw std::out_of_range("weight " + state_->label + " has " + std::to_string(*state_->length) +
                            " explicit values; index " + std::to_string(n) + " requested");
  }
  return {state_->value(n), state_->log_value(n)};
}

WeightSequence make_beta(const BetaSpec& spec) {
  auto power_law = [](std::string label, double e, std::vector<std::string> warnings = {}) {
    if (!std::isfinite(e)) throw ValidationError("power-law exponent must be finite");
    auto value = [e](std::size_t n) {
      const double base = static_cast<double>(n) + 1.0;
      if (e == 0.5) return std::sqrt(base);
      if (e == -0.5) return 1.0 / std::sqrt(base);
      return std::pow(base, e);
    };
    auto log_value = [e](std::size_t n) { return e * std::log1p(static_cast<double>(n)); };
    return WeightSequence(std::move(label), value, log_value, std::nullopt, std::move(warnings));
  };

  if (const auto* preset = std::get_if<NamedPreset>(&spec)) {
    if (preset->name == "hardy") return power_law("hardy", 0.0);
    if (preset->name == "bergman") return power_law("bergman", -0.5);
    if (preset->name == "dirichlet") return power_law("dirichlet", 0.5);
    throw ValidationError("unknown beta preset '" + preset->name + "' (expected hardy, bergman, dirichlet)");
  }
  if (const auto* law = std::get_if<PowerLaw>(&spec)) {
    return power_law("power(" + std::to_string(law->exponent) + ")", law->exponent);
  }
  if (const auto* geo = std::get_if<GeometricWeight>(&spec)) {
    const double r = geo->ratio;
    if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("geometric beta ratio must be positive");
    const double lr = std::log(r);
    return WeightSequence(
        "geometric", [r](std::size_t n) { return std::pow(r, static_cast<double>(n)); },
        [lr](std::size_t n) { return lr * static_cast<double>(n); });
  }
  if (const auto* gauss = std::get_if<GaussianWeight>(&spec)) {
    const double r = gauss->ratio;
    if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("gaussian beta ratio must be positive");
    const double lr = std::log(r);
    return WeightSequence(
        "gaussian",
        [r](std::size_t n) {
          const auto x = static_cast<double>(n);
          return std::pow(r, x * x);
        },
        [lr](std::size_t n) {
          const auto x = static_cast<double>(n);
          return lr * x * x;
        });
  }

  const auto& values = std::get<std::vector<double>>(spec);
  if (values.empty()) throw ValidationError("explicit beta needs at least one value");
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (!(values[n] > 0.0) || !std::isfinite(values[n])) {
      throw ValidationError("beta values must be positive and finite (index " + std::to_string(n) + ")");
    }
  }
  std::vector<std::string> warnings;
  if (values[0] != 1.0) warnings.emplace_back("β(0)≠1");
  return WeightSequence(
      "custom", [values](std::size_t n) { return values[n]; },
      [values](std::size_t n) { return std::log(values[n]); }, values.size(), std::move(warnings));
}

WeightSequence tilde_beta(const WeightSequence& beta, const DeltaSequence& delta) {
  const auto length = beta.length();
  auto factor = [beta, delta](std::size_t n) {
    const LogFactor k = delta.kernel_factor(n + 1, 1);
    const LogFactor b = beta.factor(n);
    return LogFactor{stable_product({k, b}, {}), k.log + b.log};
  };
  return WeightSequence(
      "tilde", [factor](std::size_t n) { return factor(n).value; },
      [factor](std::size_t n) { return factor(n).log; }, length, beta.warnings(),
      std::min(beta.max_cached(), kDefaultMaxCached));
}

// ---------------------------------------------------------------------------

DeltaSequence DeltaSequence::ones() { return DeltaSequence(Kind::ones, "ones"); }

DeltaSequence DeltaSequence::factorial() { return DeltaSequence(Kind::factorial, "factorial"); }

DeltaSequence DeltaSequence::inverse_factorial() {
  return DeltaSequence(Kind::inverse_factorial, "inverse-factorial");
}

DeltaSequence DeltaSequence::geometric(const Rational& ratio) {
  if (ratio <= 0) throw ValidationError("geometric delta ratio must be positive");
  DeltaSequence d(Kind::geometric, "geometric(" + to_string(ratio) + ")");
  d.ratio_ = ratio;
  return d;
}

DeltaSequence DeltaSequence::explicit_values(std::vector<Rational> values) {
  if (values.empty()) throw ValidationError("explicit delta needs at least one value");
  if (values[0] != 1) throw ValidationError("δ₀ must equal 1");
  DeltaSequence d(Kind::explicit_values, "custom");
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (values[n] <= 0) {
      throw ValidationError("delta values must be positive (index " + std::to_string(n) + ")");
    }
    d.values_.push_back(to_double(values[n]));
    d.logs_.push_back(std::log(d.values_.back()));
  }
  d.exact_ = std::move(values);
  return d;
}

void DeltaSequence::check_index(std::size_t n) const {
  if (kind_ == Kind::explicit_values && n >= exact_.size()) {
    throw std::out_of_range("delta has " + std::to_string(exact_.size()) + " explicit values; index " +
                            std::to_string(n) + " requested");
  }
}

Rational DeltaSequence::exact(std::size_t n) const {
  check_index(n);
  switch (kind_) {
    case Kind::ones:
      return Rational(1);
    case Kind::factorial:
      return Rational(fpsop::factorial(n));
    case Kind::inverse_factorial:
      return Rational(BigInt(1), fpsop::factorial(n));
    case Kind::geometric: {
      BigInt num;
      BigInt den;
      mpz_pow_ui(num.get_mpz_t(), ratio_.get_num_mpz_t(), static_cast<unsigned long>(n));
      mpz_pow_ui(den.get_mpz_t(), ratio_.get_den_mpz_t(), static_cast<unsigned long>(n));
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    case Kind::explicit_values:
      return exact_[n];
  }
  return Rational(1);
}

double DeltaSequence::operator()(std::size_t n) const {
  check_index(n);
  switch (kind_) {
    case Kind::ones:
      return 1.0;
    case Kind::factorial:
      return std::tgamma(static_cast<double>(n) + 1.0);
    case Kind::inverse_factorial:
      return 1.0 / std::tgamma(static_cast<double>(n) + 1.0);
    case Kind::geometric:
      return std::pow(to_double(ratio_), static_cast<double>(n));
    case Kind::explicit_values:
      return values_[n];
  }
  return 1.0;
}

double DeltaSequence::log(std::size_t n) const {
  check_index(n);
  switch (kind_) {
    case Kind::ones:
      return 0.0;
    case Kind::factorial:
      return std::lgamma(static_cast<double>(n) + 1.0);
    case Kind::inverse_factorial:
      return -std::lgamma(static_cast<double>(n) + 1.0);
    case Kind::geometric:
      return static_cast<double>(n) * std::log(to_double(ratio_));
    case Kind::explicit_values:
      return logs_[n];
  }
  return 0.0;
}

Rational DeltaSequence::exact_kernel(std::size_t n, std::size_t k) const {
  if (k > n) throw std::out_of_range("kernel index k exceeds n");
  check_index(n);
  switch (kind_) {
    case Kind::ones:
    case Kind::geometric:
      return Rational(1);
    case Kind::factorial:
      return Rational(binomial(n, k));
    case Kind::inverse_factorial:
      return Rational(BigInt(1), binomial(n, k));
    case Kind::explicit_values: {
      Rational q = exact_[n] / (exact_[k] * exact_[n - k]);
      q.canonicalize();
      return q;
    }
  }
  return Rational(1);
}

LogFactor DeltaSequence::kernel_factor(std::size_t n, std::size_t k) const {
  if (k > n) throw std::out_of_range("kernel index k exceeds n");
  check_index(n);
  switch (kind_) {
    case Kind::ones:
    case Kind::geometric:
      return {1.0, 0.0};
    case Kind::factorial:
      return {binomial_double(n, k), log_binomial(n, k)};
    case Kind::inverse_factorial:
      return {1.0 / binomial_double(n, k), -log_binomial(n, k)};
    case Kind::explicit_values: {
      const double log = logs_[n] - logs_[k] - logs_[n - k];
      return {stable_product({{values_[n], logs_[n]}}, {{values_[k], logs_[k]}, {values_[n - k], logs_[n - k]}}),
              log};
    }
  }
  return {1.0, 0.0};
}

DeltaSequence make_delta(const DeltaSpec& spec) {
  if (const auto* preset = std::get_if<NamedPreset>(&spec)) {
    if (preset->name == "ones") return DeltaSequence::ones();
    if (preset->name == "factorial") return DeltaSequence::factorial();
    if (preset->name == "inverse-factorial") return DeltaSequence::inverse_factorial();
    throw ValidationError("unknown delta preset '" + preset->name +
                          "' (expected ones, factorial, inverse-factorial)");
  }
  if (const auto* geo = std::get_if<GeometricDelta>(&spec)) return DeltaSequence::geometric(geo->ratio);
  return DeltaSequence::explicit_values(std::get<std::vector<Rational>>(spec));
}

// ---------------------------------------------------------------------------

double conjugate_exponent(double p) {
  if (!(p >= 1.0)) throw ValidationError("p must be ≥ 1");
  if (!std::isfinite(p)) throw ValidationError("p must be finite");
  if (p == 1.0) return kInfinity;
  return p / (p - 1.0);
}

Rational conjugate_exponent(const Rational& p) {
  if (p <= 1) throw ValidationError("exact conjugate exponent needs p > 1");
  Rational q = p / (p - 1);
  q.canonicalize();
  return q;
}

SpaceConfig SpaceConfig::make(double p, std::size_t truncation_degree, std::size_t tail_window, double tolerance,
                              double cap, std::optional<std::size_t> l_max) {
  SpaceConfig c;
  c.q = conjugate_exponent(p);
  c.p = p;
  if (tail_window < 1) throw ValidationError("tail_window must be ≥ 1");
  if (truncation_degree < tail_window) throw ValidationError("truncation degree must be ≥ tail_window");
  if (!(tolerance > 0.0)) throw ValidationError("tolerance must be positive");
  if (!(cap > 0.0)) throw ValidationError("cap must be positive");
  c.truncation_degree = truncation_degree;
  c.tail_window = tail_window;
  c.tolerance = tolerance;
  c.cap = cap;
  c.l_max = l_max.value_or(truncation_degree);
  return c;
}

}  // namespace fpsop
