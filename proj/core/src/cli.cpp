#include "fpsop/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fpsop/algebra.hpp"
#include "fpsop/combinatorics.hpp"
#include "fpsop/criteria.hpp"
#include "fpsop/errors.hpp"
#include "fpsop/operators.hpp"
#include "json.hpp"

namespace fpsop::cli {

using Json = nlohmann::ordered_json;
using fpsop::to_string;

namespace {

// ---------------------------------------------------------------------------
// Config parsing

std::string where(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

Rational rational_from_json(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return rational_from_double(j.get<double>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw ValidationError(field + ": expected a number or a \"num/den\" string");
}

double number_from_json(const Json& j, const std::string& field) {
  if (!j.is_number()) throw ValidationError(field + ": expected a number");
  return j.get<double>();
}

std::size_t index_from_json(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ValidationError(field + ": expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

const Json& object_field(const Json& j, const std::string& field) {
  if (!j.is_object()) throw ValidationError(field + ": expected an object");
  return j;
}

BetaSpec beta_from_json(const Json& j) {
  object_field(j, "beta");
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) throw ValidationError("beta.preset: expected a string");
    return NamedPreset{j["preset"].get<std::string>()};
  }
  if (j.contains("values")) {
    if (!j["values"].is_array()) throw ValidationError("beta.values: expected an array");
    std::vector<double> v;
    for (const auto& x : j["values"]) v.push_back(number_from_json(x, "beta.values"));
    return v;
  }
  if (j.contains("power")) return PowerLaw{number_from_json(j["power"], "beta.power")};
  if (j.contains("geometric")) return GeometricWeight{number_from_json(j["geometric"], "beta.geometric")};
  if (j.contains("gaussian")) return GaussianWeight{number_from_json(j["gaussian"], "beta.gaussian")};
  throw ValidationError("beta: expected one of preset, values, power, geometric, gaussian");
}

DeltaSpec delta_from_json(const Json& j) {
  object_field(j, "delta");
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) throw ValidationError("delta.preset: expected a string");
    return NamedPreset{j["preset"].get<std::string>()};
  }
  if (j.contains("values")) {
    if (!j["values"].is_array()) throw ValidationError("delta.values: expected an array");
    std::vector<Rational> v;
    for (const auto& x : j["values"]) v.push_back(rational_from_json(x, "delta.values"));
    return v;
  }
  if (j.contains("geometric")) return GeometricDelta{rational_from_json(j["geometric"], "delta.geometric")};
  throw ValidationError("delta: expected one of preset, values, geometric");
}

SeriesSpec series_from_json(const Json& j, const std::string& field) {
  object_field(j, field);
  SeriesSpec s;
  if (j.contains("monomial")) {
    s.monomial = index_from_json(j["monomial"], field + ".monomial");
    return s;
  }
  if (j.contains("coeffs")) {
    if (!j["coeffs"].is_array() || j["coeffs"].empty()) {
      throw ValidationError(field + ".coeffs: expected a non-empty array");
    }
    for (const auto& x : j["coeffs"]) s.coeffs.push_back(rational_from_json(x, field + ".coeffs"));
    return s;
  }
  throw ValidationError(field + ": expected monomial or coeffs");
}

Json rational_to_json(const Rational& q) { return to_string(q); }

Json series_to_json(const SeriesSpec& s) {
  Json j = Json::object();
  if (s.monomial) {
    j["monomial"] = *s.monomial;
  } else {
    Json c = Json::array();
    for (const auto& x : s.coeffs) c.push_back(rational_to_json(x));
    j["coeffs"] = c;
  }
  return j;
}

Json beta_to_json(const BetaSpec& spec) {
  Json j = Json::object();
  if (const auto* p = std::get_if<NamedPreset>(&spec)) {
    j["preset"] = p->name;
  } else if (const auto* v = std::get_if<std::vector<double>>(&spec)) {
    j["values"] = *v;
  } else if (const auto* law = std::get_if<PowerLaw>(&spec)) {
    j["power"] = law->exponent;
  } else if (const auto* geo = std::get_if<GeometricWeight>(&spec)) {
    j["geometric"] = geo->ratio;
  } else {
    j["gaussian"] = std::get<GaussianWeight>(spec).ratio;
  }
  return j;
}

Json delta_to_json(const DeltaSpec& spec) {
  Json j = Json::object();
  if (const auto* p = std::get_if<NamedPreset>(&spec)) {
    j["preset"] = p->name;
  } else if (const auto* geo = std::get_if<GeometricDelta>(&spec)) {
    j["geometric"] = rational_to_json(geo->ratio);
  } else {
    Json c = Json::array();
    for (const auto& x : std::get<std::vector<Rational>>(spec)) c.push_back(rational_to_json(x));
    j["values"] = c;
  }
  return j;
}

Json config_to_json(const Config& c) {
  Json j = Json::object();
  j["p"] = c.p;
  j["beta"] = beta_to_json(c.beta);
  j["delta"] = delta_to_json(c.delta);
  j["u"] = series_to_json(c.u);
  if (c.phi) j["phi"] = series_to_json(*c.phi);
  if (c.f) j["f"] = series_to_json(*c.f);
  if (c.g) j["g"] = series_to_json(*c.g);
  Json t = Json::object();
  t["degree"] = c.truncation.degree;
  if (c.truncation.l_max) t["L_max"] = *c.truncation.l_max;
  t["tail_window"] = c.truncation.tail_window;
  t["tolerance"] = c.truncation.tolerance;
  t["cap"] = c.truncation.cap;
  j["truncation"] = t;
  j["estimate"] = Json{{"max_iters", c.estimate.max_iters}, {"tol", c.estimate.tol}, {"budget", c.estimate.budget}};
  j["algebra"] = Json{{"trials", c.algebra.trials}, {"degree", c.algebra.degree}};
  j["seed"] = c.seed;
  return j;
}

// ---------------------------------------------------------------------------
// Report helpers

Json number_or_inf(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}

Json certificate_to_json(const std::string& name, const BoundCertificate& c) {
  Json j = Json::object();
  j["name"] = name;
  j["value"] = number_or_inf(c.value);
  j["kind"] = std::string(to_string(c.kind));
  j["constant"] = number_or_inf(c.constant);
  j["attained_at"] = c.attained_at ? Json(*c.attained_at) : Json(nullptr);
  j["converged"] = c.converged;
  j["truncation_degree"] = c.truncation_degree;
  j["tail_delta"] = number_or_inf(c.tail_delta);
  if (!c.notes.empty()) j["notes"] = c.notes;
  return j;
}

template <Scalar S>
Json coefficients_to_json(const TruncatedSeries<S>& s) {
  Json c = Json::array();
  for (const auto& x : s.coeffs()) {
    if constexpr (std::same_as<S, double>) {
      c.push_back(number_or_inf(x));
    } else {
      c.push_back(rational_to_json(x));
    }
  }
  return c;
}

struct Context {
  const Config& config;
  WeightSequence beta;
  DeltaSequence delta;
  SpaceConfig space;
  std::uint64_t seed;
  Json certificates = Json::array();
  Json warnings = Json::array();

  CriterionContext criterion() const { return CriterionContext{beta, delta, space}; }
  void add(const std::string& name, const BoundCertificate& c) { certificates.push_back(certificate_to_json(name, c)); }
};

const SeriesSpec& require(const std::optional<SeriesSpec>& s, const char* field, Command command) {
  if (!s) {
    throw ValidationError(std::string("command ") + std::string(to_string(command)) + " needs \"" + field +
                          "\" in the config");
  }
  return *s;
}

std::size_t require_monomial(const SeriesSpec& s, const char* field, const char* theorem) {
  const auto m = s.monomial_degree();
  if (!m) throw ValidationError(std::string(theorem) + " needs " + field + " = z^m (a unit monomial)");
  return *m;
}

void run_theorem(Context& ctx, std::string_view theorem) {
  const auto cc = ctx.criterion();
  const auto& cfg = ctx.config;
  if (theorem == "thm21") {
    const std::size_t m = require_monomial(require(cfg.phi, "phi", Command::bound), "phi", "thm21");
    ctx.add("thm21.norm", monomial_composition_norm(cc, m));
  } else if (theorem == "thm22") {
    const auto bounds = polynomial_composition_bounds(cc, require(cfg.phi, "phi", Command::bound).to_symbol());
    ctx.add("thm22.upper", bounds.upper);
    ctx.add("thm22.lower", bounds.lower);
  } else if (theorem == "thm23") {
    const std::size_t m = require_monomial(require(cfg.phi, "phi", Command::bound), "phi", "thm23");
    const auto u = to_real(cfg.u.to_series(cfg.u.degree()));
    const auto bounds = monomial_symbol_substitution_bounds(cc, u, m);
    ctx.add("thm23.upper", bounds.upper);
    ctx.add("thm23.lower", bounds.lower);
  } else if (theorem == "cor24") {
    ctx.add("cor24.alpha0", diamond_multiplication_bound(cc));
  } else if (theorem == "thm25") {
    const std::size_t m0 = require_monomial(cfg.u, "u", "thm25");
    const auto bounds =
        monomial_multiplier_substitution_bounds(cc, m0, require(cfg.phi, "phi", Command::bound).to_symbol());
    ctx.add("thm25.upper", bounds.upper);
    ctx.add("thm25.lower", bounds.lower);
  } else if (theorem == "cor26") {
    const std::size_t m1 = require_monomial(cfg.u, "u", "cor26");
    const std::size_t m2 = require_monomial(require(cfg.phi, "phi", Command::bound), "phi", "cor26");
    const auto bounds = monomial_pair_bounds(cc, m1, m2);
    ctx.add("cor26.gamma", bounds.upper);
    ctx.add("cor26.K", bounds.lower);
  } else {
    throw UsageError("unknown theorem '" + std::string(theorem) +
                     "' (expected thm21, thm22, thm23, cor24, thm25, cor26)");
  }
}

/// Theorems whose hypotheses match the (u, phi) shape of the config.
std::vector<std::string_view> applicable_theorems(const Config& cfg) {
  std::vector<std::string_view> out;
  const bool phi_monomial = cfg.phi && cfg.phi->monomial_degree().value_or(0) >= 1;
  const auto u_m = cfg.u.monomial_degree();
  const bool u_unity = u_m.has_value() && u_m.value() == 0;
  if (u_unity && phi_monomial) out.push_back("thm21");
  if (u_unity) out.push_back("thm22");
  if (phi_monomial) out.push_back("thm23");
  if (u_m) out.push_back("thm25");
  if (u_m && phi_monomial) out.push_back("cor26");
  return out;
}

Json run_estimate(Context& ctx) {
  const auto& cfg = ctx.config;
  const auto& phi_spec = require(cfg.phi, "phi", Command::estimate);
  const PolynomialSymbol phi = phi_spec.to_symbol();
  const std::size_t N = ctx.space.truncation_degree;
  const std::size_t u_deg = cfg.u.degree();
  if (u_deg > N) throw ValidationError("u degree exceeds the truncation degree");
  const std::size_t n_cols = (N - u_deg) / std::max<std::size_t>(1, phi.degree());
  const auto u = to_real(cfg.u.to_series(u_deg));
  const auto T = build_matrix<double>(OperatorKind::substitution, u, phi, ctx.delta, N, n_cols);
  for (const auto& w : T.warnings()) ctx.warnings.push_back(w);

  for (const auto theorem : applicable_theorems(cfg)) run_theorem(ctx, theorem);
  const auto column = column_lower_bound(T, ctx.beta, cfg.p, ctx.space.tail_window, ctx.space.tolerance);
  ctx.add("operator.column_lower", column);

  BoundCertificate oracle;
  std::string method;
  if (cfg.p == 2.0) {
    oracle = norm_estimate_l2(T, ctx.beta, cfg.estimate.max_iters, cfg.estimate.tol);
    method = "power-iteration";
  } else {
    oracle = norm_lower_search(T, ctx.beta, cfg.p, cfg.estimate.budget, ctx.seed);
    method = "lower-search";
  }

  double lower = column.value;
  double upper = kInfinity;
  for (const auto& c : ctx.certificates) {
    if (!c["value"].is_number()) continue;
    const double v = c["value"].get<double>();
    const std::string kind = c["kind"].get<std::string>();
    if (kind == "lower" || kind == "exact") lower = std::max(lower, v);
    if (kind == "upper" || kind == "exact") upper = std::min(upper, v);
  }
  const double slack = 1e-9;
  Json o = Json::object();
  o["method"] = method;
  o["estimate"] = number_or_inf(oracle.value);
  o["iterations"] = oracle.iterations;
  o["converged"] = oracle.converged;
  o["matrix"] = Json{{"rows", T.n_rows() + 1}, {"cols", T.n_cols() + 1}, {"nonzeros", T.nonzeros()}};
  o["bracket"] = Json{{"lower", number_or_inf(lower)},
                      {"upper", number_or_inf(upper)},
                      {"consistent", oracle.value <= upper + slack}};
  return o;
}

Json run_algebra(Context& ctx) {
  const auto alpha0 = diamond_multiplication_bound(ctx.criterion());
  ctx.add("cor24.alpha0", alpha0);
  const auto& cfg = ctx.config;
  const auto laws = check_algebra(ctx.delta, ctx.beta, cfg.p, alpha0.value, cfg.algebra.trials,
                                  cfg.algebra.degree, ctx.seed);
  Json out = Json::array();
  for (const auto& law : laws) {
    out.push_back(Json{{"law", law.law}, {"trials", law.trials}, {"failures", law.failures}, {"passed", law.passed()}});
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t SeriesSpec::degree() const {
  if (monomial) return *monomial;
  return coeffs.empty() ? 0 : coeffs.size() - 1;
}

RationalSeries SeriesSpec::to_series(std::size_t degree_bound) const {
  if (monomial) {
    if (*monomial > degree_bound) return RationalSeries(degree_bound);
    return RationalSeries::monomial(*monomial, degree_bound);
  }
  return RationalSeries(coeffs).truncated(degree_bound);
}

PolynomialSymbol SeriesSpec::to_symbol() const {
  if (monomial) return PolynomialSymbol::monomial(*monomial);
  return PolynomialSymbol(coeffs);
}

std::optional<std::size_t> SeriesSpec::monomial_degree() const {
  if (monomial) return monomial;
  return to_symbol().monomial_degree();
}

SpaceConfig Config::space() const {
  return SpaceConfig::make(p, truncation.degree, truncation.tail_window, truncation.tolerance, truncation.cap,
                           truncation.l_max);
}

Config parse_config(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError("malformed JSON at " + where(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");

  Config c;
  if (!j.contains("p")) throw ValidationError("p is required");
  c.p = number_from_json(j["p"], "p");
  if (!(c.p >= 1.0)) throw ValidationError("p must be ≥ 1");
  if (!j.contains("beta")) throw ValidationError("beta is required");
  c.beta = beta_from_json(j["beta"]);
  if (j.contains("delta")) c.delta = delta_from_json(j["delta"]);
  if (j.contains("u")) c.u = series_from_json(j["u"], "u");
  if (j.contains("phi")) c.phi = series_from_json(j["phi"], "phi");
  if (j.contains("f")) c.f = series_from_json(j["f"], "f");
  if (j.contains("g")) c.g = series_from_json(j["g"], "g");
  if (j.contains("truncation")) {
    const auto& t = object_field(j["truncation"], "truncation");
    if (t.contains("degree")) c.truncation.degree = index_from_json(t["degree"], "truncation.degree");
    if (t.contains("L_max")) c.truncation.l_max = index_from_json(t["L_max"], "truncation.L_max");
    if (t.contains("tail_window")) {
      c.truncation.tail_window = index_from_json(t["tail_window"], "truncation.tail_window");
    }
    if (t.contains("tolerance")) c.truncation.tolerance = number_from_json(t["tolerance"], "truncation.tolerance");
    if (t.contains("cap")) c.truncation.cap = number_from_json(t["cap"], "truncation.cap");
  }
  if (j.contains("estimate")) {
    const auto& e = object_field(j["estimate"], "estimate");
    if (e.contains("max_iters")) c.estimate.max_iters = index_from_json(e["max_iters"], "estimate.max_iters");
    if (e.contains("tol")) c.estimate.tol = number_from_json(e["tol"], "estimate.tol");
    if (e.contains("budget")) c.estimate.budget = index_from_json(e["budget"], "estimate.budget");
  }
  if (j.contains("algebra")) {
    const auto& a = object_field(j["algebra"], "algebra");
    if (a.contains("trials")) c.algebra.trials = index_from_json(a["trials"], "algebra.trials");
    if (a.contains("degree")) c.algebra.degree = index_from_json(a["degree"], "algebra.degree");
  }
  if (j.contains("seed")) c.seed = index_from_json(j["seed"], "seed");

  // Validate every referenced spec through the library constructors.
  (void)make_beta(c.beta);
  (void)make_delta(c.delta);
  (void)c.space();
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize(const Config& config) { return config_to_json(config).dump(2); }

Command parse_command(std::string_view name) {
  if (name == "norm") return Command::norm;
  if (name == "product") return Command::product;
  if (name == "compose") return Command::compose;
  if (name == "theta") return Command::theta;
  if (name == "bound") return Command::bound;
  if (name == "estimate") return Command::estimate;
  if (name == "check-algebra") return Command::check_algebra;
  throw UsageError("unknown command '" + std::string(name) +
                   "' (expected norm, product, compose, theta, bound, estimate, check-algebra)");
}

std::string_view to_string(Command command) {
  switch (command) {
    case Command::norm:
      return "norm";
    case Command::product:
      return "product";
    case Command::compose:
      return "compose";
    case Command::theta:
      return "theta";
    case Command::bound:
      return "bound";
    case Command::estimate:
      return "estimate";
    case Command::check_algebra:
      return "check-algebra";
  }
  return "norm";
}

std::string run(Command command, const Config& config, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  if (command == Command::bound && !options.theorem) throw UsageError("bound needs --theorem <name>");
  if (command != Command::bound && options.theorem) {
    throw UsageError("--theorem only applies to the bound command");
  }

  Context ctx{config, make_beta(config.beta), make_delta(config.delta), config.space(), options.seed.value_or(config.seed)};
  for (const auto& w : ctx.beta.warnings()) ctx.warnings.push_back(w);

  Json report = Json::object();
  report["command"] = std::string(to_string(command));
  if (!options.quiet) report["config"] = config_to_json(config);

  Json result;
  const std::size_t N = ctx.space.truncation_degree;
  switch (command) {
    case Command::norm: {
      const auto& f = require(config.f, "f", command);
      result = Json{{"norm", number_or_inf(norm(f.to_series(f.degree()), ctx.beta, config.p))}};
      break;
    }
    case Command::product: {
      const auto& f = require(config.f, "f", command);
      const auto& g = require(config.g, "g", command);
      const std::size_t bound = std::min(N, f.degree() + g.degree());
      const auto fs = f.to_series(f.degree());
      const auto gs = g.to_series(g.degree());
      result = Json{{"degree_bound", bound},
                    {"diamond", coefficients_to_json(diamond_product(fs, gs, ctx.delta, bound))},
                    {"cauchy", coefficients_to_json(cauchy_product(fs, gs, bound))}};
      break;
    }
    case Command::compose: {
      const auto& f = require(config.f, "f", command);
      const auto phi = require(config.phi, "phi", command).to_symbol();
      const std::size_t bound =
          std::min(N, config.u.degree() + f.degree() * std::max<std::size_t>(1, phi.degree()));
      const auto fs = f.to_series(f.degree());
      const auto us = config.u.to_series(config.u.degree());
      result = Json{{"degree_bound", bound},
                    {"composition", coefficients_to_json(compose(fs, phi, bound))},
                    {"substitution", coefficients_to_json(diamond_substitute(us, fs, phi, ctx.delta, bound))}};
      break;
    }
    case Command::theta: {
      const auto phi = require(config.phi, "phi", command).to_symbol();
      const std::size_t l_max = config.truncation.l_max.value_or(8);
      const std::size_t n_max = std::min(N, phi.degree() * l_max);
      if (theta_table_footprint(phi, n_max, l_max) > kMaxStoredEntries) {
        throw ResourceError("theta table exceeds the storage guard");
      }
      const auto table = ThetaTable<Rational>::build(phi, n_max, l_max);
      Json columns = Json::array();
      for (std::size_t L = 0; L <= l_max; ++L) {
        Json row = Json::array();
        for (std::size_t n = 0; n <= std::min(n_max, phi.degree() * L); ++n) row.push_back(rational_to_json(table(n, L)));
        columns.push_back(Json{{"L", L}, {"coefficients", row}});
      }
      result = Json{{"n_max", n_max}, {"L_max", l_max}, {"powers", columns}};
      break;
    }
    case Command::bound:
      run_theorem(ctx, *options.theorem);
      break;
    case Command::estimate:
      report["oracle"] = run_estimate(ctx);
      break;
    case Command::check_algebra:
      result = Json{{"laws", run_algebra(ctx)}};
      break;
  }

  report["certificates"] = ctx.certificates;
  if (!result.is_null()) report["result"] = result;
  report["warnings"] = ctx.warnings;
  if (options.timing) {
    const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started);
    report["elapsed_ms"] = elapsed.count();
  }
  return report.dump(2) + "\n";
}

}  // namespace fpsop::cli
