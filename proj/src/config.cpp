#include "oscdecay/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace oscdecay {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorCode::ParseError, "cli", "config: " + msg); }

void only_keys(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) bad(where + " must be an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) bad("unknown key '" + where + "." + k + "'");
}

template <class T>
void take(const Json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad(where + "." + key + ": " + e.what());
  }
}

Rational rational_field(const Json& v, const std::string& what) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  bad(what + " must be a \"p/q\" string or an integer");
}

// Exponents: strings are exact; floats go through rationalization.
void exponent_field(const Json& v, DensitySpec& ds, bool is_alpha) {
  if (v.is_number_float()) {
    (is_alpha ? set_alpha : set_beta)(ds, v.get<double>());
    return;
  }
  (is_alpha ? ds.alpha : ds.beta) = rational_field(v, is_alpha ? "density.alpha" : "density.beta");
}

Json exponent_json(const Rational& v, bool exact) {
  if (!exact) return to_double(v);
  return format_rational(v);
}

Table table_field(const Json& j, const std::string& where) {
  only_keys(j, where, {"knots", "values"});
  Table t;
  take(j, "knots", t.knots, where);
  take(j, "values", t.values, where);
  return t;
}

Json table_json(const Table& t) { return Json{{"knots", t.knots}, {"values", t.values}}; }

PhasePoly phase_field(const Json& j) {
  if (!j.is_array()) bad("phase must be an array of terms");
  std::vector<std::pair<Monomial, Rational>> terms;
  for (const auto& t : j) {
    if (t.is_string()) {
      terms.push_back(parse_term(t.get<std::string>()));
    } else if (t.is_object()) {
      only_keys(t, "phase[]", {"c", "i", "j"});
      Monomial m;
      take(t, "i", m.i, "phase[]");
      take(t, "j", m.j, "phase[]");
      if (!t.contains("c")) bad("phase term without 'c'");
      terms.push_back({m, rational_field(t.at("c"), "phase[].c")});
    } else {
      bad("phase terms are strings or {c, i, j} objects");
    }
  }
  // EmptyPolynomial / InvalidArgument come from the constructor.
  return PhasePoly(terms);
}

}  // namespace

std::string format_term(const Monomial& m, const Rational& c) {
  std::string s = format_rational(c);
  if (m.i) s += " x^" + std::to_string(m.i);
  if (m.j) s += " y^" + std::to_string(m.j);
  return s;
}

JobConfig parse_config(const Json& j) {
  only_keys(j, "config",
            {"phase", "density", "eta", "a_max", "max_depth", "comparability_samples", "derivative_orders", "seed",
             "sublevel", "sweep", "quad", "vdc", "fit", "output_dir"});
  JobConfig c;
  if (!j.contains("phase")) bad("missing 'phase'");
  c.phase = phase_field(j.at("phase"));

  if (j.contains("density")) {
    const auto& d = j.at("density");
    only_keys(d, "density", {"alpha", "beta", "A", "g_model", "K_model", "r", "g_table", "K_table"});
    if (d.contains("alpha")) exponent_field(d.at("alpha"), c.density, true);
    if (d.contains("beta")) exponent_field(d.at("beta"), c.density, false);
    take(d, "A", c.density.A, "density");
    take(d, "r", c.density.r, "density");
    std::string g = "power", k = "bump";
    take(d, "g_model", g, "density");
    take(d, "K_model", k, "density");
    if (g != "power" && g != "table") bad("density.g_model is 'power' or 'table'");
    if (k != "bump" && k != "table") bad("density.K_model is 'bump' or 'table'");
    c.density.g_model = g == "power" ? GModel::Power : GModel::Table;
    c.density.k_model = k == "bump" ? KModel::PowerBump : KModel::Table;
    if (d.contains("g_table")) c.density.g_table = table_field(d.at("g_table"), "density.g_table");
    if (d.contains("K_table")) c.density.k_table = table_field(d.at("K_table"), "density.K_table");
  }
  c.density.validate();

  take(j, "eta", c.eta, "config");
  take(j, "a_max", c.a_max, "config");
  take(j, "max_depth", c.max_depth, "config");
  take(j, "comparability_samples", c.comparability_samples, "config");
  take(j, "derivative_orders", c.derivative_orders, "config");
  take(j, "seed", c.seed, "config");
  take(j, "output_dir", c.output_dir, "config");
  if (!(c.eta > 0 && c.eta < 1)) bad("eta must lie in (0, 1)");
  if (!(c.a_max > 0)) bad("a_max must be positive");
  if (c.max_depth < 1) bad("max_depth must be positive");

  if (j.contains("sublevel")) {
    const auto& s = j.at("sublevel");
    only_keys(s, "sublevel", {"r", "eps_j_min", "eps_j_max", "samples"});
    take(s, "r", c.sublevel.r, "sublevel");
    take(s, "eps_j_min", c.sublevel.eps_j_min, "sublevel");
    take(s, "eps_j_max", c.sublevel.eps_j_max, "sublevel");
    take(s, "samples", c.sublevel.samples, "sublevel");
  }
  if (c.sublevel.eps_j_min > c.sublevel.eps_j_max) bad("sublevel.eps_j_min exceeds eps_j_max");

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    only_keys(s, "sweep", {"lambda_j_min", "lambda_j_max", "lambda23_multipliers", "lambdas"});
    take(s, "lambda_j_min", c.sweep.lambda_j_min, "sweep");
    take(s, "lambda_j_max", c.sweep.lambda_j_max, "sweep");
    take(s, "lambda23_multipliers", c.sweep.lambda23_multipliers, "sweep");
    if (s.contains("lambdas")) {
      std::vector<std::array<double, 3>> raw;
      take(s, "lambdas", raw, "sweep");
      for (const auto& t : raw) c.sweep.lambdas.push_back({t[0], t[1], t[2]});
    }
  }
  if (c.sweep.lambda_j_min > c.sweep.lambda_j_max) bad("sweep.lambda_j_min exceeds lambda_j_max");
  if (c.sweep.lambda23_multipliers.empty()) bad("sweep.lambda23_multipliers is empty");

  if (j.contains("quad")) {
    const auto& q = j.at("quad");
    only_keys(q, "quad", {"dyadic_depth", "per_cell_rule", "rel_tol", "abs_tol", "max_evals"});
    take(q, "dyadic_depth", c.quad.dyadic_depth, "quad");
    take(q, "per_cell_rule", c.quad.per_cell_rule, "quad");
    take(q, "rel_tol", c.quad.rel_tol, "quad");
    take(q, "abs_tol", c.quad.abs_tol, "quad");
    take(q, "max_evals", c.quad.max_evals, "quad");
  }
  c.quad.seed = c.seed;
  c.quad.validate();

  if (j.contains("vdc")) {
    const auto& v = j.at("vdc");
    only_keys(v, "vdc", {"dimensions", "trials", "degree_bound", "lambda_ladder", "k_values", "min_headroom"});
    take(v, "dimensions", c.vdc.dimensions, "vdc");
    take(v, "trials", c.vdc.trials, "vdc");
    take(v, "degree_bound", c.vdc.degree_bound, "vdc");
    take(v, "lambda_ladder", c.vdc.lambda_ladder, "vdc");
    take(v, "k_values", c.vdc.k_values, "vdc");
    take(v, "min_headroom", c.vdc.min_headroom, "vdc");
  }

  if (j.contains("fit")) {
    const auto& f = j.at("fit");
    only_keys(f, "fit", {"input", "kind"});
    take(f, "input", c.fit.input, "fit");
    take(f, "kind", c.fit.kind, "fit");
  }
  if (!c.fit.kind.empty() && c.fit.kind != "decay" && c.fit.kind != "growth") bad("fit.kind is 'decay' or 'growth'");
  return c;
}

JobConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cli", "cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "cli", "config '" + path + "': " + e.what());
  }
  return parse_config(j);
}

Json config_to_json(const JobConfig& c) {
  Json phase = Json::array();
  for (const auto& [m, v] : c.phase.terms()) phase.push_back(format_term(m, v));
  const auto& d = c.density;
  Json j;
  j["phase"] = phase;
  j["density"] = {{"alpha", exponent_json(d.alpha, d.exact)},
                  {"beta", exponent_json(d.beta, d.exact)},
                  {"A", d.A},
                  {"g_model", d.g_model == GModel::Power ? "power" : "table"},
                  {"K_model", d.k_model == KModel::PowerBump ? "bump" : "table"},
                  {"r", d.r},
                  {"g_table", table_json(d.g_table)},
                  {"K_table", table_json(d.k_table)}};
  j["eta"] = c.eta;
  j["a_max"] = c.a_max;
  j["max_depth"] = c.max_depth;
  j["comparability_samples"] = c.comparability_samples;
  j["derivative_orders"] = c.derivative_orders;
  j["seed"] = c.seed;
  j["sublevel"] = {{"r", c.sublevel.r},
                   {"eps_j_min", c.sublevel.eps_j_min},
                   {"eps_j_max", c.sublevel.eps_j_max},
                   {"samples", c.sublevel.samples}};
  Json lambdas = Json::array();
  for (const auto& t : c.sweep.lambdas) lambdas.push_back({t.l1, t.l2, t.l3});
  j["sweep"] = {{"lambda_j_min", c.sweep.lambda_j_min},
                {"lambda_j_max", c.sweep.lambda_j_max},
                {"lambda23_multipliers", c.sweep.lambda23_multipliers},
                {"lambdas", lambdas}};
  j["quad"] = {{"dyadic_depth", c.quad.dyadic_depth},
               {"per_cell_rule", c.quad.per_cell_rule},
               {"rel_tol", c.quad.rel_tol},
               {"abs_tol", c.quad.abs_tol},
               {"max_evals", c.quad.max_evals}};
  j["vdc"] = {{"dimensions", c.vdc.dimensions},     {"trials", c.vdc.trials},
              {"degree_bound", c.vdc.degree_bound}, {"lambda_ladder", c.vdc.lambda_ladder},
              {"k_values", c.vdc.k_values},         {"min_headroom", c.vdc.min_headroom}};
  j["fit"] = {{"input", c.fit.input}, {"kind", c.fit.kind}};
  j["output_dir"] = c.output_dir;
  return j;
}

}  // namespace oscdecay
