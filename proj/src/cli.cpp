#include "oscdecay/cli.hpp"

#include "oscdecay/numerics.hpp"
#include "oscdecay/vdc.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace oscdecay {

namespace fs = std::filesystem;

namespace {

constexpr double kSublevelTol = 0.05;
constexpr double kDecayTol = 0.07;
constexpr double kMinCoverage = 0.999;

std::string real_str(const Real& v) { return format_real(v, 30); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Artifacts are staged in memory and written together at the end of a command.
class Artifacts {
 public:
  explicit Artifacts(std::string dir) : dir_(std::move(dir)) {}
  void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }
  void add_json(const std::string& name, const Json& j) { add(name, j.dump(2) + "\n"); }
  void flush(std::ostream& log) const {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::IoError, "cli", "cannot create '" + dir_ + "': " + ec.message());
    for (const auto& [name, content] : files_) {
      const auto path = fs::path(dir_) / name;
      std::ofstream out(path, std::ios::binary);
      out << content;
      if (!out) throw Error(ErrorCode::IoError, "cli", "cannot write '" + path.string() + "'");
      log << "wrote " << path.string() << "\n";
    }
  }

 private:
  std::string dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

int verdict(const std::vector<Check>& checks, std::ostream& log) {
  bool ok = true;
  for (const auto& c : checks) {
    log << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    ok = ok && c.pass;
  }
  return ok ? kExitPass : kExitCheckFailed;
}

Json checks_json(const std::vector<Check>& checks) {
  Json a = Json::array();
  for (const auto& c : checks) a.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return a;
}

const char* kind_name(WedgeKind k) {
  switch (k) {
    case WedgeKind::Vertex: return "vertex";
    case WedgeKind::Band: return "band";
    case WedgeKind::Root: return "root";
  }
  return "?";
}

Json comparability_json(const ComparabilityReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) entries.push_back({{"l", e.l}, {"m", e.m}, {"max_ratio", e.max_ratio}});
  return {{"samples", r.samples},
          {"worst_ratio", r.worst_ratio},
          {"sign_consistent", r.sign_consistent},
          {"passes", r.passes},
          {"worst_point", {r.worst_point.first, r.worst_point.second}},
          {"entries", entries}};
}

struct DecompositionRun {
  Decomposition dec;
  std::vector<ComparabilityReport> reports;
  CoverageReport cov;
};

DecompositionRun run_decomposition(const JobConfig& c, std::ostream& log) {
  DecomposeOptions o;
  o.samples = c.comparability_samples;
  o.derivative_orders = c.derivative_orders;
  o.max_depth = c.max_depth;
  o.seed = c.seed;
  DecompositionRun run{decompose(c.phase, c.eta, c.a_max, o), {}, {}};
  log << "decomposition: " << run.dec.wedges.size() << " wedges, certified radius " << run.dec.coverage_radius
      << "\n";
  run.reports.resize(run.dec.wedges.size());
  for (std::size_t i = 0; i < run.dec.wedges.size(); ++i)
    run.reports[i] = verify_comparability(run.dec.wedges[i], c.phase, c.comparability_samples, c.derivative_orders,
                                          c.seed + i);
  run.cov = coverage(run.dec, c.comparability_samples, c.seed);
  return run;
}

Json decomposition_json(const DecompositionRun& run, double r) {
  const auto& dec = run.dec;
  Json octs = Json::array();
  for (const auto& o : dec.octants)
    octs.push_back({{"index", o.index},
                    {"flip_x", o.flip_x},
                    {"flip_y", o.flip_y},
                    {"swap", o.swap},
                    {"slope_pos", format_rational(o.slope_pos)},
                    {"slope_neg", format_rational(o.slope_neg)}});
  Json wedges = Json::array();
  for (std::size_t i = 0; i < dec.wedges.size(); ++i) {
    const auto& w = dec.wedges[i];
    Json shift = Json::array();
    for (const auto& t : w.shift.terms())
      shift.push_back({{"exponent", format_rational(t.exponent)}, {"coefficient", real_str(t.coefficient)}});
    Json lower = nullptr;
    if (w.lower) lower = {{"m", format_rational(w.lower->m)}, {"h", real_str(w.lower->h)}};
    wedges.push_back({{"index", i},
                      {"octant", w.octant.index},
                      {"kind", kind_name(w.kind)},
                      {"sign", w.sign},
                      {"anchored", w.anchored},
                      {"shift", {{"exact", w.shift.exact()}, {"terms", shift}}},
                      {"alpha", format_rational(w.alpha)},
                      {"beta", w.beta},
                      {"d", real_str(w.d)},
                      {"M", format_rational(w.M)},
                      {"H", real_str(w.H)},
                      {"lower", lower},
                      {"radius", w.radius},
                      {"eta", w.eta},
                      {"comparability", comparability_json(run.reports[i])}});
  }
  return {{"phase", dec.phase.str()},
          {"eta", dec.eta},
          {"coverage_radius", dec.coverage_radius},
          {"octants", octs},
          {"wedges", wedges},
          {"coverage",
           {{"samples", run.cov.samples},
            {"covered_fraction", run.cov.covered_fraction},
            {"overlap_fraction", run.cov.overlap_fraction},
            {"r", r},
            {"covers_r", dec.coverage_radius >= r}}}};
}

std::vector<Check> decomposition_checks(const DecompositionRun& run) {
  std::size_t failed = 0;
  double worst = 0;
  for (const auto& rep : run.reports) {
    failed += !rep.passes;
    worst = std::max(worst, rep.worst_ratio);
  }
  return {{"comparability", failed == 0,
           std::to_string(run.reports.size() - failed) + "/" + std::to_string(run.reports.size()) +
               " wedges pass, worst ratio " + fmt("%.4g", worst)},
          {"coverage", run.cov.covered_fraction >= kMinCoverage,
           "covered fraction " + fmt("%.6f", run.cov.covered_fraction)}};
}

// Exponent report; divergence is a hard error after the record has been staged.
ExponentPair exponent_pair_or_throw(const ExponentReport& rep) {
  if (const auto* dv = std::get_if<Divergent>(&rep.result))
    throw Error(ErrorCode::NonIntegrable, "exponents", dv->reason);
  return std::get<ExponentPair>(rep.result);
}

Json delta_json(const ExponentPair& e) {
  if (e.exact) return format_rational(e.delta);
  return to_double(e.delta);
}

std::string exponents_csv(const ExponentReport& rep) {
  std::string s = "wedge,octant,alpha_w,beta_w,M,delta,d\n";
  for (std::size_t i = 0; i < rep.per_wedge.size(); ++i) {
    const auto& w = rep.decomposition.wedges[i];
    s += std::to_string(i) + "," + std::to_string(w.octant.index) + "," + format_rational(w.alpha) + "," +
         std::to_string(w.beta) + "," + format_rational(w.M) + ",";
    if (const auto* e = std::get_if<ExponentPair>(&rep.per_wedge[i]))
      s += format_rational(e->delta) + "," + std::to_string(e->d) + "\n";
    else
      s += "divergent,\n";
  }
  return s;
}

std::string sweep_csv(const std::vector<LambdaTriple>& lambdas, const std::vector<QuadResult>& res) {
  std::string s = "lambda1,lambda2,lambda3,reT,imT,absT,err_est,n_evals\n";
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const auto& l = lambdas[i];
    const auto& r = res[i];
    s += csv_number(l.l1) + "," + csv_number(l.l2) + "," + csv_number(l.l3) + "," + csv_number(r.value.real()) + "," +
         csv_number(r.value.imag()) + "," + csv_number(std::abs(r.value)) + "," + csv_number(r.error) + "," +
         std::to_string(r.evals) + "\n";
  }
  return s;
}

struct SublevelRun {
  std::vector<SublevelEstimate> est;
  std::string csv;
};

SublevelRun run_sublevel(const JobConfig& c) {
  SublevelRun run;
  run.csv = "epsilon,value,std_error,n\n";
  for (int j = c.sublevel.eps_j_min; j <= c.sublevel.eps_j_max; ++j) {
    const double eps = std::ldexp(1.0, -j);
    auto e = sublevel_measure(c.phase, c.density, eps, c.sublevel.r, c.sublevel.samples, c.seed);
    run.csv += csv_number(eps) + "," + csv_number(e.value) + "," + csv_number(e.std_error) + "," +
               std::to_string(e.n_samples) + "\n";
    run.est.push_back(e);
  }
  return run;
}

// Growth fit against the predicted pair; a near-tie alternative with the predicted d also counts.
Check sublevel_check(const DecayFit& f, const ExponentPair& e) {
  const double delta = to_double(e.delta);
  auto ok = [&](const FitCandidate& c) { return c.d == e.d && std::fabs(c.delta - delta) <= kSublevelTol; };
  const FitCandidate best{f.delta_fit, f.d_fit, f.C, f.rms_residual};
  const bool pass = ok(best) || (f.alternative && ok(*f.alternative));
  std::string detail = "fit (" + fmt("%.4f", f.delta_fit) + ", " + std::to_string(f.d_fit) + ") vs (" +
                       format_rational(e.delta) + ", " + std::to_string(e.d) + ")";
  if (f.alternative)
    detail += ", alternative (" + fmt("%.4f", f.alternative->delta) + ", " + std::to_string(f.alternative->d) + ")";
  return {"sublevel fit", pass, detail};
}

// |T| decays at least as fast as the envelope; in case a the rates agree.
Check decay_check(const DecayFit& f, const BoundEnvelope& env) {
  const double target = to_double(env.exponent);
  bool pass = f.delta_fit >= target - kDecayTol;
  if (env.kase == EnvelopeCase::A) pass = pass && std::fabs(f.delta_fit - target) <= kDecayTol;
  return {"decay fit", pass,
          "fit exponent " + fmt("%.4f", f.delta_fit) + " (d = " + std::to_string(f.d_fit) + ") vs envelope " +
              format_rational(env.exponent) + " (case " + case_letter(env.kase) + ")"};
}

Check fit_failure(const std::string& name, const Error& e) {
  return {name, false, std::string(to_string(e.code())) + ": " + e.what()};
}

// Per lambda1, the largest |T| over the (lambda2, lambda3) grid.
std::vector<std::pair<double, double>> sup_over_grid(const std::vector<LambdaTriple>& l,
                                                     const std::vector<QuadResult>& r) {
  std::map<double, double> m;
  for (std::size_t i = 0; i < l.size(); ++i) {
    auto& v = m[l[i].l1];
    v = std::max(v, std::abs(r[i].value));
  }
  return {m.begin(), m.end()};
}

std::string svg_plot(const std::vector<std::pair<double, double>>& pts, const BoundEnvelope& env, double C) {
  std::vector<std::pair<double, double>> data;
  for (const auto& [l, v] : pts)
    if (l > 0 && v > 0) data.push_back({std::log10(l), std::log10(v)});
  const int W = 640, H = 420, pad = 50;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\">\n"
                  "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (data.empty()) return s + "</svg>\n";
  double x0 = data.front().first, x1 = data.back().first, y0 = INFINITY, y1 = -INFINITY;
  std::vector<std::pair<double, double>> envl;
  for (const auto& [x, y] : data) {
    const double e = C > 0 ? std::log10(C * env.value(std::pow(10.0, x))) : y;
    envl.push_back({x, e});
    y0 = std::min({y0, y, e});
    y1 = std::max({y1, y, e});
  }
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  auto px = [&](double x) { return pad + (x - x0) / (x1 - x0) * (W - 2 * pad); };
  auto py = [&](double y) { return H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad); };
  auto line = [&](const std::vector<std::pair<double, double>>& v, const char* style) {
    std::string p = "<polyline fill=\"none\" " + std::string(style) + " points=\"";
    for (const auto& [x, y] : v) p += fmt("%.2f", px(x)) + "," + fmt("%.2f", py(y)) + " ";
    return p + "\"/>\n";
  };
  s += "<line x1=\"50\" y1=\"370\" x2=\"590\" y2=\"370\" stroke=\"black\"/>\n"
       "<line x1=\"50\" y1=\"50\" x2=\"50\" y2=\"370\" stroke=\"black\"/>\n";
  s += line(data, "stroke=\"steelblue\" stroke-width=\"2\"");
  if (C > 0) s += line(envl, "stroke=\"firebrick\" stroke-dasharray=\"6,4\"");
  for (const auto& [x, y] : data)
    s += "<circle cx=\"" + fmt("%.2f", px(x)) + "\" cy=\"" + fmt("%.2f", py(y)) + "\" r=\"3\" fill=\"steelblue\"/>\n";
  s += "<text x=\"320\" y=\"405\" text-anchor=\"middle\" font-size=\"13\">log10 lambda1 [" + fmt("%.2f", x0) + ", " +
       fmt("%.2f", x1) + "]</text>\n";
  s += "<text x=\"15\" y=\"210\" font-size=\"13\" transform=\"rotate(-90 15 210)\" text-anchor=\"middle\">log10 |T| [" +
       fmt("%.2f", y0) + ", " + fmt("%.2f", y1) + "]</text>\n";
  s += "<text x=\"590\" y=\"40\" text-anchor=\"end\" font-size=\"12\">|T| (blue), C * envelope (red, dashed)</text>\n";
  return s + "</svg>\n";
}

std::string density_line(const DensitySpec& d) {
  return "alpha = " + format_rational(d.alpha) + ", beta = " + format_rational(d.beta) + ", A = " + fmt("%g", d.A) +
         ", g " + (d.g_model == GModel::Power ? "power" : "table") + ", K " +
         (d.k_model == KModel::PowerBump ? "bump" : "table") + ", r = " + fmt("%g", d.r);
}

std::vector<QuadResult> integrate_all(const JobConfig& c, const std::vector<LambdaTriple>& lambdas) {
  require_integrable(c.phase, c.density);
  std::vector<QuadResult> res;
  for (const auto& l : lambdas) res.push_back(oscillatory_integral(c.phase, c.density, l, c.quad));
  return res;
}

}  // namespace

std::string csv_number(double v) { return fmt("%.17g", v); }

std::vector<double> lambda1_ladder(const SweepConfig& s) {
  std::vector<double> l;
  for (int j = s.lambda_j_min; j <= s.lambda_j_max; ++j) l.push_back(std::ldexp(1.0, j));
  return l;
}

std::vector<LambdaTriple> sweep_lambdas(const SweepConfig& s) {
  if (!s.lambdas.empty()) return s.lambdas;
  std::vector<LambdaTriple> out;
  for (double l1 : lambda1_ladder(s))
    for (double m2 : s.lambda23_multipliers)
      for (double m3 : s.lambda23_multipliers) out.push_back({l1, m2 * std::sqrt(l1), m3 * std::sqrt(l1)});
  return out;
}

Json envelope_json(const BoundEnvelope& env, int order) {
  return {{"case", std::string(1, case_letter(env.kase))},
          {"order", order},
          {"threshold", format_rational(env.threshold)},
          {"exponent", format_rational(env.exponent)},
          {"log_power", env.log_power},
          {"form", "(1 + lambda)^-" + format_rational(env.exponent) + " ln(e + lambda)^" +
                       std::to_string(env.log_power)}};
}

Json exponents_json(const ExponentReport& rep, const DensitySpec& ds, int order) {
  Json per = Json::array();
  for (std::size_t i = 0; i < rep.per_wedge.size(); ++i) {
    const auto& w = rep.decomposition.wedges[i];
    Json e = {{"wedge", i},
              {"octant", w.octant.index},
              {"alpha_w", format_rational(w.alpha)},
              {"beta_w", w.beta},
              {"M", format_rational(w.M)}};
    if (const auto* p = std::get_if<ExponentPair>(&rep.per_wedge[i])) {
      e["delta"] = delta_json(*p);
      e["d"] = p->d;
    } else {
      e["divergent"] = std::get<Divergent>(rep.per_wedge[i]).reason;
    }
    per.push_back(e);
  }
  Json j = {{"phase", rep.decomposition.phase.str()},
            {"alpha", format_rational(ds.alpha)},
            {"beta", format_rational(ds.beta)},
            {"order", order}};
  if (const auto* p = std::get_if<ExponentPair>(&rep.result)) {
    j["delta"] = delta_json(*p);
    j["d"] = p->d;
    j["exact"] = p->exact;
    if (order >= 2) {
      const auto env = envelope(*p, order);
      j["case"] = std::string(1, case_letter(env.kase));
      j["threshold"] = format_rational(env.threshold);
    }
  } else {
    j["divergent"] = std::get<Divergent>(rep.result).reason;
  }
  j["per_wedge"] = per;
  return j;
}

Json fit_json(const DecayFit& f) {
  auto cand = [](const FitCandidate& c) {
    return Json{{"delta", c.delta}, {"d", c.d}, {"C", c.C}, {"rms", c.rms}};
  };
  return {{"delta_fit", f.delta_fit},
          {"d_fit", f.d_fit},
          {"C", f.C},
          {"rms_residual", f.rms_residual},
          {"range", {f.lambda_range.first, f.lambda_range.second}},
          {"alternative", f.alternative ? cand(*f.alternative) : Json(nullptr)},
          {"candidates", {cand(f.candidates[0]), cand(f.candidates[1])}}};
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCode::ParseError, "cli", "CSV has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cli", "cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  auto split = [](const std::string& l) {
    std::vector<std::string> out;
    std::stringstream ss(l);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "cli", "empty CSV '" + path + "'");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line)) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "cli", "bad number '" + cell + "' in '" + path + "'");
      }
    }
    if (row.size() != t.header.size()) throw Error(ErrorCode::ParseError, "cli", "ragged row in '" + path + "'");
    t.rows.push_back(std::move(row));
  }
  return t;
}

void apply_overrides(JobConfig& c, const Overrides& o) {
  if (o.seed) c.quad.seed = c.seed = *o.seed;
  if (o.out) c.output_dir = *o.out;
  if (o.eta) {
    if (!(*o.eta > 0 && *o.eta < 1)) throw Error(ErrorCode::InvalidArgument, "cli", "--eta must lie in (0, 1)");
    c.eta = *o.eta;
  }
  if (o.lambda_max) {
    const double X = *o.lambda_max;
    if (!(X >= 0)) throw Error(ErrorCode::InvalidArgument, "cli", "--lambda-max must be non-negative");
    if (!c.sweep.lambdas.empty()) {
      std::erase_if(c.sweep.lambdas, [&](const LambdaTriple& l) { return l.l1 > X; });
      if (c.sweep.lambdas.empty()) throw Error(ErrorCode::InvalidArgument, "cli", "--lambda-max removes every lambda");
    } else {
      c.sweep.lambda_j_max = std::min(c.sweep.lambda_j_max, static_cast<int>(std::floor(std::log2(X))));
      if (c.sweep.lambda_j_max < c.sweep.lambda_j_min)
        throw Error(ErrorCode::InvalidArgument, "cli", "--lambda-max is below the first ladder rung");
    }
  }
}

int cmd_decompose(const JobConfig& c, std::ostream& log) {
  Artifacts out(c.output_dir);
  const auto run = run_decomposition(c, log);
  out.add_json("decomposition.json", decomposition_json(run, c.density.r));
  out.flush(log);
  return verdict(decomposition_checks(run), log);
}

int cmd_exponent(const JobConfig& c, std::ostream& log) {
  Artifacts out(c.output_dir);
  const auto rep = critical_exponent_report(c.phase, c.density, c.eta);
  const int o = c.phase.order();
  out.add_json("exponents.json", exponents_json(rep, c.density, o));
  out.add("exponents.csv", exponents_csv(rep));
  if (const auto* p = std::get_if<ExponentPair>(&rep.result); p && o >= 2)
    out.add_json("envelope.json", envelope_json(envelope(*p, o), o));
  out.flush(log);
  const auto e = exponent_pair_or_throw(rep);
  log << "(delta, d) = (" << format_rational(e.delta) << ", " << e.d << ")\n";
  return kExitPass;
}

int cmd_integrate(const JobConfig& c, std::ostream& log) {
  Artifacts out(c.output_dir);
  const auto lambdas = sweep_lambdas(c.sweep);
  const auto res = integrate_all(c, lambdas);
  out.add("sweep.csv", sweep_csv(lambdas, res));
  out.flush(log);
  return kExitPass;
}

int cmd_sublevel(const JobConfig& c, std::ostream& log) {
  Artifacts out(c.output_dir);
  out.add("sublevel.csv", run_sublevel(c).csv);
  out.flush(log);
  return kExitPass;
}

int cmd_vdc(const JobConfig& c, std::ostream& log) {
  Artifacts out(c.output_dir);
  std::vector<Check> checks;
  Json reports = Json::array();
  for (int dim : c.vdc.dimensions) {
    VdcOptions o;
    o.dimension = dim;
    o.trials = c.vdc.trials;
    o.seed = c.seed;
    o.degree_bound = c.vdc.degree_bound;
    o.lambda_ladder = c.vdc.lambda_ladder;
    o.k_values = c.vdc.k_values;
    const auto r = vdc_verify(o);
    const auto& w = r.worst_case;
    reports.push_back({{"dimension", r.dimension},
                       {"trials", r.trials},
                       {"evaluations", r.evaluations},
                       {"violations", r.violations},
                       {"min_headroom", r.min_headroom},
                       {"worst_case",
                        {{"trial", w.trial},
                         {"k", w.k},
                         {"l", w.l},
                         {"lambda", w.lambda},
                         {"M", w.M},
                         {"N", w.N},
                         {"bound", w.bound},
                         {"actual", w.actual},
                         {"headroom", w.headroom},
                         {"phase", w.phase}}}});
    checks.push_back({std::to_string(dim) + "-D bounds",
                      r.violations == 0 && r.min_headroom >= c.vdc.min_headroom,
                      std::to_string(r.violations) + " violations in " + std::to_string(r.evaluations) +
                          " evaluations, min headroom " + fmt("%.4g", r.min_headroom)});
  }
  double worst = 0;
  for (int j = 0; j <= 20; ++j) {
    const double l = std::ldexp(1.0, j);
    worst = std::max(worst, fresnel_abs(l) / vdc_bound_1d(2, 2 * l, 1, 0));
  }
  checks.push_back({"Fresnel", worst <= 1, "max actual/bound " + fmt("%.4g", worst) + " over 2^0..2^20"});
  out.add_json("vdc.json", {{"seed", c.seed}, {"reports", reports}, {"fresnel_max_ratio", worst},
                            {"checks", checks_json(checks)}});
  out.flush(log);
  return verdict(checks, log);
}

int cmd_fit(const JobConfig& c, std::ostream& log) {
  Artifacts out(c.output_dir);
  std::string path = c.fit.input;
  if (path == "sweep" || path == "sublevel") path = (fs::path(c.output_dir) / (path + ".csv")).string();
  const auto t = read_csv(path);
  const bool has_eps = std::find(t.header.begin(), t.header.end(), "epsilon") != t.header.end();
  const std::string kind = !c.fit.kind.empty() ? c.fit.kind : (has_eps ? "growth" : "decay");
  std::vector<std::pair<double, double>> s;
  if (kind == "growth") {
    const auto x = t.column("epsilon"), y = t.column("value");
    for (const auto& r : t.rows) s.push_back({r[x], r[y]});
  } else {
    const auto x = t.column("lambda1"), y = t.column("absT");
    std::map<double, double> sup;
    for (const auto& r : t.rows) sup[r[x]] = std::max(sup[r[x]], r[y]);
    s.assign(sup.begin(), sup.end());
  }
  const auto f = fit_decay(s, kind == "growth" ? FitDirection::Growth : FitDirection::Decay);
  const auto e = critical_exponent(c.phase, c.density, c.eta);
  std::vector<Check> checks;
  if (kind == "growth") {
    checks.push_back(sublevel_check(f, e));
  } else {
    checks.push_back(decay_check(f, envelope(e, c.phase.order())));
  }
  Json j = {{"input", path}, {"kind", kind}, {"fit", fit_json(f)},
            {"predicted", {{"delta", delta_json(e)}, {"d", e.d}}}, {"checks", checks_json(checks)}};
  out.add_json("fits.json", j);
  out.flush(log);
  return verdict(checks, log);
}

int cmd_analyze(const JobConfig& c, std::ostream& log) {
  Artifacts out(c.output_dir);
  const int o = c.phase.order();

  // Exponents first: a divergent density stops the pipeline.
  const auto xrep = critical_exponent_report(c.phase, c.density, c.eta);
  out.add_json("exponents.json", exponents_json(xrep, c.density, o));
  const auto e = exponent_pair_or_throw(xrep);
  const auto env = envelope(e, o);
  out.add_json("envelope.json", envelope_json(env, o));
  log << "(delta, d) = (" << format_rational(e.delta) << ", " << e.d << "), case " << case_letter(env.kase) << "\n";

  const auto drun = run_decomposition(c, log);
  out.add_json("decomposition.json", decomposition_json(drun, c.density.r));
  std::vector<Check> checks = decomposition_checks(drun);

  const auto sub = run_sublevel(c);
  out.add("sublevel.csv", sub.csv);
  std::vector<std::pair<double, double>> ss;
  for (std::size_t k = 0; k < sub.est.size(); ++k) ss.push_back({sub.est[k].epsilon, sub.est[k].value});
  Json fits = Json::object();
  try {
    const auto g = fit_decay(ss, FitDirection::Growth);
    fits["sublevel"] = fit_json(g);
    checks.push_back(sublevel_check(g, e));
  } catch (const Error& err) {
    checks.push_back(fit_failure("sublevel fit", err));
  }
  log << "sublevel ladder done\n";

  std::vector<LambdaTriple> lambdas;
  std::vector<QuadResult> res;
  double C_hat = 0;
  require_integrable(c.phase, c.density);
  if (c.sweep.lambdas.empty()) {
    const auto scan = uniformity_scan(c.phase, c.density, env, lambda1_ladder(c.sweep),
                                      c.sweep.lambda23_multipliers, c.quad);
    for (const auto& p : scan.points) {
      lambdas.push_back(p.lambda);
      res.push_back(p.result);
    }
    C_hat = scan.C_hat;
    fits["uniformity"] = {{"C_hat", scan.C_hat},
                          {"argmax", {scan.argmax.l1, scan.argmax.l2, scan.argmax.l3}},
                          {"top_decade_variation", scan.top_decade_variation},
                          {"monotone_growth", scan.monotone_growth},
                          {"pass", scan.pass}};
    checks.push_back({"uniform constant", scan.pass,
                      "C_hat " + fmt("%.4g", scan.C_hat) + ", top-decade variation " +
                          fmt("%.3f", scan.top_decade_variation) +
                          (scan.monotone_growth ? ", ratio grows monotonically" : "")});
  } else {
    lambdas = sweep_lambdas(c.sweep);
    res = integrate_all(c, lambdas);
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      C_hat = std::max(C_hat, std::abs(res[i].value) / env.value(lambdas[i].l1));
  }
  out.add("sweep.csv", sweep_csv(lambdas, res));
  const auto sup = sup_over_grid(lambdas, res);
  try {
    const auto f = fit_decay(sup, FitDirection::Decay);
    fits["decay"] = fit_json(f);
    checks.push_back(decay_check(f, env));
  } catch (const Error& err) {
    checks.push_back(fit_failure("decay fit", err));
  }
  log << "sweep done\n";
  fits["checks"] = checks_json(checks);
  out.add_json("fits.json", fits);
  out.add("decay.svg", svg_plot(sup, env, C_hat));

  const bool covers = drun.dec.coverage_radius >= c.density.r;
  std::ostringstream md;
  md << "# oscdecay analysis\n\n"
     << "- phase: S = " << c.phase.str() << " (order " << o << ")\n"
     << "- density: " << density_line(c.density) << "\n"
     << "- critical exponent: (delta, d) = (" << format_rational(e.delta) << ", " << e.d << ")"
     << (e.exact ? "" : ", from rationalized real exponents") << "\n"
     << "- envelope case " << case_letter(env.kase) << ": threshold 1/3 + 1/(3o) = " << format_rational(env.threshold)
     << ", |T| <= C (1 + lambda)^-" << format_rational(env.exponent) << " ln(e + lambda)^" << env.log_power << "\n"
     << "- certified comparability radius " << fmt("%.6g", drun.dec.coverage_radius) << " "
     << (covers ? "covers" : "does NOT cover") << " the configured support radius r = " << fmt("%g", c.density.r)
     << (covers ? "\n" : "; the envelope carries no certificate on the whole support\n")
     << "- wedges: " << drun.dec.wedges.size() << ", seed " << c.seed << "\n\n"
     << "## Checks\n\n| check | result | detail |\n|---|---|---|\n";
  for (const auto& ch : checks) md << "| " << ch.name << " | " << (ch.pass ? "PASS" : "FAIL") << " | " << ch.detail << " |\n";
  md << "\nArtifacts: decomposition.json, exponents.json, envelope.json, sweep.csv, sublevel.csv, fits.json, "
        "decay.svg.\n";
  out.add("report.md", md.str());
  out.flush(log);
  return verdict(checks, log);
}

int run_cli(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
  CLI::App app{"oscillatory integral decay analysis", "oscdecay"};
  std::string command, config;
  Overrides ov;
  app.add_option("command", command, "analyze|decompose|exponent|integrate|sublevel|vdc|fit")
      ->required()
      ->check(CLI::IsMember({"analyze", "decompose", "exponent", "integrate", "sublevel", "vdc", "fit"}));
  app.add_option("--config", config, "JSON job configuration")->required();
  app.add_option("--seed", ov.seed, "random seed");
  app.add_option("--out", ov.out, "output directory");
  app.add_option("--lambda-max", ov.lambda_max, "largest lambda1 of the sweep");
  app.add_option("--eta", ov.eta, "comparability parameter");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    log << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error [cli] " << e.what() << "\n";
    return kExitError;
  }
  try {
    auto c = load_config(config);
    apply_overrides(c, ov);
    static const std::map<std::string, int (*)(const JobConfig&, std::ostream&)> table{
        {"analyze", cmd_analyze},     {"decompose", cmd_decompose}, {"exponent", cmd_exponent},
        {"integrate", cmd_integrate}, {"sublevel", cmd_sublevel},   {"vdc", cmd_vdc},
        {"fit", cmd_fit}};
    return table.at(command)(c, log);
  } catch (const Error& e) {
    err << "error [" << e.module() << "] " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error [cli] " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace oscdecay
