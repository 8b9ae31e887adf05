// Acceptance run: one PASS/FAIL line per criterion, details indented above it.
#include "helpers.hpp"

#include "oscdecay/cli.hpp"
#include "oscdecay/decomposition.hpp"
#include "oscdecay/exponents.hpp"
#include "oscdecay/fit.hpp"
#include "oscdecay/numerics.hpp"
#include "oscdecay/vdc.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace oscdecay;
namespace fs = std::filesystem;

namespace {

template <class... A>
void note(const char* f, A... a) {
  std::printf("  ");
  std::printf(f, a...);
  std::printf("\n");
  std::fflush(stdout);
}

DensitySpec with_alpha(const Rational& a) {
  DensitySpec ds;
  ds.alpha = a;
  return ds;
}

std::vector<std::pair<double, double>> sublevel_ladder(const PhasePoly& p, const DensitySpec& ds) {
  std::vector<std::pair<double, double>> s;
  for (int j = 7; j <= 20; ++j) {
    const double eps = std::ldexp(1.0, -j);
    s.push_back({eps, sublevel_measure(p, ds, eps, 1.0, 4000, 1).value});
  }
  return s;
}

bool is_non_integrable(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == ErrorCode::NonIntegrable;
  }
  return false;
}

// 1. Exponents vs the sublevel ladder, alpha = beta = 0.
bool exponent_correctness() {
  bool ok = true;
  for (const auto& p : testutil::suite()) {
    const auto e = critical_exponent(p, {});
    const auto f = fit_decay(sublevel_ladder(p, {}), FitDirection::Growth);
    const double delta = to_double(e.delta), o = p.order();
    const bool pass = std::fabs(f.delta_fit - delta) <= 0.05 && f.d_fit == e.d && delta >= 1 / o && delta <= 2 / o;
    note("%-22s (%s, %d)  fit (%.4f, %d)  %s", p.str().c_str(), format_rational(e.delta).c_str(), e.d, f.delta_fit,
         f.d_fit, pass ? "ok" : "MISMATCH");
    ok = ok && pass;
  }
  return ok;
}

// 2. (alpha + delta0, d0) exactly, with a Monte Carlo confirmation.
bool weighted_shift() {
  bool ok = true;
  for (const auto& p : testutil::suite()) {
    const auto e0 = critical_exponent(p, {});
    for (const Rational& a : {Rational(-1, 4), Rational(-1, 2), Rational(1, 2)}) {
      const auto ds = with_alpha(a);
      const bool div_shift = is_non_integrable([&] { smooth_shift_check(e0, a); });
      const bool div_exp = is_non_integrable([&] { critical_exponent(p, ds); });
      if (div_shift || div_exp) {
        const bool pass = div_shift && div_exp;
        note("%-22s alpha %-5s divergent on %s", p.str().c_str(), format_rational(a).c_str(),
             pass ? "both sides" : "ONE SIDE ONLY");
        ok = ok && pass;
        continue;
      }
      const auto e = critical_exponent(p, ds);
      const auto s = smooth_shift_check(e0, a);
      const bool exact = e == s;
      const auto f = fit_decay(sublevel_ladder(p, ds), FitDirection::Growth);
      const double delta = to_double(e.delta);
      auto near = [&](const FitCandidate& c) { return c.d == e.d && std::fabs(c.delta - delta) <= 0.05; };
      const bool mc = near({f.delta_fit, f.d_fit, f.C, f.rms_residual}) || (f.alternative && near(*f.alternative));
      char alt[48] = "";
      if (f.alternative) std::snprintf(alt, sizeof alt, " alt (%.4f, %d)", f.alternative->delta, f.alternative->d);
      note("%-22s alpha %-5s (%s, %d) shift %s  fit (%.4f, %d)%s  %s", p.str().c_str(), format_rational(a).c_str(),
           format_rational(e.delta).c_str(), e.d, exact ? "equal" : "DIFFERS", f.delta_fit, f.d_fit, alt,
           exact && mc ? "ok" : "MISMATCH");
      ok = ok && exact && mc;
    }
  }
  return ok;
}

// 3. Decay of |T(lambda1, 0, 0)| in case a.
bool decay_rate() {
  const auto p = testutil::poly({"y^2", "-x^3"});
  auto ds = with_alpha(Rational(-1, 2));
  ds.r = 0.5;
  const auto e = critical_exponent(p, ds);
  const auto env = envelope(e, p.order());
  note("(delta, d) = (%s, %d), order %d, threshold %s, case %c", format_rational(e.delta).c_str(), e.d, p.order(),
       format_rational(env.threshold).c_str(), case_letter(env.kase));
  std::vector<double> ladder;
  for (int j = 7; j <= 18; ++j) ladder.push_back(std::ldexp(1.0, j));
  QuadConfig q;
  q.rel_tol = 1e-6;
  const auto scan = uniformity_scan(p, ds, env, ladder, {0.0}, q);
  std::vector<std::pair<double, double>> s;
  for (const auto& pt : scan.points) {
    s.push_back({pt.lambda.l1, std::abs(pt.result.value)});
    note("lambda %-8g |T| %.6e  err %.1e  |T|/envelope %.4f", pt.lambda.l1, std::abs(pt.result.value), pt.result.error,
         pt.ratio);
  }
  const auto f = fit_decay(s, FitDirection::Decay);
  // Same rule as the sublevel confirmation: the winner, or the near-tie alternative carrying the predicted d.
  const double delta = to_double(e.delta);
  const bool fit_ok = std::fabs(f.delta_fit - delta) <= 0.07 ||
                      (f.alternative && f.alternative->d == e.d && std::fabs(f.alternative->delta - delta) <= 0.07);
  note("fit delta %.4f (d = %d) vs %s; C_hat %.4g, top-decade variation %.3f%s", f.delta_fit, f.d_fit,
       format_rational(e.delta).c_str(), scan.C_hat, scan.top_decade_variation,
       scan.monotone_growth ? ", monotone growth" : "");
  const auto n = s.size();
  note("candidates: d = 0 delta %.4f rms %.2e, d = 1 delta %.4f rms %.2e; local slope over the top octave %.4f",
       f.candidates[0].delta, f.candidates[0].rms, f.candidates[1].delta, f.candidates[1].rms,
       -std::log2(s[n - 1].second / s[n - 2].second));
  note("case a: %s, decay fit: %s, single constant (scan rule): %s", env.kase == EnvelopeCase::A ? "yes" : "NO",
       fit_ok ? "ok" : "FAIL", scan.pass ? "ok" : "FAIL");
  return env.kase == EnvelopeCase::A && fit_ok && scan.pass;
}

// 4. Uniform constant over the (lambda2, lambda3) grid.
bool uniformity() {
  bool ok = true;
  std::vector<double> ladder;
  for (int j = 4; j <= 12; ++j) ladder.push_back(std::ldexp(1.0, j));
  for (const auto& p : {testutil::poly({"x^2", "y^2"}), testutil::poly({"x y"})}) {
    const DensitySpec ds;
    const auto env = envelope(critical_exponent(p, ds), p.order());
    const auto r = uniformity_scan(p, ds, env, ladder, {-1, 0, 1});
    note("%-10s C_hat %.4g at (%g, %g, %g), top-decade variation %.3f%s", p.str().c_str(), r.C_hat, r.argmax.l1,
         r.argmax.l2, r.argmax.l3, r.top_decade_variation, r.monotone_growth ? ", monotone growth" : "");
    ok = ok && r.pass;
  }
  return ok;
}

// 5. Comparability certificates and coverage.
bool certificates() {
  bool ok = true;
  for (const auto& p : testutil::suite()) {
    DecomposeOptions o;
    o.samples = 10000;
    o.derivative_orders = {1, 1};
    const auto dec = decompose(p, 0.25, 0.5, o);
    std::size_t passed = 0;
    double worst = 0;
    for (std::size_t i = 0; i < dec.wedges.size(); ++i) {
      const auto rep = verify_comparability(dec.wedges[i], p, 10000, {1, 1}, 1000 + i);
      passed += rep.passes;
      worst = std::max(worst, rep.worst_ratio);
    }
    const auto cov = coverage(dec, 100000, 7);
    const bool pass = passed == dec.wedges.size() && cov.covered_fraction >= 0.999;
    note("%-22s %zu/%zu wedges, worst ratio %.3f, radius %.3g, coverage %.5f", p.str().c_str(), passed,
         dec.wedges.size(), worst, dec.coverage_radius, cov.covered_fraction);
    ok = ok && pass;
  }
  return ok;
}

// 6. Van der Corput bounds.
bool van_der_corput() {
  bool ok = true;
  for (int dim : {1, 2}) {
    VdcOptions o;
    o.dimension = dim;
    o.trials = 100;
    const auto r = vdc_verify(o);
    note("%d-D: %zu trials, %zu evaluations, %zu violations, min headroom %.3f (trial %zu, k %d, lambda %g)", dim,
         r.trials, r.evaluations, r.violations, r.min_headroom, r.worst_case.trial, r.worst_case.k,
         r.worst_case.lambda);
    ok = ok && r.violations == 0 && r.min_headroom >= 1.2;
  }
  double worst = 0;
  for (int j = 0; j <= 20; ++j) {
    const double l = std::ldexp(1.0, j);
    worst = std::max(worst, fresnel_abs(l) / vdc_bound_1d(2, 2 * l, 1, 0));
  }
  note("Fresnel: max actual/bound %.4f over lambda = 2^0..2^20", worst);
  return ok && worst <= 1;
}

// 7. Case selection around the threshold.
bool trichotomy() {
  bool ok = true;
  for (int o = 2; o <= 8; ++o) {
    const Rational th = envelope_threshold(o);
    ok = ok && th == Rational(1, 3) + Rational(1, 3 * o);
    for (int d : {0, 1}) {
      // Walk delta upwards across the threshold; the case sequence must read a...a c b...b.
      std::string seq;
      for (int k = -4; k <= 4; ++k) {
        const Rational delta = th + Rational(k, 1000000007);
        seq += case_letter(envelope({delta, d}, o).kase);
      }
      const bool pass = seq == "aaaacbbbb";
      if (!pass || d == 0) note("o = %d, d = %d: threshold %s, cases %s", o, d, format_rational(th).c_str(), seq.c_str());
      ok = ok && pass;
    }
  }
  // o = 2 with a smooth density: delta >= 1/o = 1/2 = threshold, so case a never occurs.
  for (const auto& p : testutil::suite()) {
    if (p.order() != 2) continue;
    const auto e = critical_exponent(p, {});
    const char c = case_letter(envelope(e, 2).kase);
    note("o = 2 phase %-22s delta %s, case %c", p.str().c_str(), format_rational(e.delta).c_str(), c);
    ok = ok && c != 'a';
  }
  return ok;
}

// 8. Byte-identical artifacts from two analyze runs.
bool determinism() {
  auto cfg = parse_config(Json::parse(R"({"phase": ["y^2", "-1 x^3"], "comparability_samples": 2000,
      "sublevel": {"samples": 1000}, "sweep": {"lambda_j_min": 4, "lambda_j_max": 11, "lambda23_multipliers": [0, 1]}})"));
  const auto base = fs::temp_directory_path() / "oscdecay_acceptance";
  fs::remove_all(base);
  std::ostringstream log;
  int codes[2];
  for (int k = 0; k < 2; ++k) {
    cfg.output_dir = (base / std::to_string(k)).string();
    codes[k] = cmd_analyze(cfg, log);
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  bool ok = codes[0] == codes[1];
  std::size_t n = 0;
  for (const auto& f : fs::directory_iterator(base / "0")) {
    const auto ext = f.path().extension();
    if (ext != ".json" && ext != ".csv") continue;
    const bool same = slurp(f.path()) == slurp(base / "1" / f.path().filename());
    ++n;
    if (!same) note("%s differs", f.path().filename().c_str());
    ok = ok && same;
  }
  note("%zu CSV/JSON artifacts compared, analyze exit codes %d and %d", n, codes[0], codes[1]);
  fs::remove_all(base);
  return ok && n >= 5;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, bool (*)()>> criteria{
      {"1 exponent correctness vs sublevel ladders", exponent_correctness},
      {"2 weighted-density shift", weighted_shift},
      {"3 decay-rate reproduction (case a)", decay_rate},
      {"4 uniformity in lambda2, lambda3", uniformity},
      {"5 comparability certificates", certificates},
      {"6 van der Corput property suite", van_der_corput},
      {"7 envelope trichotomy", trichotomy},
      {"8 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    try {
      pass = run();
    } catch (const std::exception& e) {
      note("error: %s", e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s (%.1f s)\n", pass ? "PASS" : "FAIL", name, dt);
    std::fflush(stdout);
    failed += !pass;
  }
  return failed ? 1 : 0;
}
