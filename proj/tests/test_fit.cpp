#include "doctest.h"
#include "helpers.hpp"

#include "oscdecay/fit.hpp"

#include <cmath>

using namespace oscdecay;
using testutil::poly;

namespace {

std::vector<std::pair<double, double>> ladder(double lo_exp, double hi_exp, int n, double (*f)(double)) {
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i < n; ++i) {
    const double x = std::pow(10.0, lo_exp + (hi_exp - lo_exp) * i / (n - 1));
    s.push_back({x, f(x)});
  }
  return s;
}

}  // namespace

TEST_CASE("exact synthetic power law") {
  const auto s = ladder(2, 6, 13, [](double l) { return 5 * std::pow(l, -0.8); });
  const auto f = fit_decay(s, FitDirection::Decay);
  CHECK(f.delta_fit == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(f.d_fit == 0);
  CHECK(f.C == doctest::Approx(5.0).epsilon(1e-10));
  CHECK(f.rms_residual < 1e-12);
  CHECK(f.lambda_range.first == doctest::Approx(1e2));
  CHECK(f.lambda_range.second == doctest::Approx(1e6));
  CHECK(!f.alternative);
}

TEST_CASE("exact synthetic power law with a log") {
  const auto s = ladder(2, 6, 13, [](double l) { return 2 * std::log(l) / l; });
  const auto f = fit_decay(s, FitDirection::Decay);
  CHECK(f.delta_fit == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.d_fit == 1);
  CHECK(f.C == doctest::Approx(2.0).epsilon(1e-10));
  // d-selection consistency: over 4 decades the wrong d is worse by far more than 10x.
  CHECK(f.candidates[0].rms >= 10 * f.candidates[1].rms);
}

TEST_CASE("growth direction fits in 1/epsilon") {
  const auto s = ladder(-6, -2, 9, [](double e) { return 3 * e * std::log(1 / e); });
  const auto f = fit_decay(s, FitDirection::Growth);
  CHECK(f.delta_fit == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.d_fit == 1);
  CHECK(f.C == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("equivariance and thinning") {
  auto noisy = [](double l) { return 0.7 * std::pow(l, -0.55) * (1 + 0.01 * std::sin(3 * std::log(l))); };
  const auto s = ladder(1, 5, 17, noisy);
  const auto f = fit_decay(s, FitDirection::Decay);
  auto scaled = s;
  for (auto& [x, v] : scaled) v *= 42;
  const auto g = fit_decay(scaled, FitDirection::Decay);
  CHECK(g.delta_fit == doctest::Approx(f.delta_fit).epsilon(1e-12));
  CHECK(g.d_fit == f.d_fit);
  CHECK(g.C == doctest::Approx(42 * f.C).epsilon(1e-10));
  std::vector<std::pair<double, double>> thin;
  for (std::size_t i = 0; i < s.size(); i += 2) thin.push_back(s[i]);
  CHECK(std::fabs(fit_decay(thin, FitDirection::Decay).delta_fit - f.delta_fit) < 0.02);
}

TEST_CASE("near-tie reports both candidates") {
  // A power law with a slowly varying correction: both d fit comparably.
  const auto s = ladder(2, 4, 9, [](double l) { return std::pow(l, -0.5) * (1 + 3 / std::log(l)); });
  const auto f = fit_decay(s, FitDirection::Decay);
  const double a = f.candidates[0].rms, b = f.candidates[1].rms;
  CHECK(f.alternative.has_value() == (std::max(a, b) < 2 * std::min(a, b)));
  if (f.alternative) CHECK(f.alternative->d != f.d_fit);
}

TEST_CASE("fit preconditions") {
  auto s = ladder(2, 6, 13, [](double l) { return 1 / l; });
  try {
    fit_decay({s.begin(), s.begin() + 5}, FitDirection::Decay);
    FAIL("expected InsufficientSpan");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientSpan);
  }
  try {
    fit_decay(ladder(2, 3.5, 8, [](double l) { return 1 / l; }), FitDirection::Decay);
    FAIL("expected InsufficientSpan");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientSpan);
  }
  s[3].second = 0;
  try {
    fit_decay(s, FitDirection::Decay);
    FAIL("expected NonPositiveValue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveValue);
  }
}

TEST_CASE("sublevel ladder of xy") {
  DensitySpec ds;
  std::vector<std::pair<double, double>> s;
  for (int j = 7; j <= 20; ++j) {
    const double eps = std::ldexp(1.0, -j);
    s.push_back({eps, sublevel_measure(poly({"x y"}), ds, eps, 1, 2000, 9).value});
  }
  const auto f = fit_decay(s, FitDirection::Growth);
  CHECK(f.delta_fit >= 0.95);
  CHECK(f.delta_fit <= 1.05);
  CHECK(f.d_fit == 1);
}

TEST_CASE("uniformity scan") {
  const auto p = poly({"x^2", "y^2"});
  DensitySpec ds;
  const auto env = envelope(critical_exponent(p, ds), p.order());
  std::vector<double> lad;
  for (int j = 4; j <= 12; ++j) lad.push_back(std::ldexp(1.0, j));
  const auto rep = uniformity_scan(p, ds, env, lad, {0.0});
  CHECK(rep.pass);
  CHECK(std::isfinite(rep.C_hat));
  CHECK(rep.C_hat > 0);
  CHECK(rep.top_decade_variation <= 2);
  CHECK(!rep.monotone_growth);
  CHECK(rep.points.size() == lad.size());
  CHECK(rep.argmax.l1 == lad.front());  // ratio decays like lambda^{-1/2}

  // An envelope decaying faster than |T| makes the ratio grow.
  BoundEnvelope inflated = env;
  inflated.exponent = Rational(6, 5);
  const auto bad = uniformity_scan(p, ds, inflated, lad, {0.0});
  CHECK(bad.monotone_growth);
  CHECK(!bad.pass);

  DensitySpec zero;
  zero.k_model = KModel::Table;
  zero.k_table = {{0, 1}, {0, 0}};
  const auto z = uniformity_scan(p, zero, env, lad, {-1, 0, 1});
  CHECK(z.C_hat == 0);
  CHECK(z.points.size() == 9 * lad.size());
  CHECK_THROWS_AS(uniformity_scan(p, ds, env, {}, {0.0}), Error);
}
