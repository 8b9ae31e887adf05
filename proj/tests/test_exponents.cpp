#include "doctest.h"
#include "helpers.hpp"

#include "oscdecay/exponents.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <functional>

using namespace oscdecay;
using testutil::poly;

namespace {

ExponentPair pair_of(const WedgeExponent& w) {
  REQUIRE(std::holds_alternative<ExponentPair>(w));
  return std::get<ExponentPair>(w);
}

WedgeShape shape(Rational a, int b, Rational M = 1, double H = 1) {
  WedgeShape s;
  s.alpha = a;
  s.beta = b;
  s.M = M;
  s.H = H;
  return s;
}

DensitySpec density(Rational alpha, Rational beta = 0) {
  DensitySpec ds;
  ds.alpha = alpha;
  ds.beta = beta;
  return ds;
}

// Independent 2-D quadrature over the model wedge of f(x, y) x^a y^b |d|^alpha, with y-breakpoints from `ycut`.
double wedge_integral(const WedgeShape& w, const DensitySpec& ds,
                      const std::function<double(double, double)>& f,
                      const std::function<double(double)>& ycut) {
  const double a = to_double(Rational(ds.alpha * w.alpha + ds.beta)), b = to_double(Rational(ds.alpha * w.beta));
  const double M = to_double(w.M), m = w.m ? to_double(*w.m) : 0;
  double end = w.radius;
  if (w.m) end = std::min(end, std::pow(w.H / w.h, 1 / (m - M)));
  boost::math::quadrature::tanh_sinh<double> ts;
  auto inner = [&](double x) {
    const double lo = w.m ? w.h * std::pow(x, m) : 0.0, hi = w.H * std::pow(x, M);
    if (!(hi > lo)) return 0.0;
    auto g = [&](double y) { return y <= 0 ? 0.0 : f(x, y) * std::pow(y, b); };
    double c = ycut(x), s = 0;
    if (c > lo && c < hi) {
      s = ts.integrate(g, lo, c, 1e-11) + ts.integrate(g, c, hi, 1e-11);
    } else {
      s = ts.integrate(g, lo, hi, 1e-11);
    }
    return s * std::pow(x, a);
  };
  // x = e^u; the integrand is negligible 60 e-folds below the radius for these shapes.
  auto outer = [&](double u) {
    const double x = std::exp(u);
    return inner(x) * x;
  };
  return std::pow(std::fabs(w.d), ds.alpha_d()) *
         boost::math::quadrature::gauss_kronrod<double, 31>::integrate(outer, std::log(end) - 60, std::log(end), 30,
                                                                        1e-9);
}

double brute_sublevel(const WedgeShape& w, const DensitySpec& ds, double eps) {
  const double A = to_double(w.alpha), B = w.beta, D = std::fabs(w.d);
  auto f = [&](double x, double y) { return D * std::pow(x, A) * std::pow(y, B) < eps ? 1.0 : 0.0; };
  auto cut = [&](double x) { return B > 0 ? std::pow(eps / (D * std::pow(x, A)), 1 / B) : -1.0; };
  if (B == 0) {
    // Indicator only depends on x; clip the radius instead of cutting in y.
    WedgeShape c = w;
    c.radius = std::min(w.radius, std::pow(eps / D, 1 / A));
    return wedge_integral(c, ds, [](double, double) { return 1.0; }, [](double) { return -1.0; });
  }
  return wedge_integral(w, ds, f, cut);
}

}  // namespace

TEST_CASE("wedge_exponent: closed-form examples on 0 < y < x") {
  auto e = pair_of(wedge_exponent(shape(1, 1), density(0)));
  CHECK(e.delta == 1);
  CHECK(e.d == 1);
  e = pair_of(wedge_exponent(shape(2, 0), density(0)));
  CHECK(e.delta == 1);
  CHECK(e.d == 0);
  e = pair_of(wedge_exponent(shape(1, 0), density(Rational(-1, 2))));
  CHECK(e.delta == Rational(3, 2));
  CHECK(e.d == 0);
}

TEST_CASE("wedge_exponent: lower boundaries and divergence") {
  // y^2 above h x^{3/2}: rays (1, 1) and (1, 3/2), q = (0, 2) -> min(2/2, (5/2)/3) = 5/6.
  WedgeShape s = shape(0, 2);
  s.m = Rational(3, 2);
  s.h = 4;
  auto e = pair_of(wedge_exponent(s, density(0)));
  CHECK(e.delta == Rational(5, 6));
  CHECK(e.d == 0);

  CHECK(std::holds_alternative<Divergent>(wedge_exponent(shape(2, 0), density(-1))));
  CHECK(std::holds_alternative<Divergent>(wedge_exponent(shape(0, 2), density(Rational(-1, 2)))));
  // With a lower boundary y^{-1} is integrable.
  CHECK(std::holds_alternative<ExponentPair>(wedge_exponent(s, density(Rational(-1, 2)))));
  CHECK_THROWS_AS(wedge_exponent(shape(0, 0), density(0)), Error);
}

TEST_CASE("combine_exponents") {
  auto c = pair_of(combine_exponents({ExponentPair{1, 1}, ExponentPair{2, 0}}));
  CHECK(c == ExponentPair{1, 1});
  c = pair_of(combine_exponents({ExponentPair{1, 0}, ExponentPair{1, 1}}));
  CHECK(c == ExponentPair{1, 1});
  c = pair_of(combine_exponents({ExponentPair{Rational(5, 6), 0}, ExponentPair{1, 1}}));
  CHECK(c == ExponentPair{Rational(5, 6), 0});
  CHECK(std::holds_alternative<Divergent>(combine_exponents({ExponentPair{1, 0}, Divergent{"x"}})));
  CHECK_THROWS_AS(combine_exponents({}), Error);
}

TEST_CASE("critical_exponent on the suite") {
  const std::vector<std::pair<Rational, int>> expected = {
      {1, 1},              // xy
      {1, 0},              // x^2 + y^2
      {1, 1},              // x^2 - y^2, a Morse saddle like xy
      {Rational(5, 6), 0}, // y^2 - x^3
      {Rational(2, 3), 0}, // x^3 - y^3, one simple real line
      {Rational(1, 2), 0}, // x^2 y
      {Rational(7, 10), 0},// (y - x)^2 - x^5, y'^2 - x^5 after y' = y - x
      {Rational(1, 3), 0}, // x^3 y^2
  };
  auto phases = testutil::suite();
  for (std::size_t k = 0; k < phases.size(); ++k) {
    CAPTURE(phases[k].str());
    auto e = critical_exponent(phases[k], density(0));
    CHECK(e.delta == expected[k].first);
    CHECK(e.d == expected[k].second);
    const int o = phases[k].order();
    CHECK(e.delta >= Rational(1, o));
    CHECK(e.delta <= Rational(2, o));
  }
}

TEST_CASE("critical_exponent: scaling, symmetry and eta independence") {
  for (const auto& p : {poly({"y^2", "-x^3"}), poly({"x^2 y"}), poly({"y^2", "-2 x y", "x^2", "-x^5"})}) {
    CAPTURE(p.str());
    const auto ref = critical_exponent(p, density(0));
    for (int c : {2, 10, -1}) CHECK(critical_exponent(p.scaled(Rational(c)), density(0)) == ref);
    for (int s = 0; s < 8; ++s) CHECK(critical_exponent(p.transformed(s & 1, s & 2, s & 4), density(0)) == ref);
    for (double eta : {0.1, 0.4}) CHECK(critical_exponent(p, density(0), eta) == ref);
  }
}

TEST_CASE("critical_exponent: beta = 0 weights shift delta by alpha") {
  for (const auto& p : testutil::suite()) {
    CAPTURE(p.str());
    const auto e0 = critical_exponent(p, density(0));
    for (Rational alpha : {Rational(-1, 4), Rational(-1, 2), Rational(1, 2)}) {
      CAPTURE(format_rational(alpha));
      if (alpha <= -e0.delta) {
        CHECK_THROWS_AS(smooth_shift_check(e0, alpha), Error);
        auto rep = critical_exponent_report(p, density(alpha));
        CHECK(std::holds_alternative<Divergent>(rep.result));
        continue;
      }
      CHECK(critical_exponent(p, density(alpha)) == smooth_shift_check(e0, alpha));
    }
  }
}

TEST_CASE("smooth_shift_check") {
  CHECK(smooth_shift_check({1, 0}, 0) == ExponentPair{1, 0});
  CHECK(smooth_shift_check({Rational(5, 6), 0}, Rational(-1, 2)) == ExponentPair{Rational(1, 3), 0});
  CHECK(smooth_shift_check({1, 1}, Rational(-9, 10)) == ExponentPair{Rational(1, 10), 1});
  try {
    smooth_shift_check({1, 0}, -1);
    FAIL("expected NonIntegrable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonIntegrable);
  }
}

TEST_CASE("envelope trichotomy") {
  auto b = envelope({1, 0}, 2);
  CHECK(b.kase == EnvelopeCase::B);
  CHECK(b.exponent == Rational(1, 2));
  b = envelope({Rational(5, 6), 0}, 3);
  CHECK(b.kase == EnvelopeCase::B);
  CHECK(b.exponent == Rational(4, 9));
  b = envelope({Rational(3, 10), 0}, 6);
  CHECK(b.kase == EnvelopeCase::A);
  CHECK(b.exponent == Rational(3, 10));
  CHECK(b.threshold == Rational(7, 18));

  for (int o : {2, 3, 4, 7}) {
    const Rational th = envelope_threshold(o);
    for (int d : {0, 1}) {
      auto c = envelope({th, d}, o);
      CHECK(c.kase == EnvelopeCase::C);
      CHECK(c.log_power == d + 1);
      const Rational tiny(1, 1000000000);
      auto lo = envelope({th - tiny, d}, o);
      CHECK(lo.kase == EnvelopeCase::A);
      CHECK(lo.log_power == d);
      CHECK(envelope({th + tiny, d}, o).kase == EnvelopeCase::B);
    }
  }
  // Approximate exponents use a 1e-12 band around the threshold.
  CHECK(envelope({Rational(1, 2) + Rational(1, 10000000000000LL), 0, false}, 2).kase == EnvelopeCase::C);
  CHECK(envelope({Rational(1, 2) + Rational(1, 10000000000000LL), 0, true}, 2).kase == EnvelopeCase::B);

  CHECK(b.value(0) == doctest::Approx(1));
  auto cc = envelope({Rational(1, 2), 0}, 2);
  CHECK(cc.value(100) == doctest::Approx(std::pow(101.0, -0.5) * std::log(M_E + 100)));
  CHECK_THROWS_AS(envelope({1, 0}, 1), Error);
}

TEST_CASE("envelope: a smooth density at o = 2 is never case a") {
  for (const auto& p : testutil::suite()) {
    if (p.order() != 2) continue;
    CAPTURE(p.str());
    CHECK(envelope(critical_exponent(p, density(0)), 2).kase != EnvelopeCase::A);
  }
}

TEST_CASE("wedge_sublevel_measure matches 2-D quadrature") {
  std::vector<std::pair<WedgeShape, DensitySpec>> cases;
  cases.push_back({shape(1, 1), density(0)});
  cases.push_back({shape(2, 0, 1, 0.5), density(0)});
  cases.push_back({shape(Rational(3, 2), 1, Rational(3, 2), 0.3), density(Rational(-1, 2))});
  {
    WedgeShape s = shape(0, 2, 1, 0.5);
    s.m = Rational(3, 2);
    s.h = 2;
    s.d = -1.5;
    cases.push_back({s, density(Rational(1, 3), Rational(1, 2))});
  }
  for (auto& [w, ds] : cases) {
    for (double eps : {1e-3, 1e-4, 1e-5}) {
      const double closed = wedge_sublevel_measure(w, ds, eps);
      const double brute = brute_sublevel(w, ds, eps);
      CAPTURE(eps);
      CHECK(closed == doctest::Approx(brute).epsilon(0.01));
    }
    // Local slope deep in the ladder approaches delta (the log factor only bends it slightly).
    const auto e = pair_of(wedge_exponent(w, ds));
    const double slope = std::log10(wedge_sublevel_measure(w, ds, 1e-10) / wedge_sublevel_measure(w, ds, 1e-11));
    CHECK(std::fabs(slope - to_double(e.delta)) < (e.d ? 0.1 : 0.02));
  }
}

TEST_CASE("bound_certificate against direct quadrature") {
  const int o = 2;
  const double theta = to_double(envelope_threshold(o));
  auto check = [&](const WedgeShape& w, const DensitySpec& ds, double lambda) {
    const double A = to_double(w.alpha), B = w.beta, D = std::fabs(w.d);
    auto f = [&](double x, double y) {
      return std::min(1.0, std::pow(lambda * D * std::pow(x, A) * std::pow(y, B), -theta));
    };
    auto cut = [&](double x) { return B > 0 ? std::pow(1 / (lambda * D * std::pow(x, A)), 1 / B) : -1.0; };
    const auto e = pair_of(wedge_exponent(w, ds));
    auto c = bound_certificate(w, ds, e, o, lambda);
    CHECK(c.value == doctest::Approx(wedge_integral(w, ds, f, cut)).epsilon(1e-4));
    return c;
  };
  // xy on 0 < y < x at lambda = 1e4: delta = 1 > theta, so the value scales like lambda^{-1/2}.
  auto c = check(shape(1, 1), density(0), 1e4);
  CHECK(c.value / std::pow(1e4, -theta) > 0.1);
  CHECK(c.value / std::pow(1e4, -theta) < 10);
  check(shape(2, 0, 1, 0.5), density(0), 300);
  {
    WedgeShape s = shape(0, 2, 1, 0.5);
    s.m = Rational(3, 2);
    s.h = 2;
    check(s, density(Rational(-1, 4)), 5e3);
  }
  // Saturation: tiny lambda gives the whole measure.
  auto sat = bound_certificate(shape(1, 1), density(0), {1, 1}, o, 1e-6);
  CHECK(sat.value == doctest::Approx(0.5));
  CHECK(sat.tail_part == 0);
}

TEST_CASE("bound_certificate: delta at the threshold carries one more log") {
  // x^{9/2} on 0 < y < x has delta = 2/(9/2) = 4/9 = theta for o = 3.
  const WedgeShape w = shape(Rational(9, 2), 0);
  const auto e = pair_of(wedge_exponent(w, density(0)));
  REQUIRE(e.delta == envelope_threshold(3));
  REQUIRE(envelope(e, 3).kase == EnvelopeCase::C);
  const double th = to_double(e.delta);
  std::vector<double> with_log, without;
  for (double lambda : {1e4, 1e6, 1e8, 1e10}) {
    const double v = bound_certificate(w, density(0), e, 3, lambda).value;
    with_log.push_back(v / (std::pow(lambda, -th) * std::log(lambda)));
    without.push_back(v / std::pow(lambda, -th));
  }
  // lambda^{-theta} alone keeps growing by the log; with the log the ratio settles.
  for (std::size_t k = 1; k < without.size(); ++k) CHECK(without[k] > without[k - 1] * 1.1);
  CHECK(with_log.back() / with_log[1] == doctest::Approx(1).epsilon(0.15));
}
