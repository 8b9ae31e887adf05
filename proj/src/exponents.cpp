#include "oscdecay/exponents.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace oscdecay {

WedgeShape WedgeShape::of(const WedgeDomain& w) {
  WedgeShape s;
  s.alpha = w.alpha;
  s.beta = w.beta;
  s.d = w.d.convert_to<double>();
  s.M = w.M;
  s.H = w.H.convert_to<double>();
  if (w.lower) {
    s.m = w.lower->m;
    s.h = w.lower->h.convert_to<double>();
  }
  s.radius = w.radius > 0 ? w.radius : 1.0;
  return s;
}

WedgeExponent wedge_exponent(const WedgeShape& w, const DensitySpec& ds) {
  if (w.alpha < 0 || w.beta < 0) throw Error(ErrorCode::InvalidArgument, "exponents", "negative monomial exponent");
  if (w.M < 1) throw Error(ErrorCode::InvalidArgument, "exponents", "upper boundary exponent must be >= 1");
  if (w.m && !(*w.m > w.M)) throw Error(ErrorCode::InvalidArgument, "exponents", "lower boundary must be thinner");
  // In log coordinates the wedge is a cone spanned by r1 = (1, M) and r2 = (1, m) or (0, 1).
  const Rational a = ds.alpha * w.alpha + ds.beta, b = ds.alpha * w.beta;
  const Rational p1 = a + 1, p2 = b + 1;
  struct Ray {
    Rational u, v;
  };
  const Ray rays[2] = {{1, w.M}, w.m ? Ray{1, *w.m} : Ray{0, 1}};
  std::optional<Rational> best;
  int hits = 0;
  for (const auto& r : rays) {
    const Rational pr = p1 * r.u + p2 * r.v;
    if (pr <= 0)
      return Divergent{"density x^" + format_rational(a) + " y^" + format_rational(b) + " not integrable on the wedge"};
    const Rational qr = w.alpha * r.u + Rational(w.beta) * r.v;
    if (qr <= 0) continue;
    const Rational ratio = pr / qr;
    if (!best || ratio < *best) {
      best = ratio;
      hits = 1;
    } else if (ratio == *best) {
      ++hits;
    }
  }
  if (!best) throw Error(ErrorCode::InvalidArgument, "exponents", "monomial does not vanish on the wedge");
  return ExponentPair{*best, hits == 2 ? 1 : 0, ds.exact};
}

WedgeExponent wedge_exponent(const WedgeDomain& w, const DensitySpec& ds) {
  return wedge_exponent(WedgeShape::of(w), ds);
}

WedgeExponent combine_exponents(const std::vector<WedgeExponent>& parts) {
  if (parts.empty()) throw Error(ErrorCode::InvalidArgument, "exponents", "nothing to combine");
  std::optional<ExponentPair> out;
  for (const auto& part : parts) {
    if (const auto* dv = std::get_if<Divergent>(&part)) return *dv;
    const auto& e = std::get<ExponentPair>(part);
    if (!out || e.delta < out->delta) {
      out = e;
    } else if (e.delta == out->delta) {
      out->d = std::max(out->d, e.d);
    }
    out->exact = out->exact && e.exact;
  }
  return *out;
}

ExponentReport critical_exponent_report(const PhasePoly& p, const DensitySpec& ds, double eta) {
  ds.validate();
  DecomposeOptions opts;
  opts.certify = false;
  ExponentReport rep{Divergent{}, {}, decompose(p, eta, 0.5, opts)};
  for (const auto& w : rep.decomposition.wedges) rep.per_wedge.push_back(wedge_exponent(w, ds));
  rep.result = combine_exponents(rep.per_wedge);
  return rep;
}

ExponentPair critical_exponent(const PhasePoly& p, const DensitySpec& ds, double eta) {
  auto rep = critical_exponent_report(p, ds, eta);
  if (const auto* dv = std::get_if<Divergent>(&rep.result))
    throw Error(ErrorCode::NonIntegrable, "exponents", dv->reason);
  return std::get<ExponentPair>(rep.result);
}

char case_letter(EnvelopeCase c) {
  switch (c) {
    case EnvelopeCase::A: return 'a';
    case EnvelopeCase::B: return 'b';
    case EnvelopeCase::C: return 'c';
  }
  return '?';
}

double BoundEnvelope::value(double lambda) const {
  if (!(lambda >= 0)) throw Error(ErrorCode::InvalidArgument, "exponents", "envelope needs lambda >= 0");
  double v = std::pow(1 + lambda, -to_double(exponent));
  if (log_power) v *= std::pow(std::log(M_E + lambda), log_power);
  return v;
}

Rational envelope_threshold(int order) {
  if (order < 2) throw Error(ErrorCode::InvalidArgument, "exponents", "order of the zero must be >= 2");
  return Rational(1, 3) + Rational(1, 3 * order);
}

BoundEnvelope envelope(const ExponentPair& e, int order) {
  BoundEnvelope b;
  b.threshold = envelope_threshold(order);
  int cmp;
  if (e.exact) {
    cmp = e.delta < b.threshold ? -1 : (e.delta > b.threshold ? 1 : 0);
  } else {
    const double gap = to_double(Rational(e.delta - b.threshold));
    cmp = std::fabs(gap) < 1e-12 ? 0 : (gap < 0 ? -1 : 1);
  }
  if (cmp < 0) {
    b.kase = EnvelopeCase::A;
    b.exponent = e.delta;
    b.log_power = e.d;
  } else if (cmp > 0) {
    b.kase = EnvelopeCase::B;
    b.exponent = b.threshold;
    b.log_power = 0;
  } else {
    b.kase = EnvelopeCase::C;
    b.exponent = b.threshold;
    b.log_power = e.d + 1;
  }
  return b;
}

ExponentPair smooth_shift_check(const ExponentPair& e0, const Rational& alpha) {
  if (alpha <= -e0.delta)
    throw Error(ErrorCode::NonIntegrable, "exponents",
                "alpha " + format_rational(alpha) + " <= -delta0 = " + format_rational(Rational(-e0.delta)));
  return {e0.delta + alpha, e0.d, e0.exact};
}

namespace {

// c x^e (ln x)^k, k in {0, 1}
struct Piece {
  double c, e;
  int k;
};

double primitive(const Piece& p, double x) {
  const double lx = std::log(x);
  if (p.k == 0) return p.e == -1 ? p.c * lx : p.c * std::exp((p.e + 1) * lx) / (p.e + 1);
  if (p.e == -1) return p.c * lx * lx / 2;
  const double f = p.e + 1;
  return p.c * std::exp(f * lx) * (lx / f - 1 / (f * f));
}

double integrate(const std::vector<Piece>& ps, double lo, double hi) {
  if (!(hi > lo)) return 0;
  double s = 0;
  for (const auto& p : ps) {
    if (p.c == 0) continue;
    if (lo == 0) {
      if (p.e <= -1) return std::numeric_limits<double>::infinity();
      s += primitive(p, hi);
    } else {
      s += primitive(p, hi) - primitive(p, lo);
    }
  }
  return s;
}

struct ModelWedge {
  double A, B, a, b, D, coef, M, H, m = 0, h = 0, end;
  bool lower;

  ModelWedge(const WedgeShape& w, const DensitySpec& ds) {
    if (w.d == 0) throw Error(ErrorCode::InvalidArgument, "exponents", "zero monomial coefficient");
    if (!(w.radius > 0) || !(w.H > 0)) throw Error(ErrorCode::InvalidArgument, "exponents", "degenerate wedge");
    A = to_double(w.alpha);
    B = w.beta;
    a = to_double(Rational(ds.alpha * w.alpha + ds.beta));
    b = to_double(Rational(ds.alpha * w.beta));
    D = std::fabs(w.d);
    coef = std::pow(D, ds.alpha_d());
    M = to_double(w.M);
    H = w.H;
    lower = w.m.has_value();
    end = w.radius;
    if (lower) {
      if (!(w.h > 0)) throw Error(ErrorCode::InvalidArgument, "exponents", "lower boundary needs h > 0");
      m = to_double(*w.m);
      h = w.h;
      end = std::min(end, std::pow(H / h, 1 / (m - M)));  // boundaries cross there
    }
  }

  // y-integral of y^b from the lower boundary to c x^e, times x^a.
  std::vector<Piece> strip(double c_log, double e) const {
    const double b1 = b + 1;
    if (b1 != 0) {
      std::vector<Piece> out{{std::exp(b1 * c_log) / b1, a + e * b1, 0}};
      if (lower) out.push_back({-std::pow(h, b1) / b1, a + m * b1, 0});
      return out;
    }
    if (!lower) return {{std::numeric_limits<double>::infinity(), a, 0}};
    return {{c_log - std::log(h), a, 0}, {e - m, a, 1}};
  }

  double sup() const { return D * std::pow(end, A) * std::pow(H * std::pow(end, M), B); }
  double total() const { return coef * integrate(strip(std::log(H), M), 0, end); }

  double measure(double t) const {
    if (!(t > 0)) return 0;
    const double lT = std::log(t / D);
    if (B == 0) {
      const double X = std::exp(lT / A);
      return coef * integrate(strip(std::log(H), M), 0, std::min(end, X));
    }
    // y < Y(x) = (t/D)^{1/B} x^{-A/B}; Y meets the upper boundary at x1 and the lower one at x2.
    const double x1 = std::min(end, std::exp((lT / B - std::log(H)) / (M + A / B)));
    const double x2 = lower ? std::min(end, std::exp((lT / B - std::log(h)) / (m + A / B))) : end;
    double s = integrate(strip(std::log(H), M), 0, x1);
    s += integrate(strip(lT / B, -A / B), x1, x2);
    return coef * s;
  }
};

}  // namespace

double wedge_sublevel_measure(const WedgeShape& w, const DensitySpec& ds, double t) {
  return ModelWedge(w, ds).measure(t);
}

Certificate bound_certificate(const WedgeShape& w, const DensitySpec& ds, const ExponentPair& e, int order,
                              double lambda) {
  if (!(lambda > 0)) throw Error(ErrorCode::InvalidArgument, "exponents", "lambda must be positive");
  const auto we = wedge_exponent(w, ds);
  if (const auto* dv = std::get_if<Divergent>(&we))
    throw Error(ErrorCode::NonIntegrable, "exponents", dv->reason);
  const ModelWedge mw(w, ds);
  const double theta = to_double(envelope_threshold(order));
  const double s = 1 / lambda, top = mw.sup(), total = mw.total();
  Certificate c;
  c.envelope = envelope(e, order).value(lambda);
  if (s >= top) {
    c.value = c.sublevel_part = total;
    return c;
  }
  const double ms = mw.measure(s);
  // int_{s}^{inf} t^{-theta} d(mu(t) - mu(s)), by parts; mu saturates at `top`.
  auto f = [&](double u) {
    const double t = std::exp(u);
    return theta * std::exp(-theta * u) * (mw.measure(t) - ms);
  };
  std::vector<double> cuts{std::log(s)};
  if (mw.lower && mw.B > 0) {
    const double kink = mw.D * std::pow(mw.end, mw.A) * std::pow(mw.h * std::pow(mw.end, mw.m), mw.B);
    if (kink > s && kink < top) cuts.push_back(std::log(kink));
  }
  cuts.push_back(std::log(top));
  double tail = std::pow(top, -theta) * (total - ms);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    tail += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, cuts[k], cuts[k + 1], 15, 1e-6);
  c.sublevel_part = ms;
  c.tail_part = std::pow(lambda, -theta) * tail;
  c.value = c.sublevel_part + c.tail_part;
  return c;
}

}  // namespace oscdecay
