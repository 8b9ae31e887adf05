#include "oscdecay/puiseux.hpp"

#include "oscdecay/roots.hpp"

#include <cmath>
#include <map>

namespace oscdecay {

namespace mp = boost::multiprecision;

PuiseuxSeries::PuiseuxSeries(std::vector<PuiseuxTerm> terms, std::optional<Rational> truncation_order)
    : terms_(std::move(terms)), truncation_order_(std::move(truncation_order)) {
  Integer n = 1;
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    const auto& t = terms_[k];
    if (t.exponent < 1) throw Error(ErrorCode::InvalidArgument, "phase-core", "shift exponents must be >= 1");
    if (t.coefficient == 0) throw Error(ErrorCode::InvalidArgument, "phase-core", "zero coefficient in series");
    if (k && !(terms_[k - 1].exponent < t.exponent))
      throw Error(ErrorCode::InvalidArgument, "phase-core", "series exponents must increase");
    n = lcm_of_denominators(t.exponent, n);
  }
  if (truncation_order_ && !terms_.empty() && !(terms_.back().exponent < *truncation_order_))
    throw Error(ErrorCode::InvalidArgument, "phase-core", "truncation order must exceed the last exponent");
  if (n > kMaxRamification)
    throw Error(ErrorCode::RamificationOverflow, "phase-core", "ramification " + n.str() + " exceeds 64");
  ramification_ = n.convert_to<int>();
  for (const auto& t : terms_) fast_.emplace_back(to_long_double(t.exponent), t.coefficient.convert_to<long double>());
}

Rational PuiseuxSeries::truncation_order() const {
  if (truncation_order_) return *truncation_order_;
  return terms_.empty() ? Rational(1) : Rational(terms_.back().exponent + 1);
}

PuiseuxSeries PuiseuxSeries::plus_term(const Rational& e, const Real& c) const {
  auto terms = terms_;
  if (!terms.empty() && terms.back().exponent == e) {
    terms.back().coefficient += c;
    if (terms.back().coefficient == 0) terms.pop_back();
  } else if (c != 0) {
    terms.push_back({e, c});
  }
  auto trunc = truncation_order_;
  if (trunc && !(e < *trunc)) trunc.reset();
  return PuiseuxSeries(std::move(terms), trunc);
}

PuiseuxSeries PuiseuxSeries::negated() const {
  auto terms = terms_;
  for (auto& t : terms) t.coefficient = -t.coefficient;
  return PuiseuxSeries(std::move(terms), truncation_order_);
}

PuiseuxSeries PuiseuxSeries::with_truncation(std::optional<Rational> t) const {
  return PuiseuxSeries(terms_, std::move(t));
}

long double PuiseuxSeries::value(long double x) const {
  long double s = 0;
  for (const auto& [e, c] : fast_) s += c * std::pow(x, e);
  return s;
}

long double PuiseuxSeries::derivative(long double x) const {
  long double s = 0;
  for (const auto& [e, c] : fast_) s += c * e * std::pow(x, e - 1);
  return s;
}

RamifiedPoly::RamifiedPoly(std::vector<RamifiedTerm> terms) {
  std::map<std::pair<Rational, int>, Real> acc;
  for (auto& t : terms) acc[{t.i, t.j}] += t.c;
  for (auto& [k, c] : acc)
    if (c != 0) terms_.push_back({k.first, k.second, c});
}

RamifiedPoly RamifiedPoly::from_phase(const PhasePoly& p) {
  std::vector<RamifiedTerm> t;
  for (const auto& [m, c] : p.terms()) t.push_back({Rational(m.i), m.j, to_real(c)});
  return RamifiedPoly(std::move(t));
}

Real RamifiedPoly::coefficient(const Rational& i, int j) const {
  for (const auto& t : terms_)
    if (t.i == i && t.j == j) return t.c;
  return 0;
}

int RamifiedPoly::max_j() const noexcept {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, t.j);
  return m;
}

int RamifiedPoly::ramification() const {
  Integer n = 1;
  for (const auto& t : terms_) n = lcm_of_denominators(t.i, n);
  return n.convert_to<int>();
}

Hull RamifiedPoly::hull() const {
  std::vector<HullPoint> pts;
  for (const auto& t : terms_) pts.push_back({t.i, t.j});
  return lower_left_hull(std::move(pts));
}

std::vector<Real> RamifiedPoly::edge_polynomial(const HullEdge& e, const Hull& h) const {
  std::vector<Real> c(h.vertices[e.upper].j + 1, Real(0));
  for (const auto& t : terms_)
    if (t.i + e.gamma * t.j == e.weight) c[t.j] = t.c;
  return c;
}

namespace {

// Polynomial in x with rational exponents; second component accumulates |contributions|.
using XSeries = std::map<Rational, std::pair<Real, Real>>;

XSeries multiply(const XSeries& a, const XSeries& b, const std::optional<Rational>& limit) {
  XSeries out;
  for (const auto& [ea, va] : a)
    for (const auto& [eb, vb] : b) {
      Rational e = ea + eb;
      if (limit && !(e < *limit)) continue;
      auto& slot = out[e];
      slot.first += va.first * vb.first;
      slot.second += va.second * vb.second;
    }
  return out;
}

}  // namespace

RamifiedPoly shift_substitute(const RamifiedPoly& p, const PuiseuxSeries& phi, int sign,
                              std::optional<Rational> max_order) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidArgument, "phase-core", "sign must be +1 or -1");
  std::optional<Rational> limit = max_order;
  if (!phi.exact()) {
    if (max_order && *max_order > phi.truncation_order())
      throw Error(ErrorCode::TruncationInsufficient, "phase-core",
                  "order " + format_rational(*max_order) + " exceeds shift truncation " +
                      format_rational(phi.truncation_order()));
    limit = phi.truncation_order();
  }
  const int deg = p.max_j();
  std::vector<XSeries> powers(deg + 1);
  powers[0][Rational(0)] = {Real(1), Real(1)};
  XSeries base;
  for (const auto& t : phi.terms()) base[t.exponent] = {t.coefficient, mp::abs(t.coefficient)};
  for (int n = 1; n <= deg; ++n) powers[n] = multiply(powers[n - 1], base, limit);

  std::map<std::pair<Rational, int>, std::pair<Real, Real>> acc;
  for (const auto& t : p.terms()) {
    Real binom = 1;
    for (int m = 0; m <= t.j; ++m) {
      if (m) binom = binom * (t.j - m + 1) / m;
      Real f = t.c * binom * ((m % 2 && sign < 0) ? -1 : 1);
      Real af = mp::abs(f);
      for (const auto& [e, v] : powers[t.j - m]) {
        Rational i = t.i + e;
        if (limit && !(i < *limit)) continue;
        auto& slot = acc[{i, m}];
        slot.first += f * v.first;
        slot.second += af * v.second;
      }
    }
  }
  // Cancellation residue at working precision is not a real coefficient.
  const Real spurious("1e-30");
  std::vector<RamifiedTerm> out;
  for (const auto& [k, v] : acc)
    if (v.first != 0 && mp::abs(v.first) > spurious * v.second) out.push_back({k.first, k.second, v.first});
  return RamifiedPoly(std::move(out));
}

RamifiedPoly shift_substitute(const PhasePoly& p, const PuiseuxSeries& phi, int sign,
                              std::optional<Rational> max_order) {
  return shift_substitute(RamifiedPoly::from_phase(p), phi, sign, std::move(max_order));
}

namespace {

void branch_search(const RamifiedPoly& poly, const PuiseuxSeries& phi, const Rational& gamma_min, int depth,
                   int max_depth, std::vector<PuiseuxSeries>& out) {
  if (poly.empty()) {
    out.push_back(phi);
    return;
  }
  Hull h = poly.hull();
  if (h.vertices.front().j >= 1) out.push_back(phi);  // y divides the shifted polynomial
  for (const auto& e : h.edges) {
    if (!(e.gamma > gamma_min)) continue;
    for (const auto& root : real_roots(poly.edge_polynomial(e, h))) {
      PuiseuxSeries next = phi.plus_term(e.gamma, root.value);
      RamifiedPoly shifted = shift_substitute(poly, PuiseuxSeries({{e.gamma, root.value}}, std::nullopt), 1);
      if (root.multiplicity == 1) {
        std::optional<Rational> trunc;
        if (!shifted.empty()) {
          Hull hs = shifted.hull();
          if (hs.vertices.front().j == 0 && !hs.edges.empty()) trunc = hs.edges.front().gamma;
        }
        out.push_back(next.with_truncation(trunc));
        continue;
      }
      if (depth + 1 > max_depth)
        throw Error(ErrorCode::DepthExceeded, "phase-core",
                    "root cluster did not separate within " + std::to_string(max_depth) + " steps");
      branch_search(shifted, next, e.gamma, depth + 1, max_depth, out);
    }
  }
}

}  // namespace

std::vector<PuiseuxSeries> puiseux_branches(const PhasePoly& p, int max_depth) {
  if (p.empty()) throw Error(ErrorCode::EmptyPolynomial, "phase-core", "phase has no terms");
  if (max_depth < 1) throw Error(ErrorCode::InvalidArgument, "phase-core", "max_depth must be positive");
  if (p.coefficient(0, p.order()) == 0)
    throw Error(ErrorCode::InvalidArgument, "phase-core", "branch expansion needs a pure y^o term");
  std::vector<PuiseuxSeries> out;
  branch_search(RamifiedPoly::from_phase(p), PuiseuxSeries{}, Rational(0), 0, max_depth, out);
  return out;
}

}  // namespace oscdecay
