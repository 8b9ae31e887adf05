#include "oscdecay/octants.hpp"

#include <array>
#include <cmath>

namespace oscdecay {

namespace {

const std::array<Rational, 4> kSlopeCandidates = {Rational(1, 2), Rational(1, 3), Rational(2, 5), Rational(3, 7)};

std::optional<Rational> pick_slope(const PhasePoly& p, int sign) {
  auto ok = [&](const Rational& m) { return p.form_value(Rational(1), m) != 0; };
  for (const auto& c : kSlopeCandidates)
    if (ok(c * sign)) return c * sign;
  // The form has at most o real zero directions, so a small denominator search terminates.
  for (int q = 2; q <= 20; ++q)
    for (int k = 1; k < q; ++k) {
      Rational c(k, q);
      if (ok(c * sign)) return c * sign;
    }
  return std::nullopt;
}

}  // namespace

std::pair<double, double> OctantMap::to_original(double x, double y) const {
  double u = swap ? y : x;
  double v = swap ? x : y;
  return {flip_x ? -u : u, flip_y ? -v : v};
}

int octant_of(double X, double Y, double slope_pos, double slope_neg) {
  bool fx = X < 0, fy = Y < 0;
  int quadrant = !fx && !fy ? 0 : (fx && !fy ? 1 : (fx && fy ? 2 : 3));
  double s = (fx == fy) ? slope_pos : -slope_neg;
  bool swap = std::fabs(Y) > s * std::fabs(X);
  return 2 * quadrant + (swap ? 1 : 0);
}

std::optional<std::pair<double, double>> OctantMap::to_sector(double X, double Y) const {
  if (octant_of(X, Y, pos, neg) != index) return std::nullopt;
  double u = std::fabs(X), v = std::fabs(Y);
  return swap ? std::pair{v, u} : std::pair{u, v};
}

std::vector<std::pair<OctantMap, PhasePoly>> make_octants(const PhasePoly& p) {
  if (p.empty()) throw Error(ErrorCode::EmptyPolynomial, "resolution", "phase has no terms");
  auto mp = pick_slope(p, 1);
  auto mm = pick_slope(p, -1);
  if (!mp || !mm)
    throw Error(ErrorCode::DegenerateForm, "resolution", "no slicing slope avoids the zeros of the leading form");
  std::vector<std::pair<OctantMap, PhasePoly>> out;
  for (int quadrant = 0; quadrant < 4; ++quadrant) {
    bool fx = quadrant == 1 || quadrant == 2;
    bool fy = quadrant == 2 || quadrant == 3;
    Rational slope = (fx == fy) ? *mp : Rational(-*mm);
    for (int swap = 0; swap < 2; ++swap) {
      OctantMap o;
      o.index = 2 * quadrant + swap;
      o.flip_x = fx;
      o.flip_y = fy;
      o.swap = swap == 1;
      o.slope_pos = *mp;
      o.slope_neg = *mm;
      o.pos = to_double(*mp);
      o.neg = to_double(*mm);
      o.b = o.swap ? Rational(1 / slope) : slope;
      out.emplace_back(o, p.transformed(fx, fy, o.swap));
    }
  }
  return out;
}

}  // namespace oscdecay
