#pragma once

#include "oscdecay/core.hpp"
#include "oscdecay/decomposition.hpp"
#include "oscdecay/density.hpp"
#include "oscdecay/phase_poly.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace oscdecay {

struct ExponentPair {
  Rational delta;
  int d = 0;
  bool exact = true;  // false: derived from rationalized real exponents
  bool operator==(const ExponentPair& o) const { return delta == o.delta && d == o.d; }
};

struct Divergent {
  std::string reason;
};

using WedgeExponent = std::variant<ExponentPair, Divergent>;

// Region 0 < x < radius, h x^m < y < H x^M (lower absent: y > 0), with |S| modelled by |d| x^alpha y^beta.
struct WedgeShape {
  Rational alpha;
  int beta = 0;
  double d = 1;
  Rational M{1};
  double H = 1;
  std::optional<Rational> m;
  double h = 0;
  double radius = 1;

  static WedgeShape of(const WedgeDomain& w);
};

WedgeExponent wedge_exponent(const WedgeShape& w, const DensitySpec& ds);
WedgeExponent wedge_exponent(const WedgeDomain& w, const DensitySpec& ds);

// Min delta; d is the largest among the minimizers. Any divergent entry makes the result divergent.
WedgeExponent combine_exponents(const std::vector<WedgeExponent>& parts);

struct ExponentReport {
  WedgeExponent result;
  std::vector<WedgeExponent> per_wedge;
  Decomposition decomposition;
};

// The exponents only depend on the wedge structure, so the radius is not certified here.
ExponentReport critical_exponent_report(const PhasePoly& p, const DensitySpec& ds, double eta = 0.25);
// Throws NonIntegrable for a divergent density.
ExponentPair critical_exponent(const PhasePoly& p, const DensitySpec& ds, double eta = 0.25);

enum class EnvelopeCase { A, B, C };
char case_letter(EnvelopeCase c);

struct BoundEnvelope {
  EnvelopeCase kase = EnvelopeCase::B;
  Rational exponent;
  int log_power = 0;
  Rational threshold;
  // (1 + lambda)^{-exponent} ln(e + lambda)^{log_power}
  double value(double lambda) const;
};

Rational envelope_threshold(int order);
BoundEnvelope envelope(const ExponentPair& e, int order);

// (alpha + delta0, d0); NonIntegrable when alpha <= -delta0.
ExponentPair smooth_shift_check(const ExponentPair& e0, const Rational& alpha);

// Weighted measure of {|S| < t} on the model wedge, dmu = |S|^alpha x^beta dx dy (closed form).
double wedge_sublevel_measure(const WedgeShape& w, const DensitySpec& ds, double t);

struct Certificate {
  double value = 0;          // mu{|S| < 1/lambda} + lambda^{-theta} int_{|S| >= 1/lambda} |S|^{-theta} dmu
  double sublevel_part = 0;  // first term
  double tail_part = 0;      // second term
  double envelope = 0;       // envelope(e, order).value(lambda)
};

Certificate bound_certificate(const WedgeShape& w, const DensitySpec& ds, const ExponentPair& e, int order,
                              double lambda);

}  // namespace oscdecay
