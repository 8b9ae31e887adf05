#pragma once

#include "oscdecay/core.hpp"
#include "oscdecay/newton.hpp"
#include "oscdecay/phase_poly.hpp"

#include <optional>
#include <vector>

namespace oscdecay {

inline constexpr int kMaxRamification = 64;

struct PuiseuxTerm {
  Rational exponent;
  Real coefficient;
};

// y = sum c_k x^{e_k}. An exact series is a finite expression, not a truncation.
class PuiseuxSeries {
 public:
  PuiseuxSeries() = default;
  // Validates ordering, exponents >= 1, nonzero coefficients and the ramification cap.
  PuiseuxSeries(std::vector<PuiseuxTerm> terms, std::optional<Rational> truncation_order);

  const std::vector<PuiseuxTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  bool exact() const noexcept { return !truncation_order_.has_value(); }
  // For exact series: one past the largest exponent (or 1 when empty).
  Rational truncation_order() const;
  int ramification() const noexcept { return ramification_; }

  // Appends c x^e, merging with the last term on equal exponents. e must not decrease.
  PuiseuxSeries plus_term(const Rational& e, const Real& c) const;
  PuiseuxSeries negated() const;
  PuiseuxSeries with_truncation(std::optional<Rational> t) const;

  long double value(long double x) const;
  long double derivative(long double x) const;

 private:
  std::vector<PuiseuxTerm> terms_;
  std::optional<Rational> truncation_order_;
  int ramification_ = 1;
  std::vector<std::pair<long double, long double>> fast_;  // (exponent, coefficient)
};

struct RamifiedTerm {
  Rational i;
  int j = 0;
  Real c;
};

// Bivariate polynomial in (x^{1/N}, y) with real coefficients, sorted by (i, j).
class RamifiedPoly {
 public:
  RamifiedPoly() = default;
  explicit RamifiedPoly(std::vector<RamifiedTerm> terms);
  static RamifiedPoly from_phase(const PhasePoly& p);

  const std::vector<RamifiedTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  Real coefficient(const Rational& i, int j) const;
  int max_j() const noexcept;
  int ramification() const;
  Hull hull() const;
  // e(c) = sum over edge points of a_ij c^j.
  std::vector<Real> edge_polynomial(const HullEdge& e, const Hull& h) const;

 private:
  std::vector<RamifiedTerm> terms_;
};

// P(x, sign*y + phi(x)). Terms at x-order >= max_order are dropped; a truncated phi only
// supports orders up to its truncation order (TruncationInsufficient otherwise).
RamifiedPoly shift_substitute(const RamifiedPoly& p, const PuiseuxSeries& phi, int sign,
                              std::optional<Rational> max_order = std::nullopt);
RamifiedPoly shift_substitute(const PhasePoly& p, const PuiseuxSeries& phi, int sign,
                              std::optional<Rational> max_order = std::nullopt);

// Real branches y = phi(x), x -> 0+, each cut where its multiplicity drops to one.
std::vector<PuiseuxSeries> puiseux_branches(const PhasePoly& p, int max_depth = 12);

}  // namespace oscdecay
