#pragma once

#include "oscdecay/core.hpp"

#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace oscdecay {

struct Monomial {
  int i = 0;  // power of x
  int j = 0;  // power of y
  auto operator<=>(const Monomial&) const = default;
};

// Exact bivariate polynomial vanishing at the origin. Zero coefficients are never stored.
class PhasePoly {
 public:
  using TermMap = std::map<Monomial, Rational>;

  PhasePoly() = default;
  // Duplicate monomials are summed. Throws EmptyPolynomial when nothing survives and
  // InvalidArgument for a constant term or negative powers.
  explicit PhasePoly(const std::vector<std::pair<Monomial, Rational>>& terms);

  const TermMap& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  int order() const noexcept { return order_; }
  int degree() const noexcept;
  Rational coefficient(int i, int j) const;

  PhasePoly scaled(const Rational& c) const;
  // Returns S(X, Y) with (u, v) = swap ? (y, x) : (x, y), X = ±u, Y = ±v.
  PhasePoly transformed(bool flip_x, bool flip_y, bool swap) const;
  // Degree-o homogeneous part evaluated exactly.
  Rational form_value(const Rational& x, const Rational& y) const;

  double value(double x, double y) const;
  std::string str() const;

  bool operator==(const PhasePoly& other) const { return terms_ == other.terms_; }

 private:
  TermMap terms_;
  int order_ = 0;
};

// Parses "c x^i y^j" (also "c", "x", "-3/2 y^2", "x^2 y"); c may be a rational literal.
std::pair<Monomial, Rational> parse_term(std::string_view text);

}  // namespace oscdecay
