#pragma once

#include "oscdecay/phase_poly.hpp"

#include <initializer_list>
#include <vector>

namespace testutil {

inline oscdecay::PhasePoly poly(std::initializer_list<const char*> terms) {
  std::vector<std::pair<oscdecay::Monomial, oscdecay::Rational>> t;
  for (const char* s : terms) t.push_back(oscdecay::parse_term(s));
  return oscdecay::PhasePoly(t);
}

// Phases used throughout the tests and the acceptance run.
inline std::vector<oscdecay::PhasePoly> suite() {
  return {poly({"x y"}),         poly({"x^2", "y^2"}),  poly({"x^2", "-y^2"}),
          poly({"y^2", "-x^3"}), poly({"x^3", "-y^3"}), poly({"x^2 y"}),
          poly({"y^2", "-2 x y", "x^2", "-x^5"}), poly({"x^3 y^2"})};
}

}  // namespace testutil
