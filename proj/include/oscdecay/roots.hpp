#pragma once

#include "oscdecay/core.hpp"

#include <vector>

namespace oscdecay {

struct RealRoot {
  Real value;
  int multiplicity = 1;
};

// Nonzero real roots of sum coeffs[k] c^k, ascending, clustered at relative tolerance
// cluster_tol. Zero roots are stripped before solving.
std::vector<RealRoot> real_roots(std::vector<Real> coeffs, double cluster_tol = 1e-9);

// Real zeros of sum c[k] x^k inside the open interval (lo, hi), ascending, in long double.
// Sign changes are bisected to full precision; a local extremum with |p| <= 1e-13 * sum |c_k x^k|
// counts as a touching zero.
std::vector<long double> real_roots_in(const std::vector<long double>& c, long double lo, long double hi);

// Horner evaluation of the n-th derivative.
Real poly_derivative_value(const std::vector<Real>& coeffs, int n, const Real& x);

}  // namespace oscdecay
