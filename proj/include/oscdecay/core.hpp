#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace oscdecay {

// Exact exponents and phase coefficients.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;
// Branch and level-polynomial coefficients; roots of edge polynomials are irrational.
using Real = boost::multiprecision::cpp_bin_float_50;

enum class ErrorCode {
  EmptyPolynomial,
  InvalidArgument,
  ParseError,
  TruncationInsufficient,
  DepthExceeded,
  RamificationOverflow,
  DegenerateForm,
  SampleOutsideDomain,
  ComparabilityFailure,
  NonIntegrable,
  SingularPoint,
  BudgetExceeded,
  MonotonicityRequired,
  OracleFailure,
  InsufficientSpan,
  NonPositiveValue,
  IoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string module, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorCode code_;
  std::string module_;
};

// Accepts "p/q", integers and decimal literals ("0.25", "-1e-3").
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);
double to_double(const Rational& r);
long double to_long_double(const Rational& r);
// Best continued-fraction approximation within tol; used for real-valued JSON exponents.
Rational rationalize(double value, double tol = 1e-12);
Integer lcm_of_denominators(const Rational& a, const Integer& acc);

std::string format_real(const Real& v, int digits = 30);
Real parse_real(std::string_view text);

inline Real to_real(const Rational& r) {
  return Real(boost::multiprecision::numerator(r)) / Real(boost::multiprecision::denominator(r));
}

}  // namespace oscdecay
