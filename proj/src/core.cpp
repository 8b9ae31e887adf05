#include "oscdecay/core.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace oscdecay {

namespace mp = boost::multiprecision;

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyPolynomial: return "EmptyPolynomial";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::RamificationOverflow: return "RamificationOverflow";
    case ErrorCode::DegenerateForm: return "DegenerateForm";
    case ErrorCode::SampleOutsideDomain: return "SampleOutsideDomain";
    case ErrorCode::ComparabilityFailure: return "ComparabilityFailure";
    case ErrorCode::NonIntegrable: return "NonIntegrable";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::MonotonicityRequired: return "MonotonicityRequired";
    case ErrorCode::OracleFailure: return "OracleFailure";
    case ErrorCode::InsufficientSpan: return "InsufficientSpan";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string module, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      module_(std::move(module)) {}

namespace {

[[noreturn]] void bad_number(std::string_view text) {
  throw Error(ErrorCode::ParseError, "phase-core", "not a rational number: '" + std::string(text) + "'");
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  if (s.empty()) bad_number(whole);
  for (char c : s)
    if (c < '0' || c > '9') bad_number(whole);
  // Leading zeros would select octal in the cpp_int string constructor.
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return Integer(std::string(s));
}

Integer pow10(unsigned n) {
  Integer r = 1;
  for (unsigned k = 0; k < n; ++k) r *= 10;
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad_number(text);
  bool neg = false;
  if (s.front() == '+' || s.front() == '-') {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational r;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(s.substr(0, slash), text);
    Integer den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw Error(ErrorCode::ParseError, "phase-core", "zero denominator in '" + std::string(text) + "'");
    r = Rational(num, den);
  } else {
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view es = s.substr(e + 1);
      bool eneg = false;
      if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
        eneg = es.front() == '-';
        es.remove_prefix(1);
      }
      Integer ev = parse_integer(es, text);
      if (ev > 4000) bad_number(text);
      exp10 = ev.convert_to<long>() * (eneg ? -1 : 1);
      s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
      if (ip.empty() && fp.empty()) bad_number(text);
      digits = std::string(ip) + std::string(fp);
      exp10 -= static_cast<long>(fp.size());
    } else {
      digits = std::string(s);
    }
    Integer mant = parse_integer(digits, text);
    if (exp10 >= 0)
      r = Rational(mant * pow10(static_cast<unsigned>(exp10)));
    else
      r = Rational(mant, pow10(static_cast<unsigned>(-exp10)));
  }
  return neg ? Rational(-r) : r;
}

std::string format_rational(const Rational& r) {
  const Integer& den = mp::denominator(r);
  if (den == 1) return mp::numerator(r).str();
  return mp::numerator(r).str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

long double to_long_double(const Rational& r) {
  return to_real(r).convert_to<long double>();
}

Rational rationalize(double value, double tol) {
  if (!std::isfinite(value)) throw Error(ErrorCode::InvalidArgument, "phase-core", "non-finite exponent");
  // Continued-fraction convergents h/k until |value - h/k| <= tol.
  Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  long double x = value;
  for (int it = 0; it < 64; ++it) {
    long double a = std::floor(x);
    Integer ai(static_cast<long long>(a));
    Integer h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    Rational approx(h1, k1);
    if (std::fabs(to_double(approx) - value) <= tol) return approx;
    long double frac = x - a;
    if (frac == 0) break;
    x = 1 / frac;
  }
  return Rational(h1, k1);
}

Integer lcm_of_denominators(const Rational& a, const Integer& acc) {
  return mp::lcm(acc, Integer(mp::denominator(a)));
}

std::string format_real(const Real& v, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

Real parse_real(std::string_view text) {
  try {
    return Real(std::string(text));
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "phase-core", "not a real number: '" + std::string(text) + "'");
  }
}

}  // namespace oscdecay
