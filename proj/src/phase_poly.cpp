#include "oscdecay/phase_poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace oscdecay {

PhasePoly::PhasePoly(const std::vector<std::pair<Monomial, Rational>>& terms) {
  for (const auto& [m, c] : terms) {
    if (m.i < 0 || m.j < 0) throw Error(ErrorCode::InvalidArgument, "phase-core", "negative power in phase term");
    terms_[m] += c;
  }
  std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
  if (terms_.empty()) throw Error(ErrorCode::EmptyPolynomial, "phase-core", "phase has no nonzero terms");
  if (terms_.count(Monomial{0, 0}))
    throw Error(ErrorCode::InvalidArgument, "phase-core", "phase must vanish at the origin");
  order_ = std::numeric_limits<int>::max();
  for (const auto& [m, c] : terms_) order_ = std::min(order_, m.i + m.j);
}

int PhasePoly::degree() const noexcept {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.i + m.j);
  return d;
}

Rational PhasePoly::coefficient(int i, int j) const {
  auto it = terms_.find(Monomial{i, j});
  return it == terms_.end() ? Rational(0) : it->second;
}

PhasePoly PhasePoly::scaled(const Rational& c) const {
  std::vector<std::pair<Monomial, Rational>> out;
  for (const auto& [m, v] : terms_) out.emplace_back(m, v * c);
  return PhasePoly(out);
}

PhasePoly PhasePoly::transformed(bool flip_x, bool flip_y, bool swap) const {
  std::vector<std::pair<Monomial, Rational>> out;
  for (const auto& [m, v] : terms_) {
    Rational c = v;
    if (flip_x && (m.i % 2)) c = -c;
    if (flip_y && (m.j % 2)) c = -c;
    out.emplace_back(swap ? Monomial{m.j, m.i} : m, c);
  }
  return PhasePoly(out);
}

Rational PhasePoly::form_value(const Rational& x, const Rational& y) const {
  Rational s = 0;
  for (const auto& [m, v] : terms_) {
    if (m.i + m.j != order_) continue;
    Rational t = v;
    for (int k = 0; k < m.i; ++k) t *= x;
    for (int k = 0; k < m.j; ++k) t *= y;
    s += t;
  }
  return s;
}

double PhasePoly::value(double x, double y) const {
  double s = 0;
  for (const auto& [m, v] : terms_) s += to_double(v) * std::pow(x, m.i) * std::pow(y, m.j);
  return s;
}

std::string PhasePoly::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, v] : terms_) {
    if (!first) os << (v < 0 ? " - " : " + ");
    else if (v < 0) os << "-";
    first = false;
    Rational a = v < 0 ? Rational(-v) : v;
    bool unit = a == 1;
    if (!unit) os << format_rational(a);
    if (m.i) os << (unit ? "" : " ") << "x" << (m.i > 1 ? "^" + std::to_string(m.i) : "");
    if (m.j) os << ((unit && !m.i) ? "" : " ") << "y" << (m.j > 1 ? "^" + std::to_string(m.j) : "");
  }
  return os.str();
}

std::pair<Monomial, Rational> parse_term(std::string_view text) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::ParseError, "phase-core", "bad term '" + std::string(text) + "': " + why);
  };
  std::istringstream is{std::string(text)};
  std::string tok;
  Rational c = 1;
  Monomial m;
  bool seen_coef = false, seen_var = false;
  while (is >> tok) {
    std::string_view t = tok;
    // Tolerate "*" separators.
    if (t == "*") continue;
    if (!t.empty() && t.back() == '*') t.remove_suffix(1);
    char head = t.empty() ? '\0' : t.front();
    bool sign_var = (head == '-' || head == '+') && t.size() > 1 && (t[1] == 'x' || t[1] == 'y');
    if (head == 'x' || head == 'y' || sign_var) {
      if (sign_var) {
        if (head == '-') c = -c;
        t.remove_prefix(1);
        head = t.front();
      }
      int power = 1;
      if (t.size() > 1) {
        if (t[1] != '^' || t.size() < 3) fail("expected ^ after variable");
        std::string p(t.substr(2));
        if (!std::all_of(p.begin(), p.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
          fail("power must be a nonnegative integer");
        power = std::stoi(p);
      }
      (head == 'x' ? m.i : m.j) += power;
      seen_var = true;
    } else {
      if (seen_coef || seen_var) fail("coefficient must come first");
      c = parse_rational(t);
      seen_coef = true;
    }
  }
  if (!seen_coef && !seen_var) fail("empty term");
  return {m, c};
}

}  // namespace oscdecay
