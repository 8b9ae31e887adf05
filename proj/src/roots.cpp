#include "oscdecay/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oscdecay {

namespace {

using boost::multiprecision::abs;
using boost::multiprecision::cos;
using boost::multiprecision::pow;
using boost::multiprecision::sin;
using boost::multiprecision::sqrt;

struct Cx {
  Real re, im;
};
Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
Cx operator*(const Cx& a, const Cx& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
Cx operator/(const Cx& a, const Cx& b) {
  Real den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
Real norm(const Cx& a) { return sqrt(a.re * a.re + a.im * a.im); }

// p(z) and p'(z).
std::pair<Cx, Cx> horner(const std::vector<Real>& c, const Cx& z) {
  Cx p{c.back(), 0}, dp{0, 0};
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + Cx{c[k], 0};
  }
  return {p, dp};
}

std::vector<Cx> aberth(const std::vector<Real>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  const Real radius = pow(abs(c[0] / c[n]), Real(1) / n);
  const Real pi = boost::math::constants::pi<Real>();
  std::vector<Cx> z(n);
  for (int k = 0; k < n; ++k) {
    Real t = 2 * pi * k / n + Real(0.4);
    z[k] = {radius * cos(t), radius * sin(t)};
  }
  const Real tiny = Real("1e-46");
  for (int it = 0; it < 800; ++it) {
    Real worst = 0;
    for (int k = 0; k < n; ++k) {
      auto [p, dp] = horner(c, z[k]);
      if (p.re == 0 && p.im == 0) continue;
      Cx ratio = p / dp;
      Cx sum{0, 0};
      for (int j = 0; j < n; ++j)
        if (j != k) sum = sum + Cx{1, 0} / (z[k] - z[j]);
      Cx w = ratio / (Cx{1, 0} - ratio * sum);
      z[k] = z[k] - w;
      Real scale = std::max(Real(1), norm(z[k]));
      worst = std::max(worst, norm(w) / scale);
    }
    if (worst < tiny) break;
  }
  return z;
}

}  // namespace

Real poly_derivative_value(const std::vector<Real>& coeffs, int n, const Real& x) {
  Real acc = 0;
  for (std::size_t k = coeffs.size(); k-- > static_cast<std::size_t>(n);) {
    Real f = 1;
    for (int t = 0; t < n; ++t) f *= Real(static_cast<long>(k) - t);
    acc = acc * x + coeffs[k] * f;
  }
  return acc;
}

std::vector<RealRoot> real_roots(std::vector<Real> coeffs, double cluster_tol) {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  std::size_t lead_zero = 0;
  while (lead_zero < coeffs.size() && coeffs[lead_zero] == 0) ++lead_zero;
  coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(lead_zero));
  if (coeffs.size() <= 1) return {};

  std::vector<Cx> z;
  if (coeffs.size() == 2) {
    z.push_back({-coeffs[0] / coeffs[1], 0});
  } else {
    z = aberth(coeffs);
  }

  // Union-find clustering at relative tolerance.
  const std::size_t n = z.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  const Real tol(cluster_tol);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (norm(z[a] - z[b]) <= tol * std::max(norm(z[a]), norm(z[b]))) parent[find(a)] = find(b);

  std::vector<RealRoot> out;
  for (std::size_t a = 0; a < n; ++a) {
    if (find(a) != a) continue;
    Cx center{0, 0};
    int m = 0;
    for (std::size_t b = 0; b < n; ++b)
      if (find(b) == a) {
        center = center + z[b];
        ++m;
      }
    center = {center.re / m, center.im / m};
    if (abs(center.im) > tol * norm(center)) continue;
    // Newton on the (m-1)-th derivative, where the cluster is a simple root.
    Real x = center.re;
    for (int it = 0; it < 80; ++it) {
      Real f = poly_derivative_value(coeffs, m - 1, x);
      Real df = poly_derivative_value(coeffs, m, x);
      if (df == 0) break;
      Real dx = f / df;
      x -= dx;
      if (abs(dx) <= Real("1e-48") * abs(x)) break;
    }
    if (abs(x - center.re) > tol * abs(center.re)) x = center.re;
    out.push_back({x, m});
  }
  std::sort(out.begin(), out.end(), [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
  return out;
}

namespace {

long double horner(const std::vector<long double>& c, long double x) {
  long double v = 0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
  return v;
}

long double magnitude(const std::vector<long double>& c, long double x) {
  long double v = 0;
  const long double ax = std::fabs(x);
  for (std::size_t k = c.size(); k-- > 0;) v = v * ax + std::fabs(c[k]);
  return v;
}

}  // namespace

std::vector<long double> real_roots_in(const std::vector<long double>& coeffs, long double lo, long double hi) {
  std::vector<long double> c = coeffs;
  while (!c.empty() && c.back() == 0) c.pop_back();
  if (c.size() <= 1 || !(hi > lo)) return {};
  if (c.size() == 2) {
    const long double r = -c[0] / c[1];
    return (r > lo && r < hi) ? std::vector<long double>{r} : std::vector<long double>{};
  }
  std::vector<long double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<long double>(k);
  const auto crit = real_roots_in(d, lo, hi);

  std::vector<long double> pts{lo};
  pts.insert(pts.end(), crit.begin(), crit.end());
  pts.push_back(hi);
  std::vector<long double> out;
  auto add = [&](long double r) {
    if (out.empty() || r > out.back()) out.push_back(r);
  };
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    long double a = pts[k], b = pts[k + 1];
    const long double fa = horner(c, a), fb = horner(c, b);
    if (k > 0 && std::fabs(fa) <= 1e-13L * magnitude(c, a)) {
      add(a);  // touching zero at a critical point
      continue;
    }
    if (fa == 0 || fb == 0 || std::signbit(fa) == std::signbit(fb)) continue;
    const bool neg_a = std::signbit(fa);
    for (int it = 0; it < 200; ++it) {
      const long double m = a + (b - a) / 2;
      if (m <= a || m >= b) break;
      if (std::signbit(horner(c, m)) == neg_a) a = m;
      else b = m;
    }
    add(a + (b - a) / 2);
  }
  return out;
}

}  // namespace oscdecay
