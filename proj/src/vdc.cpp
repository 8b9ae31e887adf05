#include "oscdecay/vdc.hpp"

#include "oscdecay/roots.hpp"
#include "oscdecay/util.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/interval.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>

namespace oscdecay {

VdcConstants VdcConstants::defaults(int k_max, int l_max) {
  VdcConstants c;
  c.c_k[1] = 3;
  for (int k = 2; k <= k_max; ++k) c.c_k[k] = 5 * std::ldexp(1.0, k - 1) - 2;
  for (int k = 2; k <= k_max; ++k)
    for (int l = 1; l <= l_max; ++l) c.C_kl[{k, l}] = 2 + 2 * c.c_k[1] * k * k * l;
  return c;
}

double VdcConstants::c(int k) const {
  const auto it = c_k.find(k);
  if (it == c_k.end()) throw Error(ErrorCode::InvalidArgument, "vdc", "no constant c_" + std::to_string(k));
  return it->second;
}

double VdcConstants::C(int k, int l) const {
  const auto it = C_kl.find({k, l});
  if (it == C_kl.end())
    throw Error(ErrorCode::InvalidArgument, "vdc", "no constant C_" + std::to_string(k) + std::to_string(l));
  return it->second;
}

void VdcConstants::validate() const {
  for (const auto& [k, v] : c_k)
    if (k < 1 || !(v > 0)) throw Error(ErrorCode::InvalidArgument, "vdc", "constants must be positive");
  for (const auto& [kl, v] : C_kl)
    if (kl.first < 2 || kl.second < 1 || !(v > 0))
      throw Error(ErrorCode::InvalidArgument, "vdc", "constants must be positive");
}

double vdc_bound_1d(int k, double M, double psi_end, double psi_var, bool monotone, const VdcConstants& c) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "vdc", "k must be >= 1");
  if (k == 1 && !monotone)
    throw Error(ErrorCode::MonotonicityRequired, "vdc", "k = 1 needs a monotone first derivative");
  if (!(M > 0)) throw Error(ErrorCode::InvalidArgument, "vdc", "M must be positive");
  if (!(psi_end >= 0) || !(psi_var >= 0)) throw Error(ErrorCode::InvalidArgument, "vdc", "amplitude terms must be >= 0");
  return c.c(k) * std::pow(M, -1.0 / k) * (psi_end + psi_var);
}

double vdc_bound_2d(double M, double N, double l1, double l2, int k, int l, const VdcConstants& c) {
  if (k < 2 || l < 1) throw Error(ErrorCode::InvalidArgument, "vdc", "need k >= 2 and l >= 1");
  if (!(M > 0) || !(N > 0) || !(l1 >= 0) || !(l2 >= 0))
    throw Error(ErrorCode::InvalidArgument, "vdc", "M, N must be positive and lengths non-negative");
  return c.C(k, l) * N * std::sqrt(l1 * l2 / M);
}

namespace {

using cplx = std::complex<double>;
using Interval = boost::numeric::interval<double>;

long double horner(const std::vector<long double>& c, long double x) {
  long double v = 0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
  return v;
}

std::vector<long double> deriv(const std::vector<long double>& c) {
  std::vector<long double> d(c.size() > 1 ? c.size() - 1 : 1, 0.0L);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<long double>(k);
  return d;
}

template <int N>
cplx gl(const std::function<cplx(double)>& f, double a, double b) {
  using G = boost::math::quadrature::gauss<double, N>;
  const double h = (b - a) / 2, m = (a + b) / 2;
  cplx s = 0;
  for (std::size_t k = 0; k < G::abscissa().size(); ++k) {
    const double x = G::abscissa()[k], w = G::weights()[k];
    s += x == 0 ? w * f(m) : w * (f(m - h * x) + f(m + h * x));
  }
  return s * h;
}

// Cells on which the phase moves by at most 2 pi: monotone pieces split at equal phase steps.
std::vector<double> phase_cells(const std::vector<long double>& phase, double a, double b) {
  std::vector<long double> cuts{a, b};
  for (long double r : real_roots_in(deriv(phase), a, b)) cuts.push_back(r);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> out{a};
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const long double u = cuts[k], v = cuts[k + 1], pu = horner(phase, u), dp = horner(phase, v) - pu;
    const long double n = std::max(1.0L, std::ceil(std::fabs(dp) / (2 * M_PI)));
    for (long double j = 1; j < n; ++j) {
      const long double target = pu + dp * j / n;
      long double lo = out.back(), hi = v;
      for (int it = 0; it < 80 && hi - lo > 1e-17L * std::max(1.0L, std::fabs(hi)); ++it) {
        const long double mid = (lo + hi) / 2;
        if ((horner(phase, mid) < target) == (dp > 0)) lo = mid;
        else hi = mid;
      }
      out.push_back(static_cast<double>((lo + hi) / 2));
    }
    out.push_back(static_cast<double>(v));
  }
  return out;
}

struct Osc {
  cplx hi, lo;
};

Osc osc_1d(const std::vector<long double>& phase, const std::function<double(double)>& amp, double a, double b,
           bool both = true) {
  Osc r;
  const auto cells = phase_cells(phase, a, b);
  const std::function<cplx(double)> f = [&](double x) {
    const double ph = static_cast<double>(horner(phase, x));
    return amp(x) * cplx(std::cos(ph), std::sin(ph));
  };
  for (std::size_t k = 0; k + 1 < cells.size(); ++k) {
    if (!(cells[k + 1] > cells[k])) continue;
    r.hi += gl<20>(f, cells[k], cells[k + 1]);
    if (both) r.lo += gl<15>(f, cells[k], cells[k + 1]);
  }
  return r;
}

// Point powers are enclosed by repeated interval products; x^n is monotone in |x| (even n) or in x (odd n).
Interval ipow(const Interval& x, int n) {
  auto point = [n](double v) {
    Interval r(1.0), b(v);
    for (int k = 0; k < n; ++k) r *= b;
    return r;
  };
  if (n == 0) return Interval(1.0);
  if (n % 2) return Interval(point(x.lower()).lower(), point(x.upper()).upper());
  const double lo = boost::numeric::zero_in(x) ? 0.0 : std::min(std::fabs(x.lower()), std::fabs(x.upper()));
  const double hi = std::max(std::fabs(x.lower()), std::fabs(x.upper()));
  return Interval(lo == 0 ? 0.0 : point(lo).lower(), point(hi).upper());
}

// sum c x^i y^j
struct Poly2 {
  struct Term {
    int i, j;
    double c;
  };
  std::vector<Term> terms;

  void merge() {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return std::pair(a.i + a.j, a.i) < std::pair(b.i + b.j, b.i); });
    std::vector<Term> out;
    for (const auto& t : terms) {
      if (!out.empty() && out.back().i == t.i && out.back().j == t.j) out.back().c += t.c;
      else out.push_back(t);
    }
    terms = std::move(out);
  }

  Poly2 dx() const {
    Poly2 out;
    for (const auto& t : terms)
      if (t.i > 0) out.terms.push_back({t.i - 1, t.j, t.c * t.i});
    return out;
  }
  Poly2 dy() const {
    Poly2 out;
    for (const auto& t : terms)
      if (t.j > 0) out.terms.push_back({t.i, t.j - 1, t.c * t.j});
    return out;
  }
  double operator()(double x, double y) const {
    double s = 0;
    for (const auto& t : terms) s += t.c * std::pow(x, t.i) * std::pow(y, t.j);
    return s;
  }
  Interval operator()(const Interval& x, const Interval& y) const {
    Interval s(0.0);
    for (const auto& t : terms) s += Interval(t.c) * ipow(x, t.i) * ipow(y, t.j);
    return s;
  }
  // Coefficients in y at fixed x.
  std::vector<long double> in_y(double x) const {
    std::vector<long double> c;
    for (const auto& t : terms) {
      if (static_cast<int>(c.size()) <= t.j) c.resize(t.j + 1, 0.0L);
      c[t.j] += t.c * std::pow(static_cast<long double>(x), t.i);
    }
    if (c.empty()) c.push_back(0);
    return c;
  }
  std::string str() const {
    std::string s;
    for (const auto& t : terms) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%+.6g x^%d y^%d ", t.c, t.i, t.j);
      s += buf;
    }
    return s;
  }
};

double mignitude(const Interval& v) {
  if (boost::numeric::zero_in(v)) return 0;
  return std::min(std::fabs(v.lower()), std::fabs(v.upper()));
}

// Certified inf |f| and sup |f| over the box, on an n x n grid of sub-boxes.
std::pair<double, double> box_range(const Poly2& f, double x0, double x1, double y0, double y1, int n) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Interval X(x0 + (x1 - x0) * a / n, x0 + (x1 - x0) * (a + 1) / n);
      const Interval Y(y0 + (y1 - y0) * b / n, y0 + (y1 - y0) * (b + 1) / n);
      const Interval v = f(X, Y);
      lo = std::min(lo, mignitude(v));
      hi = std::max(hi, boost::numeric::norm(v));
    }
  return {lo, hi};
}

struct Rng {
  std::uint64_t seed, stream, n = 0;
  double uniform() { return counter_uniform(seed, stream, n++); }
  double symmetric() { return 2 * uniform() - 1; }
};

struct TrialOutcome {
  std::size_t violations = 0;
  double min_headroom = std::numeric_limits<double>::infinity();
  VdcWorstCase worst;
};

void record(TrialOutcome& out, const VdcWorstCase& c) {
  if (c.actual > c.bound) ++out.violations;
  if (c.headroom < out.min_headroom) {
    out.min_headroom = c.headroom;
    out.worst = c;
  }
}

void check_error(double err, double bound) {
  if (err > 1e-6 * bound + 1e-13)
    throw Error(ErrorCode::OracleFailure, "vdc", "reference quadrature error " + std::to_string(err) + " too large");
}

TrialOutcome trial_1d(const VdcOptions& o, std::size_t t, const std::vector<double>& ladder) {
  Rng rng{o.seed, t};
  const int k = o.k_values[t % o.k_values.size()];
  if (o.degree_bound < k) throw Error(ErrorCode::InvalidArgument, "vdc", "degree_bound below k");
  const double a = rng.symmetric() / 2, b = a + 0.5 + 1.5 * rng.uniform();
  // Q of degree in [k, degree_bound] whose k-th derivative keeps a sign on [a, b].
  std::vector<long double> q;
  double M_unit = 0;
  for (int attempt = 0; M_unit <= 0; ++attempt) {
    if (attempt > 1000) throw Error(ErrorCode::OracleFailure, "vdc", "could not draw a certified phase");
    const int deg = k + static_cast<int>(rng.uniform() * (o.degree_bound - k + 1));
    q.assign(static_cast<std::size_t>(deg) + 1, 0.0L);
    for (auto& c : q) c = rng.symmetric();
    Poly2 dk;
    for (int j = k; j <= deg; ++j) {
      double f = 1;
      for (int m = 0; m < k; ++m) f *= j - m;
      dk.terms.push_back({j - k, 0, static_cast<double>(q[static_cast<std::size_t>(j)]) * f});
    }
    M_unit = box_range(dk, a, b, 0, 0, 64).first * (1 - 1e-12);
  }
  // psi = 1 + p1 x + p2 x^2
  const double p1 = rng.symmetric(), p2 = rng.symmetric();
  auto psi = [&](double x) { return 1 + p1 * x + p2 * x * x; };
  std::vector<double> crit{a, b};
  if (p2 != 0 && -p1 / (2 * p2) > a && -p1 / (2 * p2) < b) crit.insert(crit.begin() + 1, -p1 / (2 * p2));
  double var = 0;
  for (std::size_t i = 0; i + 1 < crit.size(); ++i) var += std::fabs(psi(crit[i + 1]) - psi(crit[i]));
  const double end = std::fabs(psi(b));

  TrialOutcome out;
  for (double lambda : ladder) {
    std::vector<long double> phase = q;
    for (auto& c : phase) c *= lambda;
    const Osc r = osc_1d(phase, psi, a, b);
    VdcWorstCase c;
    c.trial = t;
    c.k = k;
    c.lambda = lambda;
    c.M = lambda * M_unit;
    c.bound = vdc_bound_1d(k, c.M, end, var, false, o.constants);
    c.actual = std::abs(r.hi);
    check_error(std::abs(r.hi - r.lo), c.bound);
    c.headroom = c.actual > 0 ? c.bound / c.actual : std::numeric_limits<double>::infinity();
    Poly2 qp;
    for (std::size_t j = 0; j < q.size(); ++j) qp.terms.push_back({static_cast<int>(j), 0, static_cast<double>(q[j])});
    c.phase = qp.str() + "on [" + std::to_string(a) + ", " + std::to_string(b) + "]";
    record(out, c);
  }
  return out;
}

TrialOutcome trial_2d(const VdcOptions& o, std::size_t t, const std::vector<double>& ladder) {
  Rng rng{o.seed ^ 0x2d2d2d2dULL, t};
  const int k = 2, l = 1 + static_cast<int>(t % 2);
  const double l1 = 0.5 + rng.uniform(), l2 = 0.5 + rng.uniform();
  Poly2 Q;
  double M_unit = 0;
  for (int attempt = 0; M_unit <= 0; ++attempt) {
    if (attempt > 1000) throw Error(ErrorCode::OracleFailure, "vdc", "could not draw a certified phase");
    Q.terms.clear();
    const double sa = rng.uniform() < 0.5 ? -1 : 1, sb = rng.uniform() < 0.5 ? -1 : 1;
    Q.terms.push_back({1, 1, sa * (1 + rng.uniform())});
    Q.terms.push_back({0, 2, sb * (0.5 + rng.uniform())});
    Q.terms.push_back({1, 0, rng.symmetric()});
    Q.terms.push_back({0, 1, rng.symmetric()});
    for (int d = 2; d <= o.degree_bound; ++d)
      for (int i = 0; i <= d; ++i) Q.terms.push_back({i, d - i, 0.3 * rng.symmetric() / d});
    Q.merge();
    const double mixed = box_range(Q.dx().dy(), 0, l1, 0, l2, 8).first;
    const double dyy = box_range(Q.dy().dy(), 0, l1, 0, l2, 8).first;
    M_unit = dyy > 0 ? mixed * (1 - 1e-12) : 0;
  }
  Poly2 Psi;
  Psi.terms = {{0, 0, 1}, {1, 0, 0.5 * rng.symmetric()}, {0, 1, 0.5 * rng.symmetric()},
               {1, 1, 0.5 * rng.symmetric()}, {0, 2, 0.5 * rng.symmetric()}};
  const double sup = box_range(Psi, 0, l1, 0, l2, 16).second;
  const double var = l2 * box_range(Psi.dy(), 0, l1, 0, l2, 16).second;
  const double N = std::max(sup, var) * (1 + 1e-12) + 1e-300;
  // l = 2 removes a horizontal band, so vertical sections are two intervals.
  std::vector<std::pair<double, double>> ys{{0, l2}};
  if (l == 2) {
    const double y1 = l2 * (0.3 + 0.2 * rng.uniform()), y2 = l2 * (0.6 + 0.2 * rng.uniform());
    ys = {{0, y1}, {y2, l2}};
  }
  const double dx_sup = box_range(Q.dx(), 0, l1, 0, l2, 8).second;

  TrialOutcome out;
  for (double lambda : ladder) {
    const std::function<cplx(double)> inner = [&](double x) {
      auto ph = Q.in_y(x);
      for (auto& c : ph) c *= lambda;
      const auto amp = Psi.in_y(x);
      cplx s = 0;
      for (const auto& [y0, y1] : ys)
        s += osc_1d(ph, [&](double y) { return static_cast<double>(horner(amp, y)); }, y0, y1, false).hi;
      return s;
    };
    const int nx = 1 + static_cast<int>(std::ceil(lambda * dx_sup * l1 / (2 * M_PI)));
    cplx hi = 0, lo = 0;
    for (int c = 0; c < nx; ++c) {
      hi += gl<20>(inner, l1 * c / nx, l1 * (c + 1) / nx);
      lo += gl<15>(inner, l1 * c / nx, l1 * (c + 1) / nx);
    }
    VdcWorstCase c;
    c.trial = t;
    c.k = k;
    c.l = l;
    c.lambda = lambda;
    c.M = lambda * M_unit;
    c.N = N;
    c.bound = vdc_bound_2d(c.M, N, l1, l2, k, l, o.constants);
    c.actual = std::abs(hi);
    check_error(std::abs(hi - lo), c.bound);
    c.headroom = c.actual > 0 ? c.bound / c.actual : std::numeric_limits<double>::infinity();
    c.phase = Q.str() + "on [0, " + std::to_string(l1) + "] x [0, " + std::to_string(l2) + "]";
    record(out, c);
  }
  return out;
}

}  // namespace

double fresnel_abs(double lambda) {
  return std::abs(osc_1d({0, 0, lambda}, [](double) { return 1.0; }, 0, 1).hi);
}

VdcReport vdc_verify(const VdcOptions& o) {
  if (o.trials < 1) throw Error(ErrorCode::InvalidArgument, "vdc", "trials must be >= 1");
  if (o.dimension != 1 && o.dimension != 2) throw Error(ErrorCode::InvalidArgument, "vdc", "dimension must be 1 or 2");
  if (o.k_values.empty()) throw Error(ErrorCode::InvalidArgument, "vdc", "no k values");
  for (int k : o.k_values)
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "vdc", "random trials use k >= 2");
  o.constants.validate();
  std::vector<double> ladder = o.lambda_ladder;
  if (ladder.empty())
    ladder = o.dimension == 1 ? std::vector<double>{1, 16, 256, 4096, 65536} : std::vector<double>{1, 16, 256};
  for (double l : ladder)
    if (!(l > 0) || !std::isfinite(l)) throw Error(ErrorCode::InvalidArgument, "vdc", "lambda must be positive");

  std::vector<TrialOutcome> res(o.trials);
  parallel_for(o.trials, [&](std::size_t t) {
    res[t] = o.dimension == 1 ? trial_1d(o, t, ladder) : trial_2d(o, t, ladder);
  });
  VdcReport rep;
  rep.dimension = o.dimension;
  rep.trials = o.trials;
  rep.evaluations = o.trials * ladder.size();
  rep.min_headroom = std::numeric_limits<double>::infinity();
  for (const auto& r : res) {
    rep.violations += r.violations;
    if (r.min_headroom < rep.min_headroom) {
      rep.min_headroom = r.min_headroom;
      rep.worst_case = r.worst;
    }
  }
  return rep;
}

}  // namespace oscdecay
