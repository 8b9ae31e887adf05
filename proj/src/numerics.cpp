#include "oscdecay/numerics.hpp"

#include "oscdecay/exponents.hpp"
#include "oscdecay/roots.hpp"
#include "oscdecay/util.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <optional>
#include <variant>

namespace oscdecay {

using cplx = std::complex<double>;

void QuadConfig::validate() const {
  if (dyadic_depth < 4) throw Error(ErrorCode::InvalidArgument, "numerics", "dyadic_depth must be >= 4");
  if (per_cell_rule != 16 && per_cell_rule != 20 && per_cell_rule != 24 && per_cell_rule != 30)
    throw Error(ErrorCode::InvalidArgument, "numerics", "per_cell_rule must be 16, 20, 24 or 30");
  if (!(rel_tol > 0) || !(abs_tol > 0)) throw Error(ErrorCode::InvalidArgument, "numerics", "tolerances must be positive");
  if (max_evals == 0) throw Error(ErrorCode::InvalidArgument, "numerics", "max_evals must be positive");
}

void require_integrable(const PhasePoly& p, const DensitySpec& ds) {
  ds.validate();
  const auto rep = critical_exponent_report(p, ds);
  if (const auto* dv = std::get_if<Divergent>(&rep.result)) throw Error(ErrorCode::NonIntegrable, "numerics", dv->reason);
  if (ds.alpha <= -1)
    for (const auto& w : rep.decomposition.wedges)
      if (w.beta >= 1)
        throw Error(ErrorCode::NonIntegrable, "numerics", "|S|^alpha with alpha <= -1 across a zero curve of S");
}

namespace {

// S along the ray (rho cos t, rho sin t): coefficients by total degree.
class RayPoly {
 public:
  explicit RayPoly(const PhasePoly& p) {
    for (const auto& [m, c] : p.terms()) {
      const int k = m.i + m.j;
      if (static_cast<int>(by_degree_.size()) <= k) by_degree_.resize(k + 1);
      by_degree_[k].push_back({m.i, m.j, to_double(c), Real(c)});
    }
  }

  std::vector<long double> at(double theta) const {
    const long double c = std::cos(static_cast<long double>(theta)), s = std::sin(static_cast<long double>(theta));
    std::vector<long double> out(by_degree_.size(), 0.0L);
    std::optional<std::pair<Real, Real>> exact;
    for (std::size_t k = 0; k < by_degree_.size(); ++k) {
      long double mag = 0;
      for (const auto& t : by_degree_[k]) {
        const long double v = t.c * std::pow(c, t.i) * std::pow(s, t.j);
        out[k] += v;
        mag += std::fabs(v);
      }
      // Near a tangent direction of the zero set the leading coefficients cancel; redo them at 50 digits.
      if (std::fabs(out[k]) < 1e-8L * mag) {
        if (!exact) exact.emplace(cos(Real(theta)), sin(Real(theta)));
        Real v = 0;
        for (const auto& t : by_degree_[k]) v += t.exact * pow(exact->first, t.i) * pow(exact->second, t.j);
        out[k] = v.convert_to<long double>();
      }
    }
    return out;
  }

 private:
  struct Term {
    int i, j;
    double c;
    Real exact;
  };
  std::vector<std::vector<Term>> by_degree_;
};

long double horner(const std::vector<long double>& c, long double x) {
  long double v = 0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
  return v;
}

std::vector<long double> derivative(const std::vector<long double>& c) {
  std::vector<long double> d(c.size() > 1 ? c.size() - 1 : 1, 0.0L);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * static_cast<long double>(k);
  return d;
}

// Coefficients of c(x0 + t) in t.
std::vector<long double> taylor_shift(std::vector<long double> c, long double x0) {
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = n - 1; k > i; --k) c[k - 1] += x0 * c[k];
  return c;
}

// Zeros of S on the ray: the origin is excluded by dividing out rho^o.
std::vector<long double> ray_zeros(const std::vector<long double>& s, long double hi) {
  std::size_t o = 0;
  while (o < s.size() && s[o] == 0) ++o;
  std::vector<long double> q(s.begin() + static_cast<std::ptrdiff_t>(std::min(o, s.size())), s.end());
  return real_roots_in(q, 0, hi);
}

// Singular endpoints: S is evaluated from a Taylor expansion there, so |S|^alpha keeps its relative accuracy.
struct Anchor {
  bool active = false;
  std::vector<long double> coef;
};

Anchor anchor_at(const std::vector<long double>& s, long double x0, bool active) {
  Anchor a;
  a.active = active;
  if (!active) return a;
  if (x0 == 0) {
    a.coef = s;
    return a;
  }
  a.coef = taylor_shift(s, x0);
  long double scale = 0;
  for (std::size_t k = 0; k < s.size(); ++k) scale += std::fabs(s[k]) * std::pow(std::fabs(x0), static_cast<long double>(k));
  if (std::fabs(a.coef[0]) <= 1e-14L * scale) a.coef[0] = 0;
  return a;
}

template <int N>
struct Rule {
  static const auto& x() { return boost::math::quadrature::gauss<double, N>::abscissa(); }
  static const auto& w() { return boost::math::quadrature::gauss<double, N>::weights(); }
};

// Gauss-Legendre on [a, b] of f(rho, S(rho)).
template <int N, class F>
cplx gauss_cell(F&& f, double a, double b, std::size_t& evals) {
  const double h = (b - a) / 2, m = (a + b) / 2;
  const auto& x = Rule<N>::x();
  const auto& w = Rule<N>::w();
  cplx s = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == 0) {
      s += w[k] * f(m);
      ++evals;
      continue;
    }
    s += w[k] * (f(m - h * x[k]) + f(m + h * x[k]));
    evals += 2;
  }
  return s * h;
}

template <class F>
cplx gauss_pair(int order, F&& f, double a, double b, std::size_t& evals, double& err) {
  cplx hi, lo;
  switch (order) {
    case 16: hi = gauss_cell<15>(f, a, b, evals); lo = gauss_cell<10>(f, a, b, evals); break;
    case 20: hi = gauss_cell<20>(f, a, b, evals); lo = gauss_cell<15>(f, a, b, evals); break;
    case 24: hi = gauss_cell<25>(f, a, b, evals); lo = gauss_cell<20>(f, a, b, evals); break;
    default: hi = gauss_cell<30>(f, a, b, evals); lo = gauss_cell<25>(f, a, b, evals); break;
  }
  err = std::abs(hi - lo);
  return hi;
}

struct RayResult {
  cplx value;
  double error = 0;
  std::size_t evals = 0;
};

class Integrand {
 public:
  Integrand(const PhasePoly& p, const DensitySpec& ds, const LambdaTriple& lam, const QuadConfig& cfg)
      : ray_(p), ds_(ds), lam_(lam), cfg_(cfg), alpha_(ds.alpha_d()), beta_(ds.beta_d()) {}

  RayResult ray(double theta) const {
    RayResult out;
    const auto s = ray_.at(theta);
    const long double r = ds_.r;
    const long double L = lam_.l2 * std::cos(theta) + lam_.l3 * std::sin(theta);
    auto phase_poly = s;
    for (auto& c : phase_poly) c *= lam_.l1;
    if (phase_poly.size() < 2) phase_poly.resize(2, 0.0L);
    phase_poly[1] += L;
    const auto dphase = derivative(phase_poly);

    std::vector<long double> zeros = ray_zeros(s, r);
    std::vector<long double> cuts{0, r};
    cuts.insert(cuts.end(), zeros.begin(), zeros.end());
    for (long double c : real_roots_in(dphase, 0, r)) cuts.push_back(c);
    // Table kinks: in rho for K, on the level sets |S| = knot for g.
    if (ds_.k_model == KModel::Table)
      for (double kn : ds_.k_table.knots)
        if (kn > 0 && kn < r) cuts.push_back(kn);
    if (ds_.g_model == GModel::Table)
      for (double kn : ds_.g_table.knots)
        for (int sg : {-1, 1}) {
          if (!(kn > 0)) continue;
          auto q = s;
          q[0] -= sg * kn;
          for (long double c : real_roots_in(q, 0, r)) cuts.push_back(c);
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto is_zero = [&](long double x) {
      return std::binary_search(zeros.begin(), zeros.end(), x);
    };
    const bool origin_singular = alpha_ != 0 || beta_ != 0 || ds_.g_model == GModel::Table;
    const double max_len = ds_.r / 8;

    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const long double a = cuts[k], b = cuts[k + 1];
      const long double pa = horner(phase_poly, a), pb = horner(phase_poly, b);
      const long double dp = pb - pa;
      const int by_phase = static_cast<int>(std::ceil(std::fabs(dp) / (4 * M_PI)));
      const int by_len = static_cast<int>(std::ceil((b - a) / max_len));
      const int n = std::max({1, by_phase, by_len});
      // Cell boundaries at equal phase steps (phase is monotone between cuts), then at equal lengths.
      std::vector<long double> edges{a};
      for (int j = 1; j < n; ++j) {
        long double target = pa + dp * j / n, lo = edges.back(), hi = b;
        long double x = lo + (hi - lo) / (n - j + 1);
        for (int it = 0; it < 100; ++it) {
          const long double f = horner(phase_poly, x) - target;
          if ((f < 0) == (dp > 0)) lo = x;
          else hi = x;
          const long double d = horner(dphase, x);
          long double nx = d != 0 ? x - f / d : lo + (hi - lo) / 2;
          if (!(nx > lo && nx < hi)) nx = lo + (hi - lo) / 2;
          if (std::fabs(nx - x) <= 1e-18L * std::max(1.0L, std::fabs(x))) {
            x = nx;
            break;
          }
          x = nx;
        }
        if (by_phase <= 1) x = a + (b - a) * j / n;
        edges.push_back(x);
      }
      edges.push_back(b);
      for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
        const long double ca = edges[j], cb = edges[j + 1];
        const bool sing_a = (ca == a) && ((a == 0 && origin_singular) || (a != 0 && alpha_ != 0 && is_zero(a)));
        const bool sing_b = (cb == b) && (b != r && alpha_ != 0 && is_zero(b));
        double err = 0;
        out.value += cell(s, phase_poly, ca, cb, sing_a, sing_b, out.evals, err);
        out.error += err;
      }
    }
    return out;
  }

 private:
  double amplitude(long double rho, long double sv) const {
    const double as = std::fabs(static_cast<double>(sv));
    const double rr = static_cast<double>(rho);
    double v = ds_.k_multiplier(rr);
    if (v == 0) return 0;
    if (alpha_ != 0) {
      if (as == 0) return 0;  // measure zero; only reached at exact zeros
      v *= std::pow(as, alpha_);
    }
    if (ds_.g_model == GModel::Table) v *= ds_.g_multiplier(as);
    v *= beta_ != 0 ? std::pow(rr, beta_ + 1) : rr;
    return v;
  }

  cplx cell(const std::vector<long double>& s, const std::vector<long double>& phase, long double a, long double b,
            bool sing_a, bool sing_b, std::size_t& evals, double& err) const {
    auto at = [&](long double rho, long double sv) {
      const double ph = static_cast<double>(horner(phase, rho));
      return amplitude(rho, sv) * cplx(std::cos(ph), std::sin(ph));
    };
    if (!sing_a && !sing_b) {
      auto f = [&](double rho) { return at(rho, horner(s, rho)); };
      return gauss_pair(cfg_.per_cell_rule, f, static_cast<double>(a), static_cast<double>(b), evals, err);
    }
    const Anchor A = anchor_at(s, a, sing_a), B = anchor_at(s, b, sing_b);
    const long double mid = a + (b - a) / 2;
    std::size_t local = 0;
    // xc: signed distance to the nearer endpoint (negative on the left half).
    auto f = [&](double x, double xc) {
      ++local;
      long double rho = x, sv;
      if (xc < 0 && A.active) {
        rho = a - static_cast<long double>(xc);
        sv = horner(A.coef, rho - a);
      } else if (xc > 0 && B.active) {
        rho = b - static_cast<long double>(xc);
        sv = horner(B.coef, rho - b);
      } else {
        if (xc < 0 && rho < mid) rho = a - static_cast<long double>(xc);
        sv = horner(s, rho);
      }
      return at(rho, sv);
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    double er = 0, ei = 0;
    const double re = ts.integrate([&](double x, double xc) { return f(x, xc).real(); }, static_cast<double>(a),
                                   static_cast<double>(b), 1e-10, &er);
    const double im = ts.integrate([&](double x, double xc) { return f(x, xc).imag(); }, static_cast<double>(a),
                                   static_cast<double>(b), 1e-10, &ei);
    evals += local;
    err = std::hypot(er, ei);
    return {re, im};
  }

  RayPoly ray_;
  const DensitySpec& ds_;
  LambdaTriple lam_;
  const QuadConfig& cfg_;
  double alpha_, beta_;
};

struct Panel {
  double a, b;
  cplx value;
  double error;
  int depth;
};

}  // namespace

QuadResult oscillatory_integral(const PhasePoly& p, const DensitySpec& ds, const LambdaTriple& lambda,
                                const QuadConfig& cfg) {
  cfg.validate();
  require_integrable(p, ds);
  for (double l : {lambda.l1, lambda.l2, lambda.l3})
    if (!std::isfinite(l)) throw Error(ErrorCode::InvalidArgument, "numerics", "lambda must be finite");
  const Integrand integrand(p, ds, lambda, cfg);

  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  const auto& xk = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = boost::math::quadrature::gauss<double, 7>::weights();
  std::atomic<std::size_t> evals{0};

  // G7-K15 on [a, b] in theta; radial errors are carried along with Kronrod weights.
  auto eval_panels = [&](std::vector<Panel>& ps) {
    std::vector<double> th(ps.size() * 15);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const double h = (ps[i].b - ps[i].a) / 2, m = (ps[i].a + ps[i].b) / 2;
      th[i * 15] = m;
      for (std::size_t k = 1; k < 8; ++k) {
        th[i * 15 + 2 * k - 1] = m - h * xk[k];
        th[i * 15 + 2 * k] = m + h * xk[k];
      }
    }
    std::vector<RayResult> rays(th.size());
    parallel_for(th.size(), [&](std::size_t j) {
      rays[j] = integrand.ray(th[j]);
      evals += rays[j].evals;
    });
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const double h = (ps[i].b - ps[i].a) / 2;
      const RayResult* r = &rays[i * 15];
      cplx K = wk[0] * r[0].value, G = wg[0] * r[0].value;
      double radial = wk[0] * r[0].error;
      for (std::size_t k = 1; k < 8; ++k) {
        const cplx pair = r[2 * k - 1].value + r[2 * k].value;
        K += wk[k] * pair;
        if (k % 2 == 0) G += wg[k / 2] * pair;
        radial += wk[k] * (r[2 * k - 1].error + r[2 * k].error);
      }
      K *= h;
      G *= h;
      // QUADPACK's rescaling of |K - G| by the panel's mean absolute deviation.
      const cplx mean = K / (2 * h);
      double asc = wk[0] * std::abs(r[0].value - mean);
      for (std::size_t k = 1; k < 8; ++k)
        asc += wk[k] * (std::abs(r[2 * k - 1].value - mean) + std::abs(r[2 * k].value - mean));
      asc *= h;
      double e = std::abs(K - G);
      if (asc != 0 && e != 0) e = asc * std::min(1.0, std::pow(200 * e / asc, 1.5));
      ps[i].value = K;
      ps[i].error = e + h * radial;
    }
  };

  constexpr int kInitial = 32;
  constexpr std::size_t kBatch = 16;
  std::vector<Panel> panels;
  for (int k = 0; k < kInitial; ++k)
    panels.push_back({2 * M_PI * k / kInitial, 2 * M_PI * (k + 1) / kInitial, 0, 0, 5});
  eval_panels(panels);

  auto total = [&] {
    QuadResult q;
    std::vector<std::size_t> order(panels.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return panels[i].a < panels[j].a; });
    for (std::size_t i : order) {
      q.value += panels[i].value;
      q.error += panels[i].error;
    }
    q.evals = evals.load();
    return q;
  };

  for (;;) {
    QuadResult q = total();
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(q.value));
    if (q.error <= tol) return q;
    if (q.evals >= cfg.max_evals)
      throw BudgetExceededError(q, "evaluation budget exhausted with error " + std::to_string(q.error));
    // Worst panels first; ties go to the smaller angle so the choice never depends on threads.
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < panels.size(); ++i)
      if (panels[i].depth < cfg.dyadic_depth) idx.push_back(i);
    if (idx.empty())
      throw BudgetExceededError(q, "angular refinement reached dyadic_depth with error " + std::to_string(q.error));
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
      if (panels[i].error != panels[j].error) return panels[i].error > panels[j].error;
      return panels[i].a < panels[j].a;
    });
    idx.resize(std::min(idx.size(), kBatch));
    std::vector<Panel> children;
    for (std::size_t i : idx) {
      const Panel& pn = panels[i];
      const double m = (pn.a + pn.b) / 2;
      children.push_back({pn.a, m, 0, 0, pn.depth + 1});
      children.push_back({m, pn.b, 0, 0, pn.depth + 1});
    }
    eval_panels(children);
    std::sort(idx.begin(), idx.end(), std::greater<>());
    for (std::size_t i : idx) panels.erase(panels.begin() + static_cast<std::ptrdiff_t>(i));
    panels.insert(panels.end(), children.begin(), children.end());
  }
}

namespace {

// Exact ray measure of {rho < r, |S| < eps} against |S|^alpha rho^{beta + 1}.
double sublevel_ray(const RayPoly& rp, double theta, double eps, double r, double alpha, double beta) {
  const auto s = rp.at(theta);
  const auto zeros = ray_zeros(s, r);
  std::vector<long double> cuts{0, static_cast<long double>(r)};
  cuts.insert(cuts.end(), zeros.begin(), zeros.end());
  for (int sg : {-1, 1}) {
    auto q = s;
    q[0] -= sg * eps;
    for (long double c : real_roots_in(q, 0, r)) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  boost::math::quadrature::tanh_sinh<double> ts;
  double total = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const long double a = cuts[k], b = cuts[k + 1];
    if (!(std::fabs(horner(s, a + (b - a) / 2)) < eps)) continue;
    const bool za = a == 0 || std::binary_search(zeros.begin(), zeros.end(), a);
    const bool zb = std::binary_search(zeros.begin(), zeros.end(), b);
    const Anchor A = anchor_at(s, a, za), B = anchor_at(s, b, zb);
    auto f = [&](double x, double xc) {
      long double rho = x, sv;
      if (xc < 0) {
        rho = a - static_cast<long double>(xc);
        sv = A.active ? horner(A.coef, rho - a) : horner(s, rho);
      } else {
        rho = b - static_cast<long double>(xc);
        sv = B.active ? horner(B.coef, rho - b) : horner(s, rho);
      }
      const double as = std::fabs(static_cast<double>(sv));
      double v = beta != 0 ? std::pow(static_cast<double>(rho), beta + 1) : static_cast<double>(rho);
      if (alpha != 0) v = as == 0 ? 0.0 : v * std::pow(as, alpha);
      return v;
    };
    total += ts.integrate(f, static_cast<double>(a), static_cast<double>(b), 1e-11);
  }
  return total;
}

}  // namespace

std::vector<double> tangent_directions(const PhasePoly& p) {
  // Real zeros of the leading form on the circle: S_o(cos t, sin t) = cos^o t S_o(1, tan t).
  const int o = p.order();
  std::vector<Real> c(static_cast<std::size_t>(o) + 1);
  for (int j = 0; j <= o; ++j) c[static_cast<std::size_t>(j)] = Real(p.coefficient(o - j, j));
  std::vector<double> out;
  auto add = [&](double t) {
    for (double v : {t, t + M_PI}) out.push_back(v < 0 ? v + 2 * M_PI : v);
  };
  if (c.front() == 0) add(0);
  if (c.back() == 0) add(M_PI / 2);
  bool any = false;
  for (const auto& v : c) any = any || v != 0;
  if (any)
    for (const auto& rt : real_roots(c)) add(std::atan(rt.value.convert_to<double>()));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return b - a < 1e-12; }), out.end());
  return out;
}

namespace {

struct Stratum {
  double a, b;
};

// J angular strata: graded dyadically toward each tangent direction, then the widest are halved
// until the budget is used.
std::vector<Stratum> angular_strata(const std::vector<double>& dirs, std::size_t J) {
  std::vector<Stratum> out;
  const std::size_t m = dirs.size();
  if (m == 0 || J < 2 * m) {
    for (std::size_t j = 0; j < J; ++j)
      out.push_back({2 * M_PI * static_cast<double>(j) / static_cast<double>(J),
                     2 * M_PI * static_cast<double>(j + 1) / static_cast<double>(J)});
    return out;
  }
  const std::size_t per_arc = J / m;
  const int L = static_cast<int>(std::min<std::size_t>(40, (per_arc - 2) / 4));
  for (std::size_t k = 0; k < m; ++k) {
    const double a = dirs[k], b = k + 1 < m ? dirs[k + 1] : dirs[0] + 2 * M_PI;
    const double h = (b - a) / 2;
    std::vector<double> cuts{a, a + h, b};
    for (int l = 1; l <= L; ++l) {
      cuts.push_back(a + std::ldexp(h, -l));
      cuts.push_back(b - std::ldexp(h, -l));
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.push_back({cuts[i], cuts[i + 1]});
  }
  std::sort(out.begin(), out.end(), [](const Stratum& x, const Stratum& y) { return x.a < y.a; });
  while (out.size() < J) {
    std::size_t w = 0;
    for (std::size_t i = 1; i < out.size(); ++i)
      if (out[i].b - out[i].a > out[w].b - out[w].a) w = i;
    const Stratum s = out[w];
    const double mid = (s.a + s.b) / 2;
    out[w] = {s.a, mid};
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(w) + 1, Stratum{mid, s.b});
  }
  return out;
}

}  // namespace

SublevelEstimate sublevel_measure(const PhasePoly& p, const DensitySpec& ds, double eps, double r, std::size_t n,
                                  std::uint64_t seed) {
  if (!(eps > 0 && eps < 0.5)) throw Error(ErrorCode::InvalidArgument, "numerics", "epsilon must lie in (0, 1/2)");
  if (!(r > 0)) throw Error(ErrorCode::InvalidArgument, "numerics", "radius must be positive");
  if (n < 2 || n % 2) throw Error(ErrorCode::InvalidArgument, "numerics", "sample count must be even and >= 2");
  require_integrable(p, ds);
  const RayPoly rp(p);
  const auto strata = angular_strata(tangent_directions(p), n / 2);
  std::vector<double> vals(n);
  const double alpha = ds.alpha_d(), beta = ds.beta_d();
  parallel_for(n, [&](std::size_t k) {
    const Stratum& st = strata[k / 2];
    const double u = counter_uniform(seed, k / 2, k % 2);
    vals[k] = sublevel_ray(rp, st.a + (st.b - st.a) * u, eps, r, alpha, beta);
  });
  double value = 0, var = 0;
  for (std::size_t j = 0; j < strata.size(); ++j) {
    const double w = strata[j].b - strata[j].a;
    value += w * (vals[2 * j] + vals[2 * j + 1]) / 2;
    const double d = vals[2 * j] - vals[2 * j + 1];
    var += w * w * d * d / 4;
  }
  return {value, std::sqrt(var), n, eps};
}

}  // namespace oscdecay
