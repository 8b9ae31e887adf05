#include "oscdecay/decomposition.hpp"

#include "oscdecay/roots.hpp"
#include "oscdecay/util.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <limits>
#include <map>

namespace oscdecay {

namespace {

long double ld(const Real& r) { return r.convert_to<long double>(); }
long double ld(const Rational& r) { return to_long_double(r); }

constexpr long double kNaN = std::numeric_limits<long double>::quiet_NaN();

long double falling(long double a, int n) {
  long double f = 1;
  for (int k = 0; k < n; ++k) f *= a - k;
  return f;
}

}  // namespace

FastPoly::FastPoly(const RamifiedPoly& p) {
  std::map<Rational, std::size_t> index;
  for (const auto& t : p.terms()) {
    auto [it, fresh] = index.emplace(t.i, groups_.size());
    if (fresh) groups_.push_back({ld(t.i), {}});
    groups_[it->second].terms.emplace_back(t.j, ld(t.c));
    max_j_ = std::max(max_j_, t.j);
  }
}

long double FastPoly::value(long double x, long double y) const {
  long double s = 0;
  for (const auto& g : groups_) {
    long double inner = 0;
    for (const auto& [j, c] : g.terms) inner += c * std::pow(y, j);
    s += inner * (g.i == 0 ? 1.0L : std::pow(x, g.i));
  }
  return s;
}

FastPoly::Derivs FastPoly::derivatives(long double x, long double y, int m_max) const {
  Derivs d{};
  std::vector<long double> ypow(max_j_ + 1, 1.0L);
  for (int k = 1; k <= max_j_; ++k) ypow[k] = ypow[k - 1] * y;
  for (const auto& g : groups_) {
    long double xi = g.i == 0 ? 1.0L : std::pow(x, g.i);
    long double dxi = g.i == 0 ? 0.0L : g.i * xi / x;
    for (const auto& [j, c] : g.terms) {
      for (int m = 0; m <= std::min(j, m_max); ++m) {
        long double f = c * falling(j, m) * ypow[j - m];
        d[0][m] += xi * f;
        d[1][m] += dxi * f;
      }
    }
  }
  return d;
}

void WedgeDomain::prepare() {
  fast_.M = ld(M);
  fast_.H = ld(H);
  fast_.m = lower ? ld(lower->m) : 0;
  fast_.h = lower ? ld(lower->h) : 0;
  fast_.coef = ld(local_coef);
  fast_.gamma = ld(local_gamma);
  fast_.tau = ld(tau);
}

std::optional<long double> WedgeDomain::branch(long double x) const {
  if (kind != WedgeKind::Root) return std::nullopt;
  const long double g = std::pow(x, fast_.gamma);
  long double lo = (fast_.coef - fast_.tau) * g, hi = (fast_.coef + fast_.tau) * g;
  auto f = [&](long double y) { return level->fast.value(x, y); };
  long double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) return std::nullopt;
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi,
                                                  boost::math::tools::eps_tolerance<long double>(62), iters);
  return (a + b) / 2;
}

long double WedgeDomain::upper(long double x) const {
  if (kind != WedgeKind::Root) return fast_.H * std::pow(x, fast_.M);
  auto b = branch(x);
  if (!b) return kNaN;
  const long double g = std::pow(x, fast_.gamma);
  return fast_.tau * g + local_sign * (fast_.coef * g - *b);
}

long double WedgeDomain::lower_bound(long double x) const {
  return lower ? fast_.h * std::pow(x, fast_.m) : 0.0L;
}

long double WedgeDomain::local_y(long double x, long double y_sector) const {
  long double yk = level->sign * (y_sector - level->shift.value(x));
  switch (kind) {
    case WedgeKind::Vertex: return yk;
    case WedgeKind::Band: return yk - fast_.coef * std::pow(x, fast_.gamma);
    case WedgeKind::Root: {
      auto b = branch(x);
      return b ? local_sign * (yk - *b) : kNaN;
    }
  }
  return kNaN;
}

bool WedgeDomain::evaluate(long double x, long double y, int m_max, FastPoly::Derivs& out) const {
  long double yk = y, slope = 0;
  int sp = 1;
  if (kind == WedgeKind::Band) {
    const long double c = fast_.coef, g = fast_.gamma;
    yk = c * std::pow(x, g) + y;
    slope = c * g * std::pow(x, g - 1);
  } else if (kind == WedgeKind::Root) {
    auto b = branch(x);
    if (!b) return false;
    auto db = level->fast.derivatives(x, *b, 1);
    if (db[0][1] == 0) return false;
    slope = -db[1][0] / db[0][1];
    sp = local_sign;
    yk = *b + sp * y;
  }
  const int mm = std::min(m_max + 1, FastPoly::kMaxY);
  auto d = level->fast.derivatives(x, yk, mm);
  out = {};
  long double s = 1;
  for (int m = 0; m + 1 <= mm; ++m) {
    out[0][m] = s * d[0][m];
    out[1][m] = s * (d[1][m] + d[0][m + 1] * slope);
    s *= sp;
  }
  return true;
}

ComparabilityReport verify_comparability(const WedgeDomain& w, const PhasePoly& p, std::size_t samples,
                                         std::pair<int, int> derivative_orders, std::uint64_t seed,
                                         bool stop_on_failure) {
  if (!w.level) throw Error(ErrorCode::InvalidArgument, "resolution", "wedge has no construction context");
  if (p.empty()) throw Error(ErrorCode::EmptyPolynomial, "resolution", "phase has no terms");
  if (samples == 0) throw Error(ErrorCode::InvalidArgument, "resolution", "need at least one sample");
  const long double alpha = ld(w.alpha);
  const int l_max = std::min(derivative_orders.first, std::min(1, static_cast<int>(std::floor(alpha))));
  const int m_max = std::min({derivative_orders.second, w.beta, FastPoly::kMaxY - 1});
  const long double d = ld(w.d), a = w.radius;

  ComparabilityReport rep;
  for (int l = 0; l <= std::max(l_max, 0); ++l)
    for (int m = 0; m <= std::max(m_max, 0); ++m) rep.entries.push_back({l, m, 0.0});
  rep.samples = samples;
  auto fail = [&](double x, double y) {
    rep.worst_ratio = std::numeric_limits<double>::infinity();
    rep.worst_point = {x, y};
    for (auto& e : rep.entries) e.max_ratio = rep.worst_ratio;
  };

  for (std::size_t k = 0; k < samples; ++k) {
    const double u1 = counter_uniform(seed, 0, k), u2 = counter_uniform(seed, 1, k);
    const long double x = (k % 2 == 0) ? a * u1 : a * std::pow(10.0L, -6.0L * u1);
    const long double g = w.lower_bound(x), G = w.upper(x);
    if (!(G > g)) {
      fail(static_cast<double>(x), 0);
      if (stop_on_failure) break;
      continue;
    }
    const long double y = (k % 4 < 2) ? g + (G - g) * u2 : g + (G - g) * std::pow(10.0L, -6.0L * u2);
    if (!(y >= g && y <= G))
      throw Error(ErrorCode::SampleOutsideDomain, "resolution", "sampler left the wedge");
    FastPoly::Derivs D;
    if (!w.evaluate(x, y, m_max, D)) {
      fail(static_cast<double>(x), static_cast<double>(y));
      if (stop_on_failure) break;
      continue;
    }
    if (std::signbit(D[0][0]) != std::signbit(d) || D[0][0] == 0) rep.sign_consistent = false;
    for (auto& e : rep.entries) {
      const long double scale = std::fabs(d) * std::pow(x, alpha - e.l) * std::pow(y, static_cast<long double>(w.beta - e.m));
      const long double model = falling(alpha, e.l) * falling(w.beta, e.m) * d * std::pow(x, alpha - e.l) *
                                std::pow(y, static_cast<long double>(w.beta - e.m));
      const double ratio = static_cast<double>(std::fabs(D[e.l][e.m] - model) / scale);
      if (!(ratio <= e.max_ratio)) e.max_ratio = std::isnan(ratio) ? std::numeric_limits<double>::infinity() : ratio;
      if (e.max_ratio > rep.worst_ratio) {
        rep.worst_ratio = e.max_ratio;
        rep.worst_point = {static_cast<double>(x), static_cast<double>(y)};
      }
    }
    if (stop_on_failure && (rep.worst_ratio > w.eta || !rep.sign_consistent)) break;
  }
  rep.passes = rep.worst_ratio <= w.eta && rep.sign_consistent;
  return rep;
}

namespace {

long double weight_factor(long double i, int j) {
  return std::max({1.0L, std::fabs(i), static_cast<long double>(j), std::fabs(i) * j});
}

struct EdgeData {
  HullEdge edge;
  std::vector<Real> poly;
  std::vector<RealRoot> roots;
  Real c_lo, c_hi;
};

class Builder {
 public:
  Builder(const OctantMap& oct, double eta, int max_depth) : oct_(oct), eta_(eta), max_depth_(max_depth) {}

  void resolve(const std::shared_ptr<const LevelContext>& lvl, const Rational& M, const Real& B);

  std::vector<WedgeDomain> wedges;
  long double a_cap = std::numeric_limits<long double>::infinity();

 private:
  WedgeDomain base(const std::shared_ptr<const LevelContext>& lvl) const {
    WedgeDomain w;
    w.octant = oct_;
    w.shift = lvl->shift;
    w.sign = lvl->sign;
    w.eta = eta_;
    w.level = lvl;
    return w;
  }

  // c_lower x^{g_lower} < c_upper x^{g_upper} with margin 2.
  void cap(const Real& c_upper, const Rational& g_upper, const Real& c_lower, const Rational& g_lower) {
    long double e = ld(Rational(g_lower - g_upper));
    a_cap = std::min(a_cap, std::pow(ld(c_upper) / (2 * ld(c_lower)), 1 / e));
  }

  void add_vertex(const std::shared_ptr<const LevelContext>& lvl, const HullPoint& v, const Rational& M,
                  const Real& H, std::optional<LowerBoundary> lower) {
    WedgeDomain w = base(lvl);
    w.kind = WedgeKind::Vertex;
    w.alpha = v.i;
    w.beta = v.j;
    w.d = lvl->poly.coefficient(v.i, v.j);
    w.M = M;
    w.H = H;
    w.lower = std::move(lower);
    w.prepare();
    wedges.push_back(std::move(w));
  }

  Real lower_cutoff(const EdgeData& e, const Hull& h, const RamifiedPoly& P, const Rational& M, const Real& B) const;
  Real upper_cutoff(const EdgeData& e, const Hull& h, const RamifiedPoly& P) const;
  void process_edge(const std::shared_ptr<const LevelContext>& lvl, const EdgeData& e);
  void cover_band(const std::shared_ptr<const LevelContext>& lvl, const EdgeData& e, const Real& ca, const Real& cb);

  OctantMap oct_;
  double eta_;
  int max_depth_;
};

Real Builder::lower_cutoff(const EdgeData& e, const Hull& h, const RamifiedPoly& P, const Rational& M,
                           const Real& B) const {
  const auto& v = h.vertices[e.edge.lower];
  const long double av = std::fabs(ld(P.coefficient(v.i, v.j)));
  Real c = 1;
  for (const auto& r : e.roots)
    if (r.value > 0) c = std::min(c, Real(r.value / 2));
  if (e.edge.gamma == M) c = std::min(c, Real(B / 2));
  long double cl = ld(c);
  for (int it = 0; it < 400; ++it) {
    long double s = 0;
    for (int j = v.j + 1; j < static_cast<int>(e.poly.size()); ++j) {
      if (e.poly[j] == 0) continue;
      long double i = ld(Rational(e.edge.weight - e.edge.gamma * j));
      s += weight_factor(i, j) * std::fabs(ld(e.poly[j])) * std::pow(cl, j - v.j);
    }
    if (s <= eta_ / 4 * av) break;
    cl /= 2;
  }
  return Real(cl);
}

Real Builder::upper_cutoff(const EdgeData& e, const Hull& h, const RamifiedPoly& P) const {
  const auto& v = h.vertices[e.edge.upper];
  const long double av = std::fabs(ld(P.coefficient(v.i, v.j)));
  long double C = 1;
  for (const auto& r : e.roots)
    if (r.value > 0) C = std::max(C, 2 * ld(r.value));
  for (int it = 0; it < 400; ++it) {
    long double s = 0;
    for (int j = 0; j < v.j; ++j) {
      if (e.poly[j] == 0) continue;
      long double i = ld(Rational(e.edge.weight - e.edge.gamma * j));
      s += weight_factor(i, j) * std::fabs(ld(e.poly[j])) * std::pow(C, j - v.j);
    }
    if (s <= eta_ / 4 * av) break;
    C *= 2;
  }
  return Real(C);
}

void Builder::resolve(const std::shared_ptr<const LevelContext>& lvl, const Rational& M, const Real& B) {
  const RamifiedPoly& P = lvl->poly;
  const Hull h = P.hull();
  std::size_t T = 0;
  while (T < h.edges.size() && h.edges[T].gamma >= M) ++T;
  if (T == 0) {
    add_vertex(lvl, h.vertices[0], M, B, std::nullopt);
    return;
  }
  std::vector<EdgeData> edges(T);
  for (std::size_t t = 0; t < T; ++t) {
    auto& e = edges[t];
    e.edge = h.edges[t];
    e.poly = P.edge_polynomial(e.edge, h);
    e.roots = real_roots(e.poly);
    e.c_lo = lower_cutoff(e, h, P, M, B);
    e.c_hi = e.edge.gamma == M ? B : upper_cutoff(e, h, P);
  }
  // Top to bottom in y: vertex above the shallowest edge, then band/vertex pairs.
  const auto& top = edges[T - 1];
  if (top.edge.gamma > M) {
    add_vertex(lvl, h.vertices[top.edge.upper], M, B, LowerBoundary{top.edge.gamma, top.c_hi});
    cap(B, M, top.c_hi, top.edge.gamma);
  }
  for (std::size_t t = T; t-- > 0;) {
    process_edge(lvl, edges[t]);
    std::optional<LowerBoundary> lower;
    if (t > 0) {
      lower = LowerBoundary{edges[t - 1].edge.gamma, edges[t - 1].c_hi};
      cap(edges[t].c_lo, edges[t].edge.gamma, edges[t - 1].c_hi, edges[t - 1].edge.gamma);
    }
    add_vertex(lvl, h.vertices[edges[t].edge.lower], edges[t].edge.gamma, edges[t].c_lo, std::move(lower));
  }
}

void Builder::process_edge(const std::shared_ptr<const LevelContext>& lvl, const EdgeData& e) {
  const Rational& gamma = e.edge.gamma;
  const long double w = ld(e.edge.weight), g = ld(gamma);
  std::vector<const RealRoot*> inside;
  for (const auto& r : e.roots)
    if (r.value > e.c_lo && r.value < e.c_hi) inside.push_back(&r);

  Real cursor = e.c_lo;
  for (const RealRoot* root : inside) {
    const Real& r = root->value;
    Real tau = std::min(Real((r - e.c_lo) / 2), Real((e.c_hi - r) / 2));
    tau = std::min(tau, Real(boost::multiprecision::abs(r) / 2));
    for (const auto& other : e.roots)
      if (&other != root) tau = std::min(tau, Real(boost::multiprecision::abs(other.value - r) / 2));

    if (root->multiplicity == 1) {
      // Taylor coefficients of e at r.
      std::vector<long double> tk(e.poly.size());
      Real fact = 1;
      for (std::size_t k = 1; k < e.poly.size(); ++k) {
        fact *= static_cast<long>(k);
        tk[k] = ld(poly_derivative_value(e.poly, static_cast<int>(k), r) / fact);
      }
      long double t = ld(tau);
      for (int it = 0; it < 200; ++it) {
        long double s = 0;
        for (std::size_t k = 2; k < tk.size(); ++k) s += k * std::fabs(tk[k]) * std::pow(t, static_cast<long double>(k - 1));
        if (std::max(1.0L, w + g) * s <= eta_ / 4 * std::fabs(tk[1])) break;
        t /= 2;
      }
      tau = Real(t);
      cover_band(lvl, e, cursor, r - tau);

      RamifiedPoly shifted = shift_substitute(lvl->poly, PuiseuxSeries({{gamma, r}}, std::nullopt), 1);
      std::optional<Rational> next;
      if (!shifted.empty()) {
        Hull hs = shifted.hull();
        if (hs.vertices.front().j == 0 && !hs.edges.empty()) next = hs.edges.front().gamma;
      }
      PuiseuxSeries anchored = lvl->shift.plus_term(gamma, lvl->sign * r).with_truncation(next);
      for (int sp : {1, -1}) {
        WedgeDomain wd = base(lvl);
        wd.kind = WedgeKind::Root;
        wd.shift = anchored;
        wd.sign = lvl->sign * sp;
        wd.anchored = true;
        wd.alpha = Rational(e.edge.weight - gamma);
        wd.beta = 1;
        wd.d = sp * poly_derivative_value(e.poly, 1, r);
        wd.M = gamma;
        wd.H = tau;
        wd.local_coef = r;
        wd.local_gamma = gamma;
        wd.local_sign = sp;
        wd.tau = tau;
        wd.prepare();
        wedges.push_back(std::move(wd));
      }
    } else {
      cover_band(lvl, e, cursor, r - tau);
      if (lvl->depth + 1 > max_depth_)
        throw Error(ErrorCode::DepthExceeded, "resolution",
                    "root cluster did not separate within " + std::to_string(max_depth_) + " steps");
      for (int sp : {1, -1}) {
        auto child = std::make_shared<LevelContext>();
        child->poly = shift_substitute(lvl->poly, PuiseuxSeries({{gamma, r}}, std::nullopt), sp);
        child->fast = FastPoly(child->poly);
        child->shift = lvl->shift.plus_term(gamma, lvl->sign * r);
        child->sign = lvl->sign * sp;
        child->depth = lvl->depth + 1;
        resolve(child, gamma, tau);
      }
    }
    cursor = r + tau;
  }
  cover_band(lvl, e, cursor, e.c_hi);
}

void Builder::cover_band(const std::shared_ptr<const LevelContext>& lvl, const EdgeData& e, const Real& ca,
                         const Real& cb) {
  const long double w = ld(e.edge.weight), g = ld(e.edge.gamma);
  std::vector<long double> p(e.poly.size());
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = ld(e.poly[k]);
  auto eval = [&](long double c, long double& dv) {
    long double v = 0;
    dv = 0;
    for (std::size_t k = p.size(); k-- > 0;) {
      dv = dv * c + v;
      v = v * c + p[k];
    }
    return v;
  };
  // Constant-sign band [a, b] with model constant d. As x -> 0 the (0,0) ratio tends to |e - d|/|d| and the
  // (1,0) ratio to |w(e - d) - g t e'|/|d|; half of eta is left for the higher-order terms.
  auto check = [&](long double a, long double b, long double& d) {
    constexpr int n = 32;
    long double vals[n + 1], ders[n + 1];
    long double lo = std::numeric_limits<long double>::infinity(), hi = -lo;
    for (int k = 0; k <= n; ++k) {
      long double c = a + (b - a) * k / n;
      vals[k] = eval(c, ders[k]);
      lo = std::min(lo, vals[k]);
      hi = std::max(hi, vals[k]);
    }
    if (lo <= 0 && hi >= 0) return false;
    d = (lo + hi) / 2;
    for (int k = 0; k <= n; ++k) {
      long double t = (b - a) * k / n;
      const long double lim = eta_ / 2 * std::fabs(d);
      if (std::fabs(vals[k] - d) > lim) return false;
      if (w >= 1 && std::fabs(w * (vals[k] - d) - g * t * ders[k]) > lim) return false;
    }
    return true;
  };

  long double a = ld(ca);
  const long double end = ld(cb);
  for (int guard = 0; a < end; ++guard) {
    if (guard > 100000) throw Error(ErrorCode::ComparabilityFailure, "resolution", "band subdivision did not terminate");
    long double d = 0, b = end;
    if (!check(a, b, d)) {
      long double good = a, bad = b;
      for (int it = 0; it < 48; ++it) {
        long double mid = (good + bad) / 2, dm;
        if (check(a, mid, dm)) good = mid;
        else bad = mid;
      }
      if (good <= a) throw Error(ErrorCode::ComparabilityFailure, "resolution", "band wedge collapsed");
      b = good;
      check(a, b, d);
    }
    WedgeDomain wd = base(lvl);
    wd.kind = WedgeKind::Band;
    Real ra = guard == 0 ? ca : Real(a);
    Real rb = b == end ? cb : Real(b);
    wd.shift = lvl->shift.plus_term(e.edge.gamma, lvl->sign * ra);
    wd.alpha = e.edge.weight;
    wd.beta = 0;
    wd.d = Real(d);
    wd.M = e.edge.gamma;
    wd.H = rb - ra;
    wd.local_coef = ra;
    wd.local_gamma = e.edge.gamma;
    wd.prepare();
    wedges.push_back(std::move(wd));
    a = b;
  }
}

std::vector<WedgeDomain> build_octant(const OctantMap& oct, const PhasePoly& poly, double eta, int max_depth,
                                      long double& a_cap) {
  auto root = std::make_shared<LevelContext>();
  root->poly = RamifiedPoly::from_phase(poly);
  root->fast = FastPoly(root->poly);
  Builder b(oct, eta, max_depth);
  b.resolve(root, Rational(1), to_real(oct.b));
  a_cap = b.a_cap;
  return std::move(b.wedges);
}

bool all_pass(const std::vector<WedgeDomain>& ws, const PhasePoly& p, const DecomposeOptions& opts, std::uint64_t salt,
              bool early) {
  // A cheap screen first: most rejected radii fail within a few hundred samples.
  const std::size_t screen = std::min<std::size_t>(opts.samples, 256);
  for (std::size_t n : {screen, opts.samples}) {
    for (std::size_t k = 0; k < ws.size(); ++k) {
      auto rep = verify_comparability(ws[k], p, n, opts.derivative_orders, counter_hash(opts.seed, salt, k), early);
      if (!rep.passes) return false;
    }
    if (n == opts.samples) break;
  }
  return true;
}

}  // namespace

Decomposition decompose(const PhasePoly& p, double eta, double a_max, const DecomposeOptions& opts) {
  if (!(eta > 0 && eta < 0.5)) throw Error(ErrorCode::InvalidArgument, "resolution", "eta must lie in (0, 1/2)");
  if (!(a_max > 0)) throw Error(ErrorCode::InvalidArgument, "resolution", "a_max must be positive");
  auto octs = make_octants(p);
  std::vector<std::vector<WedgeDomain>> per(octs.size());
  std::vector<long double> radius(octs.size());
  parallel_for(octs.size(), [&](std::size_t o) {
    long double cap = 0;
    per[o] = build_octant(octs[o].first, octs[o].second, eta, opts.max_depth, cap);
    long double a = std::min(static_cast<long double>(a_max), cap);
    if (opts.certify) {
      for (;; a /= 2) {
        if (a < 0x1.0p-60L)
          throw Error(ErrorCode::ComparabilityFailure, "resolution",
                      "no radius certifies octant " + std::to_string(o));
        for (auto& w : per[o]) w.radius = static_cast<double>(a);
        if (all_pass(per[o], p, opts, o, true)) break;
      }
    }
    radius[o] = a;
  });

  Decomposition dec;
  dec.phase = p;
  dec.eta = eta;
  long double a = *std::min_element(radius.begin(), radius.end());
  for (std::size_t o = 0; o < octs.size(); ++o) {
    dec.octants.push_back(octs[o].first);
    for (auto& w : per[o]) dec.wedges.push_back(std::move(w));
  }
  for (;; a /= 2) {
    for (auto& w : dec.wedges) w.radius = static_cast<double>(a);
    if (!opts.certify) break;
    if (a < 0x1.0p-60L) throw Error(ErrorCode::ComparabilityFailure, "resolution", "no common radius certifies");
    bool ok = true;
    for (std::size_t o = 0; o < octs.size() && ok; ++o) {
      std::vector<WedgeDomain> ws;
      for (const auto& w : dec.wedges)
        if (w.octant.index == static_cast<int>(o)) ws.push_back(w);
      ok = radius[o] == a || all_pass(ws, p, opts, o, true);
    }
    if (ok) break;
  }
  dec.coverage_radius = static_cast<double>(a);
  return dec;
}

namespace {

enum class Membership { Outside, Closure, Interior };

Membership classify(const WedgeDomain& w, long double x, long double y) {
  const long double G = w.upper(x), g = w.lower_bound(x);
  if (std::isnan(G)) return Membership::Outside;
  const long double yl = w.local_y(x, y);
  if (std::isnan(yl)) return Membership::Outside;
  const long double guard = 1e-6L * std::max(G, g);
  if (yl > g + guard && yl < G - guard) return Membership::Interior;
  if (yl >= g - guard && yl <= G + guard) return Membership::Closure;
  return Membership::Outside;
}

}  // namespace

std::optional<std::size_t> locate(const Decomposition& dec, double X, double Y) {
  if (dec.octants.empty()) return std::nullopt;
  const auto& o0 = dec.octants.front();
  const int idx = octant_of(X, Y, o0.pos, o0.neg);
  auto sector = dec.octants[idx].to_sector(X, Y);
  if (!sector || sector->first <= 0) return std::nullopt;
  for (std::size_t k = 0; k < dec.wedges.size(); ++k) {
    const auto& w = dec.wedges[k];
    if (w.octant.index != idx) continue;
    if (classify(w, sector->first, sector->second) != Membership::Outside) return k;
  }
  return std::nullopt;
}

CoverageReport coverage(const Decomposition& dec, std::size_t samples, std::uint64_t seed) {
  CoverageReport rep;
  rep.samples = samples;
  if (samples == 0 || dec.octants.empty()) return rep;
  std::vector<std::vector<std::size_t>> by_octant(dec.octants.size());
  for (std::size_t k = 0; k < dec.wedges.size(); ++k) by_octant[dec.wedges[k].octant.index].push_back(k);
  const auto& o0 = dec.octants.front();
  std::size_t covered = 0, overlapping = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double rho = dec.coverage_radius * std::sqrt(counter_uniform(seed, 0, s));
    const double th = 2 * M_PI * counter_uniform(seed, 1, s);
    const double X = rho * std::cos(th), Y = rho * std::sin(th);
    const int idx = octant_of(X, Y, o0.pos, o0.neg);
    auto sector = dec.octants[idx].to_sector(X, Y);
    if (!sector) continue;
    bool any = false;
    int interior = 0;
    for (std::size_t k : by_octant[idx]) {
      auto m = classify(dec.wedges[k], sector->first, sector->second);
      any = any || m != Membership::Outside;
      interior += m == Membership::Interior;
    }
    covered += any;
    overlapping += interior > 1;
  }
  rep.covered_fraction = static_cast<double>(covered) / samples;
  rep.overlap_fraction = static_cast<double>(overlapping) / samples;
  return rep;
}

}  // namespace oscdecay
