#include "oscdecay/newton.hpp"

#include <algorithm>
#include <map>

namespace oscdecay {

namespace {

// > 0 for a counterclockwise turn o -> a -> b in the (i, j) plane.
Rational cross(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
  return (a.i - o.i) * Rational(b.j - o.j) - Rational(a.j - o.j) * (b.i - o.i);
}

}  // namespace

Hull lower_left_hull(std::vector<HullPoint> points) {
  if (points.empty()) throw Error(ErrorCode::EmptyPolynomial, "phase-core", "no support points");
  // Only the lowest point of each column can be on the hull.
  std::map<Rational, int> lowest;
  for (const auto& p : points) {
    auto [it, fresh] = lowest.emplace(p.i, p.j);
    if (!fresh) it->second = std::min(it->second, p.j);
  }
  std::vector<HullPoint> chain;
  for (const auto& [i, j] : lowest) {
    HullPoint p{i, j};
    while (chain.size() >= 2 && cross(chain[chain.size() - 2], chain.back(), p) <= 0) chain.pop_back();
    chain.push_back(p);
  }
  // Cut at the first point of minimal j; the rest faces the x-axis.
  auto lowest_it = std::min_element(chain.begin(), chain.end(), [](const auto& a, const auto& b) { return a.j < b.j; });
  chain.erase(lowest_it + 1, chain.end());
  std::reverse(chain.begin(), chain.end());

  Hull h;
  h.vertices = std::move(chain);
  for (std::size_t k = 0; k + 1 < h.vertices.size(); ++k) {
    const auto& lo = h.vertices[k];
    const auto& up = h.vertices[k + 1];
    HullEdge e;
    e.lower = k;
    e.upper = k + 1;
    e.slope = Rational(up.j - lo.j) / (up.i - lo.i);
    e.gamma = (lo.i - up.i) / Rational(up.j - lo.j);
    e.weight = lo.i + e.gamma * lo.j;
    h.edges.push_back(e);
  }
  return h;
}

NewtonPolygon newton_polygon(const PhasePoly& p) {
  if (p.empty()) throw Error(ErrorCode::EmptyPolynomial, "phase-core", "phase has no terms");
  std::vector<HullPoint> pts;
  for (const auto& [m, c] : p.terms()) pts.push_back({Rational(m.i), m.j});
  Hull h = lower_left_hull(pts);
  NewtonPolygon out;
  for (const auto& v : h.vertices)
    out.vertices.emplace_back(static_cast<int>(boost::multiprecision::numerator(v.i)), v.j);
  for (const auto& e : h.edges) {
    NewtonEdge ne;
    ne.vertices = {e.lower, e.upper};
    ne.slope = e.slope;
    ne.gamma = e.gamma;
    ne.edge_polynomial.assign(h.vertices[e.upper].j + 1, Rational(0));
    for (const auto& [m, c] : p.terms())
      if (Rational(m.i) + e.gamma * m.j == e.weight) ne.edge_polynomial[m.j] = c;
    out.edges.push_back(std::move(ne));
  }
  return out;
}

}  // namespace oscdecay
