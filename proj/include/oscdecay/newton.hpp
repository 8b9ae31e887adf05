#pragma once

#include "oscdecay/core.hpp"
#include "oscdecay/phase_poly.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace oscdecay {

// Support point with a possibly fractional x-power (level polynomials are ramified).
struct HullPoint {
  Rational i;
  int j = 0;
};

struct HullEdge {
  std::size_t lower = 0;  // vertex index with the smaller y-power
  std::size_t upper = 0;
  Rational slope;         // dj/di < 0
  Rational gamma;         // y ~ x^gamma balances the edge; gamma = -1/slope
  Rational weight;        // i + gamma*j on the edge
};

// Vertices are ordered by increasing j (x-axis end first); edges join consecutive vertices.
struct Hull {
  std::vector<HullPoint> vertices;
  std::vector<HullEdge> edges;
};

// Lower-left hull of support + first quadrant. Throws EmptyPolynomial on no points.
Hull lower_left_hull(std::vector<HullPoint> points);

struct NewtonEdge {
  std::pair<std::size_t, std::size_t> vertices;  // (lower, upper) indices
  Rational slope;
  Rational gamma;
  std::vector<Rational> edge_polynomial;  // e(1, y) coefficients by power of y
};

struct NewtonPolygon {
  std::vector<std::pair<int, int>> vertices;
  std::vector<NewtonEdge> edges;
};

NewtonPolygon newton_polygon(const PhasePoly& p);

}  // namespace oscdecay
