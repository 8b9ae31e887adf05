#pragma once

#include "oscdecay/core.hpp"
#include "oscdecay/phase_poly.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace oscdecay {

// One of the eight sectors 0 < y < b x. Sector coordinates (x, y) map to the original
// plane through (u, v) = swap ? (y, x) : (x, y), X = fx*u, Y = fy*v.
struct OctantMap {
  int index = 0;  // 2*quadrant + swap, quadrants ordered (+,+), (-,+), (-,-), (+,-)
  bool flip_x = false;
  bool flip_y = false;
  bool swap = false;
  Rational slope_pos;  // m+ > 0, slicing line in quadrants I and III
  Rational slope_neg;  // m- < 0, slicing line in quadrants II and IV
  Rational b;          // sector bound
  double pos = 0, neg = 0;  // slopes as doubles, for point location

  std::pair<double, double> to_original(double x, double y) const;
  // Sector coordinates when (X, Y) belongs to this octant (slicing lines go to the non-swapped side).
  std::optional<std::pair<double, double>> to_sector(double X, double Y) const;
};

// Index of the octant containing (X, Y), consistent with OctantMap::to_sector.
int octant_of(double X, double Y, double slope_pos, double slope_neg);
inline int octant_of(double X, double Y, const Rational& slope_pos, const Rational& slope_neg) {
  return octant_of(X, Y, to_double(slope_pos), to_double(slope_neg));
}

std::vector<std::pair<OctantMap, PhasePoly>> make_octants(const PhasePoly& p);

}  // namespace oscdecay
