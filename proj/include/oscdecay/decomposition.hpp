#pragma once

#include "oscdecay/core.hpp"
#include "oscdecay/octants.hpp"
#include "oscdecay/phase_poly.hpp"
#include "oscdecay/puiseux.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace oscdecay {

// Long-double evaluator for a RamifiedPoly, with first x-derivative and any y-derivatives.
class FastPoly {
 public:
  static constexpr int kMaxY = 4;
  // d[l][m] = d^l/dx^l d^m/dy^m P(x, y), l <= 1, m <= kMaxY.
  using Derivs = std::array<std::array<long double, kMaxY + 1>, 2>;

  FastPoly() = default;
  explicit FastPoly(const RamifiedPoly& p);
  long double value(long double x, long double y) const;
  Derivs derivatives(long double x, long double y, int m_max) const;

 private:
  struct Group {
    long double i;
    std::vector<std::pair<int, long double>> terms;  // (j, coefficient)
  };
  std::vector<Group> groups_;
  int max_j_ = 0;
};

// One recursion level: sector y = shift(x) + sign * y_k, with P_k(x, y_k) = S_oct(x, y).
struct LevelContext {
  RamifiedPoly poly;
  FastPoly fast;
  PuiseuxSeries shift;
  int sign = 1;
  int depth = 0;
};

enum class WedgeKind { Vertex, Band, Root };

struct LowerBoundary {
  Rational m;
  Real h;
};

struct WedgeDomain {
  OctantMap octant;
  PuiseuxSeries shift;  // composite shift in sector coordinates
  int sign = 1;
  bool anchored = false;  // shift follows a zero curve; its truncation is not exact
  Rational alpha;
  int beta = 0;
  Real d;
  Rational M;
  Real H;
  std::optional<LowerBoundary> lower;
  double radius = 0;
  double eta = 0.25;

  // Construction data: local coordinate y' relative to the level variable y_k.
  WedgeKind kind = WedgeKind::Vertex;
  std::shared_ptr<const LevelContext> level;
  Real local_coef;        // band: c_a, root: r
  Rational local_gamma;   // exponent of the local shift
  int local_sign = 1;     // root: y_k = branch + s' y'
  Real tau;               // root: half-width of the root neighbourhood

  // Caches the long-double copies used by the evaluators below; call after filling the fields.
  void prepare();

  // Zero of P_k(x, .) inside [(r - tau) x^g, (r + tau) x^g]; root wedges only.
  std::optional<long double> branch(long double x) const;
  long double upper(long double x) const;  // G(x); NaN when the branch is not bracketed
  long double lower_bound(long double x) const;
  // Local y' of a sector point, NaN when undefined.
  long double local_y(long double x, long double y_sector) const;
  // d[l][m] of S o eta at (x, y'); false when the branch cannot be located.
  bool evaluate(long double x, long double y, int m_max, FastPoly::Derivs& out) const;

 private:
  struct Cached {
    long double M = 0, H = 0, m = 0, h = 0, coef = 0, gamma = 0, tau = 0;
  } fast_;
};

struct ComparabilityReport {
  struct Entry {
    int l = 0;
    int m = 0;
    double max_ratio = 0;
  };
  std::vector<Entry> entries;
  double worst_ratio = 0;
  std::size_t samples = 0;
  bool sign_consistent = true;
  bool passes = false;
  std::pair<double, double> worst_point{0, 0};
};

// Samples at radius w.radius. The phase is only used to check it matches the wedge.
ComparabilityReport verify_comparability(const WedgeDomain& w, const PhasePoly& p, std::size_t samples,
                                         std::pair<int, int> derivative_orders, std::uint64_t seed = 1,
                                         bool stop_on_failure = false);

struct DecomposeOptions {
  std::size_t samples = 10000;
  std::pair<int, int> derivative_orders{1, 1};
  int max_depth = 12;
  std::uint64_t seed = 1;
  bool certify = true;  // false skips the radius bisection (structure only)
};

struct Decomposition {
  PhasePoly phase;
  std::vector<WedgeDomain> wedges;
  double coverage_radius = 0;
  double eta = 0.25;
  std::vector<OctantMap> octants;
};

Decomposition decompose(const PhasePoly& p, double eta, double a_max, const DecomposeOptions& opts = {});

struct CoverageReport {
  std::size_t samples = 0;
  double covered_fraction = 0;
  double overlap_fraction = 0;
};

// Index of the first wedge whose closure (guard band included) contains (X, Y).
std::optional<std::size_t> locate(const Decomposition& dec, double X, double Y);
CoverageReport coverage(const Decomposition& dec, std::size_t samples, std::uint64_t seed);

}  // namespace oscdecay
