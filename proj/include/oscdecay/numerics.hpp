#pragma once

#include "oscdecay/core.hpp"
#include "oscdecay/density.hpp"
#include "oscdecay/phase_poly.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace oscdecay {

struct LambdaTriple {
  double l1 = 0, l2 = 0, l3 = 0;
};

struct QuadConfig {
  int dyadic_depth = 30;    // angular panels are never narrower than 2 pi 2^-depth
  int per_cell_rule = 20;   // Gauss-Legendre order per phase cell: 16, 20, 24 or 30
  double rel_tol = 1e-6;
  double abs_tol = 1e-12;
  std::size_t max_evals = 4'000'000'000;
  std::uint64_t seed = 1;

  void validate() const;
};

struct QuadResult {
  std::complex<double> value;
  double error = 0;
  std::size_t evals = 0;
};

// ErrorCode::BudgetExceeded, with whatever had been integrated so far.
class BudgetExceededError : public Error {
 public:
  BudgetExceededError(QuadResult partial, const std::string& what)
      : Error(ErrorCode::BudgetExceeded, "numerics", what), partial_(partial) {}
  const QuadResult& partial() const noexcept { return partial_; }

 private:
  QuadResult partial_;
};

// T = int e^{i(l1 S + l2 x + l3 y)} g(S) K dx dy over the support rho < ds.r.
QuadResult oscillatory_integral(const PhasePoly& p, const DensitySpec& ds, const LambdaTriple& lambda,
                                const QuadConfig& cfg = {});

struct SublevelEstimate {
  double value = 0;
  double std_error = 0;
  std::size_t n_samples = 0;
  double epsilon = 0;
};

// int over {rho < r, |S| < eps} of |S|^alpha rho^beta. Angles are stratified into n/2 strata with two
// draws each, graded toward the tangent directions of the zero set; every ray is integrated exactly in rho.
SublevelEstimate sublevel_measure(const PhasePoly& p, const DensitySpec& ds, double eps, double r, std::size_t n,
                                  std::uint64_t seed);

// Angles in [0, 2 pi) where the leading homogeneous form of S vanishes.
std::vector<double> tangent_directions(const PhasePoly& p);

// Throws NonIntegrable when |S|^alpha rho^beta is not locally integrable at the origin.
void require_integrable(const PhasePoly& p, const DensitySpec& ds);

}  // namespace oscdecay
