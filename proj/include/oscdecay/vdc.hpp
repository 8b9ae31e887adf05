#pragma once

#include "oscdecay/core.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace oscdecay {

struct VdcConstants {
  std::map<int, double> c_k;                  // 1-D, k-th derivative
  std::map<std::pair<int, int>, double> C_kl;  // 2-D mixed derivative

  // c_1 = 3, c_k = 5 2^{k-1} - 2; C_kl = 2 + 2 c_1 k^2 l.
  static VdcConstants defaults(int k_max = 6, int l_max = 4);
  double c(int k) const;
  double C(int k, int l) const;
  void validate() const;
};

// c_k M^{-1/k} (psi_end + psi_var). k = 1 needs P' monotone.
double vdc_bound_1d(int k, double M, double psi_end, double psi_var, bool monotone = false,
                    const VdcConstants& c = VdcConstants::defaults());

// C_kl N (l1 l2 / M)^{1/2}
double vdc_bound_2d(double M, double N, double l1, double l2, int k, int l,
                    const VdcConstants& c = VdcConstants::defaults());

// |int_0^1 e^{i lambda x^2} dx|, by phase-cell Gauss-Legendre.
double fresnel_abs(double lambda);

struct VdcWorstCase {
  std::size_t trial = 0;
  int k = 0, l = 0;
  double lambda = 0, M = 0, N = 0, bound = 0, actual = 0, headroom = 0;
  std::string phase;
};

struct VdcReport {
  int dimension = 1;
  std::size_t trials = 0;
  std::size_t evaluations = 0;  // trials x ladder
  std::size_t violations = 0;
  double min_headroom = 0;
  VdcWorstCase worst_case;
};

struct VdcOptions {
  int dimension = 1;  // 1: k-th derivative trials, k from `k_values`; 2: mixed-derivative trials with k = 2
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  int degree_bound = 5;
  std::vector<double> lambda_ladder;  // empty: {1, 16, 256, 4096, 65536} in 1-D, {1, 16, 256} in 2-D
  std::vector<int> k_values{2, 3};
  VdcConstants constants = VdcConstants::defaults();
};

// Random polynomial phases and amplitudes with interval-certified M; numeric integrals vs the bounds.
VdcReport vdc_verify(const VdcOptions& opts);

}  // namespace oscdecay
