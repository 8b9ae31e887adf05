#pragma once

#include "oscdecay/exponents.hpp"
#include "oscdecay/numerics.hpp"

#include <array>
#include <optional>
#include <utility>
#include <vector>

namespace oscdecay {

// Decay: samples are (lambda, |T|). Growth: samples are (epsilon, measure), fitted in lambda = 1/epsilon.
enum class FitDirection { Decay, Growth };

struct FitCandidate {
  double delta = 0;
  int d = 0;
  double C = 0;
  double rms = 0;
};

// log v = log C - delta log lambda + d log log lambda, d chosen by the smaller rms residual.
struct DecayFit {
  double delta_fit = 0;
  int d_fit = 0;
  double C = 0;
  double rms_residual = 0;
  std::pair<double, double> lambda_range;  // abscissae as given
  std::optional<FitCandidate> alternative;  // the other d, when its residual is within 2x
  std::array<FitCandidate, 2> candidates;   // indexed by d
};

DecayFit fit_decay(const std::vector<std::pair<double, double>>& samples, FitDirection dir);

struct ScanPoint {
  LambdaTriple lambda;
  QuadResult result;
  double ratio = 0;  // |T| / envelope(lambda1)
};

struct UniformityReport {
  double C_hat = 0;
  LambdaTriple argmax;
  std::vector<double> lambda1;
  std::vector<double> ratio_max;   // max over the (lambda2, lambda3) grid, per lambda1
  std::vector<double> running_max;
  double top_decade_variation = 1;  // running max at the top over running max a decade below
  bool monotone_growth = false;     // ratio_max strictly increasing over the top decade
  bool pass = false;
  std::vector<ScanPoint> points;
};

// (lambda2, lambda3) = (m2, m3) sqrt(lambda1) for m2, m3 in `multipliers`.
UniformityReport uniformity_scan(const PhasePoly& p, const DensitySpec& ds, const BoundEnvelope& env,
                                 const std::vector<double>& lambda1_ladder, const std::vector<double>& multipliers,
                                 const QuadConfig& cfg = {});

}  // namespace oscdecay
