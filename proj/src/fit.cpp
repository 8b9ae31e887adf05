#include "oscdecay/fit.hpp"

#include <algorithm>
#include <cmath>

namespace oscdecay {

namespace {

FitCandidate least_squares(const std::vector<double>& u, const std::vector<double>& y, int d,
                           const std::vector<double>& loglog) {
  // y - d loglog = c - delta u
  const std::size_t n = u.size();
  double su = 0, sz = 0;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = y[i] - d * loglog[i];
    su += u[i];
    sz += z[i];
  }
  const double mu = su / static_cast<double>(n), mz = sz / static_cast<double>(n);
  double suu = 0, suz = 0;
  for (std::size_t i = 0; i < n; ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suz += (u[i] - mu) * (z[i] - mz);
  }
  const double slope = suz / suu;
  const double c = mz - slope * mu;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = z[i] - c - slope * u[i];
    rss += r * r;
  }
  return {-slope, d, std::exp(c), std::sqrt(rss / static_cast<double>(n))};
}

}  // namespace

DecayFit fit_decay(const std::vector<std::pair<double, double>>& samples, FitDirection dir) {
  if (samples.size() < 6) throw Error(ErrorCode::InsufficientSpan, "fit", "need at least 6 ladder points");
  std::vector<double> u, y, ll;
  double lo = INFINITY, hi = -INFINITY, ulo = INFINITY, uhi = -INFINITY;
  for (const auto& [x, v] : samples) {
    if (!(v > 0) || !std::isfinite(v))
      throw Error(ErrorCode::NonPositiveValue, "fit", "sample values must be positive and finite");
    if (!(x > 0) || !std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "fit", "abscissae must be positive");
    const double lambda = dir == FitDirection::Decay ? x : 1 / x;
    if (!(lambda > 1)) throw Error(ErrorCode::InvalidArgument, "fit", "log log lambda needs lambda > 1");
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    const double L = std::log(lambda);
    u.push_back(L);
    y.push_back(std::log(v));
    ll.push_back(std::log(L));
    ulo = std::min(ulo, L);
    uhi = std::max(uhi, L);
  }
  if (uhi - ulo < 2 * std::log(10.0)) throw Error(ErrorCode::InsufficientSpan, "fit", "abscissae span less than 2 decades");

  FitCandidate c0 = least_squares(u, y, 0, ll), c1 = least_squares(u, y, 1, ll);
  // Ties (exact d = 0 data and exact d = 1 data both reach round-off) go to d = 0.
  const bool one = c1.rms < c0.rms;
  const FitCandidate& best = one ? c1 : c0;
  const FitCandidate& other = one ? c0 : c1;
  DecayFit f;
  f.delta_fit = best.delta;
  f.d_fit = best.d;
  f.C = best.C;
  f.rms_residual = best.rms;
  f.lambda_range = {lo, hi};
  if (other.rms < 2 * best.rms) f.alternative = other;
  f.candidates = {c0, c1};
  return f;
}

UniformityReport uniformity_scan(const PhasePoly& p, const DensitySpec& ds, const BoundEnvelope& env,
                                 const std::vector<double>& lambda1_ladder, const std::vector<double>& multipliers,
                                 const QuadConfig& cfg) {
  if (lambda1_ladder.empty() || multipliers.empty())
    throw Error(ErrorCode::InvalidArgument, "fit", "empty ladder or grid");
  std::vector<double> ladder = lambda1_ladder;
  std::sort(ladder.begin(), ladder.end());
  for (double l : ladder)
    if (!(l > 0) || !std::isfinite(l)) throw Error(ErrorCode::InvalidArgument, "fit", "lambda1 must be positive");
  for (double m : multipliers)
    if (!std::isfinite(m)) throw Error(ErrorCode::InvalidArgument, "fit", "grid must be finite");

  UniformityReport rep;
  for (double l1 : ladder) {
    const double s = std::sqrt(l1), e = env.value(l1);
    double best = 0;
    for (double m2 : multipliers)
      for (double m3 : multipliers) {
        ScanPoint pt;
        pt.lambda = {l1, m2 * s, m3 * s};
        pt.result = oscillatory_integral(p, ds, pt.lambda, cfg);
        pt.ratio = std::abs(pt.result.value) / e;
        if (pt.ratio > rep.C_hat || rep.points.empty()) {
          rep.C_hat = pt.ratio;
          rep.argmax = pt.lambda;
        }
        best = std::max(best, pt.ratio);
        rep.points.push_back(pt);
      }
    rep.lambda1.push_back(l1);
    rep.ratio_max.push_back(best);
    rep.running_max.push_back(std::max(best, rep.running_max.empty() ? 0.0 : rep.running_max.back()));
  }

  // Top decade: lambda1 >= lambda_max / 10. The reference is the last point below it (or the first point).
  const double top = ladder.back() / 10;
  std::size_t first_top = 0;
  while (first_top < ladder.size() && ladder[first_top] < top) ++first_top;
  const std::size_t ref = first_top > 0 ? first_top - 1 : 0;
  const double below = rep.running_max[ref];
  rep.top_decade_variation = below > 0 ? rep.running_max.back() / below : (rep.running_max.back() > 0 ? INFINITY : 1);
  if (ladder.size() - first_top >= 3) {
    rep.monotone_growth = true;
    for (std::size_t k = first_top + 1; k < ladder.size(); ++k)
      rep.monotone_growth = rep.monotone_growth && rep.ratio_max[k] > rep.ratio_max[k - 1];
  }
  rep.pass = rep.top_decade_variation <= 2 && !rep.monotone_growth;
  return rep;
}

}  // namespace oscdecay
