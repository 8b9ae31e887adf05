#include "oscdecay/density.hpp"

#include <algorithm>
#include <cmath>

namespace oscdecay {

double Table::operator()(double t) const {
  if (knots.empty()) return 1;
  if (t <= knots.front()) return values.front();
  if (t >= knots.back()) return values.back();
  auto it = std::upper_bound(knots.begin(), knots.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - knots.begin());
  const double u = (t - knots[k - 1]) / (knots[k] - knots[k - 1]);
  return values[k - 1] + u * (values[k] - values[k - 1]);
}

void Table::validate(const char* what) const {
  if (knots.size() != values.size() || knots.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "exponents", std::string(what) + " table needs >= 2 matching knots/values");
  for (std::size_t k = 1; k < knots.size(); ++k)
    if (!(knots[k] > knots[k - 1]))
      throw Error(ErrorCode::InvalidArgument, "exponents", std::string(what) + " table knots must increase");
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "exponents", std::string(what) + " table value not finite");
}

void DensitySpec::validate() const {
  if (!(A > 0)) throw Error(ErrorCode::InvalidArgument, "exponents", "A must be positive");
  if (!(r > 0)) throw Error(ErrorCode::InvalidArgument, "exponents", "support radius must be positive");
  auto bounded = [&](const Table& t, const char* what) {
    t.validate(what);
    for (double v : t.values)
      if (std::fabs(v) > A)
        throw Error(ErrorCode::InvalidArgument, "exponents", std::string(what) + " table exceeds the bound A");
  };
  if (g_model == GModel::Table) bounded(g_table, "g");
  else if (A < 1) throw Error(ErrorCode::InvalidArgument, "exponents", "pure power g needs A >= 1");
  if (k_model == KModel::Table) bounded(k_table, "K");
  else if (A < 1) throw Error(ErrorCode::InvalidArgument, "exponents", "bump K needs A >= 1");
}

double DensitySpec::g_multiplier(double s_abs) const { return g_model == GModel::Table ? g_table(s_abs) : 1.0; }

double DensitySpec::k_multiplier(double rho) const {
  if (rho >= r) return 0;
  if (k_model == KModel::Table) return k_table(rho);
  const double u = 1 - (rho / r) * (rho / r);
  return u * u;
}

namespace {

Rational from_real(double v, bool& exact) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "exponents", "density exponent must be finite");
  Rational q = rationalize(v, 1e-12);
  exact = exact && boost::multiprecision::denominator(q) <= 10000;
  return q;
}

}  // namespace

void set_alpha(DensitySpec& ds, double alpha) { ds.alpha = from_real(alpha, ds.exact); }
void set_beta(DensitySpec& ds, double beta) { ds.beta = from_real(beta, ds.exact); }

double density_eval(const DensitySpec& ds, const PhasePoly& p, double x, double y, DensityKind kind) {
  const double rho = std::hypot(x, y);
  if (rho == 0) throw Error(ErrorCode::SingularPoint, "numerics", "density evaluated at the origin");
  const double s = std::fabs(p.value(x, y));
  const double a = ds.alpha_d(), b = ds.beta_d();
  if (s == 0 && a < 0) throw Error(ErrorCode::SingularPoint, "numerics", "zero of the phase with negative alpha");
  const double base = (a == 0 ? 1.0 : std::pow(s, a)) * (b == 0 ? 1.0 : std::pow(rho, b));
  if (kind == DensityKind::Measure) return base;
  return base * ds.g_multiplier(s) * ds.k_multiplier(rho);
}

}  // namespace oscdecay
