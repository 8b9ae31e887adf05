#pragma once

#include "oscdecay/core.hpp"
#include "oscdecay/phase_poly.hpp"

#include <vector>

namespace oscdecay {

enum class GModel { Power, Table };
enum class KModel { PowerBump, Table };

// Piecewise-linear table, constant beyond the end knots.
struct Table {
  std::vector<double> knots;
  std::vector<double> values;
  double operator()(double t) const;
  void validate(const char* what) const;
};

// g(s) = |s|^alpha * m_g(|s|),  K(x, y) = rho^beta * m_K(rho) for rho < r, else 0.
// The bump multiplier is (1 - rho^2/r^2)^2. Tables replace the multipliers; |m| <= A is enforced.
struct DensitySpec {
  Rational alpha{0};
  Rational beta{0};
  bool exact = true;  // false when alpha/beta came from reals that are not small-denominator rationals
  double A = 1;
  GModel g_model = GModel::Power;
  KModel k_model = KModel::PowerBump;
  double r = 1;
  Table g_table;
  Table k_table;

  void validate() const;
  double alpha_d() const { return to_double(alpha); }
  double beta_d() const { return to_double(beta); }
  double g_multiplier(double s_abs) const;
  double k_multiplier(double rho) const;
};

// Exponent given as a real number: rationalized; exact only for denominators up to 10^4.
void set_alpha(DensitySpec& ds, double alpha);
void set_beta(DensitySpec& ds, double beta);

enum class DensityKind { Measure, Amplitude };

// Measure: |S|^alpha (x^2 + y^2)^{beta/2}.  Amplitude: g(S) K(x, y).
double density_eval(const DensitySpec& ds, const PhasePoly& p, double x, double y,
                    DensityKind kind = DensityKind::Measure);

}  // namespace oscdecay
