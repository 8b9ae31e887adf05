#pragma once

#include "oscdecay/density.hpp"
#include "oscdecay/numerics.hpp"
#include "oscdecay/phase_poly.hpp"
#include "oscdecay/vdc.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace oscdecay {

using Json = nlohmann::ordered_json;

struct SublevelConfig {
  double r = 1;
  int eps_j_min = 7, eps_j_max = 20;  // eps = 2^-j
  std::size_t samples = 4000;
};

struct SweepConfig {
  int lambda_j_min = 7, lambda_j_max = 14;  // lambda1 = 2^j
  std::vector<double> lambda23_multipliers{0.0};  // (lambda2, lambda3) = (m2, m3) sqrt(lambda1)
  std::vector<LambdaTriple> lambdas;            // explicit triples; replaces the ladder when non-empty
};

struct VdcConfig {
  std::vector<int> dimensions{1, 2};
  std::size_t trials = 100;
  int degree_bound = 5;
  std::vector<double> lambda_ladder;  // empty: per-dimension default
  std::vector<int> k_values{2, 3};
  double min_headroom = 1.2;
};

struct FitConfig {
  std::string input = "sweep";  // "sweep", "sublevel" or a CSV path
  std::string kind;             // "decay" / "growth"; empty picks from the input
};

struct JobConfig {
  PhasePoly phase;
  DensitySpec density;
  double eta = 0.25;
  double a_max = 0.5;
  int max_depth = 12;
  std::size_t comparability_samples = 10000;
  std::pair<int, int> derivative_orders{1, 1};
  std::uint64_t seed = 1;
  SublevelConfig sublevel;
  SweepConfig sweep;
  QuadConfig quad;
  VdcConfig vdc;
  FitConfig fit;
  std::string output_dir = "out";
};

// Missing keys take the defaults above; unknown keys are rejected.
JobConfig parse_config(const Json& j);
JobConfig load_config(const std::string& path);
// Every field written explicitly; parse_config(config_to_json(c)) reproduces c.
Json config_to_json(const JobConfig& c);

// "c x^i y^j" with c an exact rational.
std::string format_term(const Monomial& m, const Rational& c);

}  // namespace oscdecay
