#pragma once

#include "oscdecay/config.hpp"
#include "oscdecay/decomposition.hpp"
#include "oscdecay/exponents.hpp"
#include "oscdecay/fit.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace oscdecay {

enum ExitCode : int { kExitPass = 0, kExitError = 1, kExitCheckFailed = 2 };

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Command-line overrides applied on top of the loaded config.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> lambda_max;  // caps lambda1 of the sweep
  std::optional<double> eta;
};
void apply_overrides(JobConfig& c, const Overrides& o);

// Each command writes its artifacts under c.output_dir and returns an ExitCode.
// Module errors propagate as Error; run_cli turns them into exit code 1.
int cmd_analyze(const JobConfig& c, std::ostream& log);
int cmd_decompose(const JobConfig& c, std::ostream& log);
int cmd_exponent(const JobConfig& c, std::ostream& log);
int cmd_integrate(const JobConfig& c, std::ostream& log);
int cmd_sublevel(const JobConfig& c, std::ostream& log);
int cmd_vdc(const JobConfig& c, std::ostream& log);
int cmd_fit(const JobConfig& c, std::ostream& log);

// argv as given to main. Diagnostics go to err, progress to log.
int run_cli(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

// Pieces shared with tests.
std::vector<double> lambda1_ladder(const SweepConfig& s);
std::vector<LambdaTriple> sweep_lambdas(const SweepConfig& s);
std::string csv_number(double v);  // %.17g
Json exponents_json(const ExponentReport& rep, const DensitySpec& ds, int order);
Json envelope_json(const BoundEnvelope& env, int order);
Json fit_json(const DecayFit& f);
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t column(const std::string& name) const;  // ParseError when absent
};
CsvTable read_csv(const std::string& path);

}  // namespace oscdecay
