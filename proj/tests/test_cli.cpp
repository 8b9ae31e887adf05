#include "doctest.h"

#include "oscdecay/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace oscdecay;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("oscdecay_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Runs the command line with a config written to dir/config.json.
int run(const std::string& cmd, const fs::path& dir, const Json& cfg, std::string* err = nullptr,
        std::vector<std::string> extra = {}) {
  const auto path = (dir / "config.json").string();
  std::ofstream(path) << cfg.dump();
  std::vector<std::string> args{"oscdecay", cmd, "--config", path, "--out", (dir / "out").string()};
  args.insert(args.end(), extra.begin(), extra.end());
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream log, e;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), log, e);
  if (err) *err = e.str();
  return code;
}

}  // namespace

TEST_CASE("config defaults and round trip") {
  const auto c = parse_config(Json::parse(R"({"phase": ["y^2", "-1 x^3"]})"));
  CHECK(c.eta == 0.25);
  CHECK(c.max_depth == 12);
  CHECK(c.density.alpha == 0);
  CHECK(c.sweep.lambda23_multipliers == std::vector<double>{0.0});
  const Json j = config_to_json(c);
  for (const char* key : {"phase", "density", "eta", "a_max", "max_depth", "comparability_samples", "derivative_orders",
                          "seed", "sublevel", "sweep", "quad", "vdc", "fit", "output_dir"})
    CHECK(j.contains(key));
  CHECK(config_to_json(parse_config(j)) == j);

  const auto d = parse_config(Json::parse(R"({
    "phase": [{"c": "3/2", "i": 2, "j": 1}, "-x^4"],
    "density": {"alpha": "-1/2", "beta": 1, "K_model": "table", "K_table": {"knots": [0, 1], "values": [1, 0]}},
    "sweep": {"lambdas": [[0, 0, 0], [4, 1, -1]]}, "seed": 7})"));
  CHECK(d.phase.coefficient(2, 1) == Rational(3, 2));
  CHECK(d.phase.coefficient(4, 0) == -1);
  CHECK(d.density.alpha == Rational(-1, 2));
  CHECK(d.density.k_model == KModel::Table);
  CHECK(d.quad.seed == 7);
  CHECK(d.sweep.lambdas.size() == 2);
  CHECK(config_to_json(parse_config(config_to_json(d))) == config_to_json(d));

  // A float exponent is rationalized and written back as the same float.
  const auto f = parse_config(Json::parse(R"({"phase": ["x y"], "density": {"alpha": 0.25}})"));
  CHECK(f.density.alpha == Rational(1, 4));
  CHECK(config_to_json(parse_config(config_to_json(f))) == config_to_json(f));
}

TEST_CASE("config errors") {
  auto code = [](const char* text) {
    try {
      parse_config(Json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::OracleFailure;  // no throw
  };
  CHECK(code(R"({"phase": ["x"], "bogus": 1})") == ErrorCode::ParseError);
  CHECK(code(R"({"density": {}})") == ErrorCode::ParseError);
  CHECK(code(R"({"phase": []})") == ErrorCode::EmptyPolynomial);
  CHECK(code(R"({"phase": ["2"]})") == ErrorCode::InvalidArgument);
  CHECK(code(R"({"phase": ["x"], "eta": 2})") == ErrorCode::ParseError);
  CHECK(code(R"({"phase": ["x"], "density": {"g_model": "spline"}})") == ErrorCode::ParseError);
  CHECK(code(R"({"phase": ["x"], "sweep": {"lambda_j_min": 9, "lambda_j_max": 3}})") == ErrorCode::ParseError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("overrides and ladders") {
  auto c = parse_config(Json::parse(R"({"phase": ["x y"]})"));
  Overrides o;
  o.seed = 11;
  o.lambda_max = 3000;
  o.eta = 0.2;
  apply_overrides(c, o);
  CHECK(c.seed == 11);
  CHECK(c.quad.seed == 11);
  CHECK(c.eta == 0.2);
  CHECK(lambda1_ladder(c.sweep).back() == 2048);
  c.sweep.lambda23_multipliers = {-1, 1};
  const auto l = sweep_lambdas(c.sweep);
  CHECK(l.size() == 4 * lambda1_ladder(c.sweep).size());
  CHECK(l[1].l2 == doctest::Approx(-std::sqrt(128.0)));
  CHECK(l[1].l3 == doctest::Approx(std::sqrt(128.0)));
  o = {};
  o.lambda_max = 10;
  CHECK_THROWS_AS(apply_overrides(c, o), Error);
  CHECK(csv_number(0.1) == "0.10000000000000001");
}

TEST_CASE("exit codes and diagnostics") {
  const auto dir = scratch("exit");
  std::string err;
  CHECK(run("analyze", dir, Json::parse(R"({"phase": []})"), &err) == kExitError);
  CHECK(err.find("EmptyPolynomial") != std::string::npos);
  CHECK(run("analyze", dir, Json::parse(R"({"phase": ["x y"], "density": {"alpha": "-2"}})"), &err) == kExitError);
  CHECK(err.find("[exponents]") != std::string::npos);
  CHECK(err.find("NonIntegrable") != std::string::npos);
  CHECK(run("nonsense", dir, Json::parse(R"({"phase": ["x y"]})"), &err) == kExitError);
  const char* argv[] = {"oscdecay", "exponent", "--config", "/nonexistent.json"};
  std::ostringstream log, e;
  CHECK(run_cli(4, argv, log, e) == kExitError);
  CHECK(e.str().find("IoError") != std::string::npos);
}

TEST_CASE("exponent command") {
  const auto dir = scratch("exponent");
  REQUIRE(run("exponent", dir, Json::parse(R"({"phase": ["y^2", "-1 x^3"]})")) == kExitPass);
  const auto j = Json::parse(slurp(dir / "out" / "exponents.json"));
  CHECK(j["delta"] == "5/6");
  CHECK(j["d"] == 0);
  CHECK(j["case"] == "b");
  CHECK(j["threshold"] == "1/2");
  CHECK(!j["per_wedge"].empty());
  const auto env = Json::parse(slurp(dir / "out" / "envelope.json"));
  CHECK(env["exponent"] == "1/2");
  CHECK(fs::exists(dir / "out" / "exponents.csv"));
}

TEST_CASE("integrate at zero frequency with a vanishing amplitude") {
  const auto dir = scratch("integrate");
  REQUIRE(run("integrate", dir, Json::parse(R"({"phase": ["x^2", "y^2"],
      "density": {"K_model": "table", "K_table": {"knots": [0, 1], "values": [0, 0]}},
      "sweep": {"lambdas": [[0, 0, 0]]}})")) == kExitPass);
  const auto t = read_csv((dir / "out" / "sweep.csv").string());
  CHECK(t.header == std::vector<std::string>{"lambda1", "lambda2", "lambda3", "reT", "imT", "absT", "err_est",
                                             "n_evals"});
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][t.column("absT")] == 0);
  CHECK(t.rows[0][t.column("reT")] == 0);
}

TEST_CASE("sublevel and fit commands") {
  const auto dir = scratch("fit");
  const auto cfg = Json::parse(R"({"phase": ["x^2", "y^2"], "sublevel": {"samples": 500}, "fit": {"input": "sublevel"}})");
  REQUIRE(run("sublevel", dir, cfg) == kExitPass);
  const auto t = read_csv((dir / "out" / "sublevel.csv").string());
  CHECK(t.rows.size() == 14);
  // x^2 + y^2: the measure is pi epsilon exactly.
  CHECK(t.rows[0][t.column("value")] == doctest::Approx(M_PI / 128).epsilon(1e-6));
  REQUIRE(run("fit", dir, cfg) == kExitPass);
  const auto j = Json::parse(slurp(dir / "out" / "fits.json"));
  CHECK(j["kind"] == "growth");
  CHECK(j["fit"]["delta_fit"].get<double>() == doctest::Approx(1).epsilon(0.01));

  // A ladder too short to fit is a module error.
  auto bad = cfg;
  bad["sublevel"]["eps_j_max"] = 9;
  REQUIRE(run("sublevel", dir, bad) == kExitPass);
  std::string err;
  CHECK(run("fit", dir, bad, &err) == kExitError);
  CHECK(err.find("InsufficientSpan") != std::string::npos);
}

TEST_CASE("analyze xy end to end and determinism") {
  const auto cfg = Json::parse(R"({"phase": ["x y"], "comparability_samples": 2000,
      "sublevel": {"samples": 2000}, "sweep": {"lambda_j_min": 6, "lambda_j_max": 13}})");
  const auto a = scratch("analyze_a"), b = scratch("analyze_b");
  REQUIRE(run("analyze", a, cfg) == kExitPass);
  REQUIRE(run("analyze", b, cfg) == kExitPass);
  const auto report = slurp(a / "out" / "report.md");
  CHECK(report.find("(delta, d) = (1, 1)") != std::string::npos);
  CHECK(report.find("envelope case b") != std::string::npos);
  CHECK(report.find("support radius r = 1") != std::string::npos);
  for (const char* f : {"decomposition.json", "exponents.json", "envelope.json", "sweep.csv", "sublevel.csv",
                        "fits.json", "report.md", "decay.svg"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(a / "out" / f));
    CHECK(slurp(a / "out" / f) == slurp(b / "out" / f));
  }
  const auto fits = Json::parse(slurp(a / "out" / "fits.json"));
  CHECK(fits["sublevel"]["d_fit"] == 1);
  CHECK(std::fabs(fits["sublevel"]["delta_fit"].get<double>() - 1) <= 0.05);
  // A different seed changes the Monte Carlo ladder.
  const auto c = scratch("analyze_c");
  REQUIRE(run("analyze", c, cfg, nullptr, {"--seed", "2"}) == kExitPass);
  CHECK(slurp(c / "out" / "sublevel.csv") != slurp(a / "out" / "sublevel.csv"));
}

TEST_CASE("vdc command") {
  const auto dir = scratch("vdc");
  REQUIRE(run("vdc", dir, Json::parse(R"({"phase": ["x"], "vdc": {"dimensions": [1], "trials": 100}})")) == kExitPass);
  const auto j = Json::parse(slurp(dir / "out" / "vdc.json"));
  CHECK(j["reports"][0]["trials"] == 100);
  CHECK(j["reports"][0]["violations"] == 0);
  CHECK(j["fresnel_max_ratio"].get<double>() <= 1);
  // An unattainable headroom requirement is a check failure, not an error.
  REQUIRE(run("vdc", dir, Json::parse(R"({"phase": ["x"], "vdc": {"dimensions": [1], "trials": 5,
      "min_headroom": 1e9}})")) == kExitCheckFailed);
}

TEST_CASE("csv reader") {
  const auto dir = scratch("csv");
  std::ofstream(dir / "r.csv") << "a,b\n1,2\n3\n";
  CHECK_THROWS_AS(read_csv((dir / "r.csv").string()), Error);
  std::ofstream(dir / "s.csv") << "a,b\n1,x\n";
  CHECK_THROWS_AS(read_csv((dir / "s.csv").string()), Error);
  std::ofstream(dir / "t.csv") << "a,b\n1,2\n";
  const auto t = read_csv((dir / "t.csv").string());
  CHECK(t.rows[0][t.column("b")] == 2);
  CHECK_THROWS_AS(t.column("c"), Error);
}
