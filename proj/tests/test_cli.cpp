#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "trihyp/errors.hpp"
#include "trihyp/models.hpp"
#include "trihyp/report.hpp"

using namespace trihyp;

namespace {

int run_cli(const std::string& args) {
  std::string cmd = std::string(TRIHYP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WEXITSTATUS(st);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("operator config loading") {
  json j = json::parse(R"({
    "q1": "0", "q2": "-(t+x^2)*xi^2", "q3": "t^2*xi^3",
    "p2_re": "0.5*xi^2",
    "domain": {"T": 0.5, "X": [-2, 2]}
  })");
  auto m = load_operator(j);
  CHECK(m.q2(0.5, 1.0, 2.0) == doctest::Approx(-(0.5 + 1.0) * 4.0));
  CHECK(m.p2_re(0, 0, 3.0) == doctest::Approx(4.5));
  CHECK(m.domain.T == 0.5);
  CHECK(m.domain.x_hi == 2.0);

  CHECK_THROWS_AS(load_operator(json::parse(R"({"q2": "t*(xi"})")), InputError);
  // a pole inside the box is rejected up front
  CHECK_THROWS_AS(load_operator(json::parse(R"({"q2": "xi^2/x"})")), InputError);
  CHECK_THROWS_AS(load_operator(json::parse(R"({"q2": 7})")), InputError);
  CHECK_THROWS_AS(
      load_operator(json::parse(R"({"domain": {"T": -1, "X": [0, 1]}})")),
      InputError);
}

TEST_CASE("reduced operator JSON round trip") {
  DomainBox box{1.0, -1.0, 1.0};
  auto r = effective_reduced(0.7);
  auto j = reduced_to_json(r, box);
  auto back = reduced_from_json(j);
  for (double t : {0.0, 0.4}) {
    for (double x : {-0.5, 0.3}) {
      for (double xi : {-2.0, 1.0}) {
        CHECK(back.a2(t, x, xi) == doctest::Approx(r.a2(t, x, xi)));
        CHECK(back.alpha(t, x, xi) == doctest::Approx(r.alpha(t, x, xi)));
        CHECK(back.b3(t, x, xi) == doctest::Approx(r.b3(t, x, xi)));
        CHECK(back.b2_re(t, x, xi) == doctest::Approx(r.b2_re(t, x, xi)));
      }
    }
  }

  // lambda-backed fields go through the tabulated path
  ReducedOperator rl;
  rl.a2 = CoefficientField(
      [](double t, double x, double xi) { return (1.0 + t + 0.5 * x * x) * xi * xi; },
      2);
  auto jl = reduced_to_json(rl, box);
  CHECK(jl["a2"]["type"] == "table");
  auto bl = reduced_from_json(jl);
  for (double t : {0.1, 0.9})
    for (double x : {-0.8, 0.6})
      CHECK(bl.a2(t, x, 1.5) == doctest::Approx(rl.a2(t, x, 1.5)).epsilon(1e-3));
}

TEST_CASE("config hash is stable") {
  json a = {{"T", 0.25}, {"seed", 7}};
  json b = {{"T", 0.25}, {"seed", 7}};
  CHECK(config_hash_hex(a) == config_hash_hex(b));
  json c = {{"T", 0.5}, {"seed", 7}};
  CHECK(config_hash_hex(a) != config_hash_hex(c));
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli("analyze --out /tmp/trihyp_test_ok") == 0);

  std::ofstream bad("/tmp/trihyp_nonhyp.json");
  bad << R"({"operator": {"q2": "xi^2"}})";  // tau^3 + xi^2 tau: complex pair
  bad.close();
  CHECK(run_cli("analyze --config /tmp/trihyp_nonhyp.json --out /tmp/trihyp_test_h0") == 1);

  std::ofstream mal("/tmp/trihyp_malformed.json");
  mal << R"({"operator": {"q2": "t*(xi"}})";
  mal.close();
  CHECK(run_cli("analyze --config /tmp/trihyp_malformed.json --out /tmp/trihyp_test_bad") == 2);

  CHECK(run_cli("factorize --out /tmp/trihyp_test_fact") == 0);
}

TEST_CASE("cli analyze handles a model with a tau^2 term") {
  // the worked model shifted by tau -> tau + c xi: same invariants, and the
  // transport chart removes the drift
  std::ofstream cfg("/tmp/trihyp_drift.json");
  cfg << R"({"operator": {
    "q1": "0.6*xi",
    "q2": "(0.12 - t - x^2)*xi^2",
    "q3": "(0.008 - 0.2*(t + x^2) + t^2)*xi^3",
    "domain": {"T": 0.1, "X": [-1, 1]}}})";
  cfg.close();
  REQUIRE(run_cli("analyze --config /tmp/trihyp_drift.json --out /tmp/trihyp_drift_out") == 0);
  json j;
  std::ifstream in("/tmp/trihyp_drift_out/analyze_summary.json");
  in >> j;
  CHECK(j["H0"]["pass"].get<bool>());
  CHECK(j["H1"]["locus_points"].get<int>() == 1);
  CHECK(j["hamilton"]["Pi"].get<double>() == doctest::Approx(7.0 / 6.0));
  CHECK(j["hamilton"]["mu"].get<double>() == doctest::Approx(1.0));
  CHECK(j["reduction"]["h2_pass"].get<bool>());
  CHECK(j["chart"]["residual"].get<double>() < 1e-10);
}

TEST_CASE("cli analyze flags hypothesis violations") {
  // triple root at xi = +1 but not xi = -1
  std::ofstream h1("/tmp/trihyp_h1.json");
  h1 << R"json({"operator": {
    "q2": "-(t*xi^2 + x^2*xi^2 + (xi - abs(xi))^2)",
    "q3": "t^2*xi^3",
    "domain": {"T": 0.1, "X": [-1, 1]}}})json";
  h1.close();
  CHECK(run_cli("analyze --config /tmp/trihyp_h1.json --out /tmp/trihyp_h1_out") == 1);
  {
    json j;
    std::ifstream in("/tmp/trihyp_h1_out/analyze_summary.json");
    in >> j;
    CHECK(j["H1"]["violation"].get<bool>());
  }

  // r3 carries a t c3 piece: the t^2 b3 representation fails near t = 0
  std::ofstream h2("/tmp/trihyp_h2.json");
  h2 << R"({"operator": {
    "q2": "-(t + x^2)*xi^2",
    "q3": "(t^2 + 0.2*x*t)*xi^3",
    "domain": {"T": 0.1, "X": [-1, 1]}}})";
  h2.close();
  CHECK(run_cli("analyze --config /tmp/trihyp_h2.json --out /tmp/trihyp_h2_out") == 1);
  {
    json j;
    std::ifstream in("/tmp/trihyp_h2_out/analyze_summary.json");
    in >> j;
    CHECK(j["H0"]["pass"].get<bool>());
    CHECK(!j["reduction"]["h2_pass"].get<bool>());
    CHECK(j["reduction"]["max_dt_r3_at_0"].get<double>() ==
          doctest::Approx(0.2).epsilon(1e-6));
  }
}

TEST_CASE("cli determinism: identical config and seed give identical bytes") {
  REQUIRE(run_cli("selftest --seed 42 --out /tmp/trihyp_det_a") == 0);
  REQUIRE(run_cli("selftest --seed 42 --out /tmp/trihyp_det_b") == 0);
  CHECK(slurp("/tmp/trihyp_det_a/selftest_summary.json") ==
        slurp("/tmp/trihyp_det_b/selftest_summary.json"));
  CHECK(!slurp("/tmp/trihyp_det_a/selftest_summary.json").empty());
}
