// Exercises the installed command-line surface: flags, exit codes, report
// schemas, and determinism of emitted files.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

using json = nlohmann::json;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(SASAKI_CLI_PATH) + " " + args +
                          " > /dev/null 2> /dev/null";
  const int st = std::system(cmd.c_str());
  return WEXITSTATUS(st);
}

std::string tmp_path(const std::string& name) {
  return std::string("cli_test_") + name;
}

json load(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("verify: admissible potentials exit 0") {
  CHECK(run("verify --potential sphere --k 2 --points 20 --radius 2") == 0);
  CHECK(run("verify --potential quadratic --k 1 --points 20") == 0);
}

TEST_CASE("verify: negative-Hessian polynomial exits 2") {
  CHECK(run("verify --spec "
            "'{\"kind\":\"polynomial\",\"k\":1,\"terms\":[{\"a\":[1],\"b\":[1],"
            "\"re\":-0.5,\"im\":0.0}]}' --points 5") == 2);
}

TEST_CASE("verify: report schema") {
  const std::string out = tmp_path("verify.json");
  REQUIRE(run("verify --potential sphere --k 1 --points 5 --out " + out) == 0);
  const json j = load(out);
  CHECK(j.at("basis").get<std::string>() == "dx,dz,dzbar/v1");
  CHECK(j.at("tier") == "analytic");
  CHECK(j.at("points").size() == 5);
  const auto& row = j.at("points").at(0);
  for (const char* key : {"axiom1", "axiom2", "axiom3", "axiom4", "axiom5",
                          "axiom6", "deta", "frobenius", "killing"})
    CHECK(row.contains(key));
  CHECK(j.at("summary").at("pass").get<bool>());
}

TEST_CASE("einstein: verdicts and exit codes") {
  CHECK(run("einstein --potential sphere --k 1 --points 20") == 0);
  CHECK(run("einstein --potential product --q 1 --n 1 --points 20") == 0);
  const std::string out = tmp_path("einstein.json");
  CHECK(run("einstein --potential quadratic --k 1 --points 20 --out " + out) ==
        1);
  const json j = load(out);
  CHECK(j.at("verdict") == "NotEinstein");
  CHECK(j.at("lambda") == 2.0);
  CHECK(j.at("max_abs").get<double>() == doctest::Approx(2.0));
}

TEST_CASE("einstein: identical config and seed give identical bytes") {
  const std::string a = tmp_path("det_a.json"), b = tmp_path("det_b.json");
  REQUIRE(run("einstein --potential sphere --k 2 --points 25 --seed 42 --out " +
              a) == 0);
  REQUIRE(run("einstein --potential sphere --k 2 --points 25 --seed 42 --out " +
              b) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());
}

TEST_CASE("config file fills unset flags") {
  const std::string cfg = tmp_path("cfg.json");
  {
    std::ofstream out(cfg);
    out << R"({"potential":"quadratic","k":1,"points":10})";
  }
  CHECK(run("einstein --config " + cfg) == 1);
  // explicit flag wins over the config value
  CHECK(run("einstein --config " + cfg + " --potential sphere") == 0);
}

TEST_CASE("curvature: dump files") {
  const std::string out = tmp_path("curv.json");
  const std::string csv = tmp_path("curv.csv");
  REQUIRE(run("curvature --potential sphere --k 1 --points 2 --out " + out +
              " --csv " + csv) == 0);
  const json j = load(out);
  CHECK(j.at("points").size() == 2);
  CHECK(j.at("points").at(0).contains("riemann"));
  CHECK(j.at("points").at(0).contains("weyl_max_abs"));
  const std::string text = slurp(csv);
  CHECK(text.rfind("point,tensor,mu,nu,rho,sigma,re,im", 0) == 0);
}

TEST_CASE("solve: manufactured boundary exits 0 and writes outputs") {
  const std::string out = tmp_path("solve.json");
  const std::string grid = tmp_path("grid.csv");
  REQUIRE(run("solve --grid 32 --boundary sphere --out " + out +
              " --out-grid " + grid) == 0);
  const json j = load(out);
  CHECK(j.at("newton").at("converged").get<bool>());
  CHECK(j.at("verification").at("pass").get<bool>());
  CHECK(j.at("grid").at("nx") == 32);
  const std::string text = slurp(grid);
  CHECK(text.rfind("i,j,re_z,im_z,K", 0) == 0);
}

TEST_CASE("solve: iteration cap exits 3") {
  CHECK(run("solve --grid 32 --max-iters 1") == 3);
}

TEST_CASE("radial: manufactured start exits 0") {
  const std::string out = tmp_path("radial.json");
  REQUIRE(run("radial --k 2 --u0 0.231 --out " + out) == 0);
  const json j = load(out);
  CHECK(j.at("newton").at("converged").get<bool>());
  CHECK(j.at("verification").at("pass").get<bool>());
}

TEST_CASE("gauge-check exits 0 on builtin potentials") {
  CHECK(run("gauge-check --potential sphere --k 1 --points 10") == 0);
  CHECK(run("gauge-check --potential product --q 1 --n 1 --points 5 "
            "--alpha-re 0.4 --alpha-im -0.3 --beta-re 0.2 --beta-im 0.1") ==
        0);
}

TEST_CASE("unknown potential kind exits 2") {
  CHECK(run("verify --potential moebius") == 2);
}
