#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sasaki/solver.hpp"

using namespace sasaki;

namespace {
GridField sphere_grid(int N, double init = 0.0) {
  const double hw = 0.5, h = 2.0 * hw / (N - 1);
  return GridField::make(N, N, -hw, -hw, h, sphere_manufactured_k1, init);
}
double sup_err_vs_manufactured(const GridField& g) {
  double e = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      e = std::max(e, std::abs(g.at(i, j) -
                               sphere_manufactured_k1(g.re(i), g.im(j))));
  return e;
}
}  // namespace

TEST_CASE("manufactured solution: grid refinement at second order") {
  double errs[3];
  int idx = 0;
  for (int N : {32, 64, 128}) {
    GridField g = sphere_grid(N);
    const NewtonReport rep = solve_liouville_k1(g, 1.0, {});
    REQUIRE(rep.converged);
    errs[idx++] = sup_err_vs_manufactured(g);
  }
  const double o1 = std::log2(errs[0] / errs[1]);
  const double o2 = std::log2(errs[1] / errs[2]);
  CHECK(o1 == doctest::Approx(2.0).epsilon(0.15));
  CHECK(o2 == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("degenerate c = 0 mode reproduces the harmonic extension") {
  const int N = 32;
  const double hw = 0.5, h = 2.0 * hw / (N - 1);
  GridField g = GridField::make(N, N, -hw, -hw, h,
                                [](double, double) { return 0.7; }, 0.0);
  const NewtonReport rep = solve_liouville_k1(g, 0.0, {});
  CHECK(rep.converged);
  double worst = 0;
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i)
      worst = std::max(worst, std::abs(g.at(i, j) - 0.7));
  CHECK(worst < 1e-9);
}

TEST_CASE("cold and warm starts agree") {
  GridField cold = sphere_grid(48, 0.0);
  GridField warm = GridField::from_function(
      48, 48, -0.5, -0.5, 1.0 / 47, sphere_manufactured_k1);
  REQUIRE(solve_liouville_k1(cold, 1.0, {}).converged);
  REQUIRE(solve_liouville_k1(warm, 1.0, {}).converged);
  double diff = 0;
  for (size_t i = 0; i < cold.v.size(); ++i)
    diff = std::max(diff, std::abs(cold.v[i] - warm.v[i]));
  CHECK(diff < 1e-9);
}

TEST_CASE("newton history decreases strictly; iteration cap reports") {
  GridField g = sphere_grid(32);
  const NewtonReport rep = solve_liouville_k1(g, 1.0, {});
  REQUIRE(rep.converged);
  for (size_t i = 1; i < rep.history.size(); ++i)
    CHECK(rep.history[i] < rep.history[i - 1]);

  GridField g1 = sphere_grid(32);
  NewtonConfig one;
  one.max_iters = 1;
  const NewtonReport r1 = solve_liouville_k1(g1, 1.0, one);
  CHECK(!r1.converged);
  CHECK(r1.final_residual > 1.0);
}

TEST_CASE("additive constants map between c values") {
  // if K solves with c, K + a solves with c e^{4a} (k = 1)
  const double a = 0.3;
  GridField base = sphere_grid(40);
  REQUIRE(solve_liouville_k1(base, 1.0, {}).converged);

  const int N = 40;
  const double hw = 0.5, h = 2.0 * hw / (N - 1);
  // the constant shift is an exact symmetry of the discrete equations, so
  // the shifted solve starts from the shifted initial field
  GridField shifted = GridField::make(
      N, N, -hw, -hw, h,
      [&](double x, double y) { return sphere_manufactured_k1(x, y) + a; },
      a);
  REQUIRE(solve_liouville_k1(shifted, std::exp(4.0 * a), {}).converged);
  double diff = 0;
  for (size_t i = 0; i < base.v.size(); ++i)
    diff = std::max(diff, std::abs(shifted.v[i] - base.v[i] - a));
  CHECK(diff < 1e-9);
}

TEST_CASE("grid verification through finite-difference jets") {
  GridField g = sphere_grid(128);
  REQUIRE(solve_liouville_k1(g, 1.0, {}).converged);
  const VerifySummary vs = verify_solution(g, 4);
  CHECK(vs.inadmissible == 0);
  CHECK(vs.max_residual < 1e-3);
  CHECK(vs.einstein(1e-3));

  // one Newton iteration leaves a visibly non-Einstein field
  GridField bad = sphere_grid(64);
  NewtonConfig one;
  one.max_iters = 1;
  REQUIRE(!solve_liouville_k1(bad, 1.0, one).converged);
  const VerifySummary vb = verify_solution(bad, 4);
  CHECK(!vb.einstein(1e-3));

  CHECK_THROWS_AS(verify_solution(sphere_grid(8), 4), InvalidSpecError);
}

TEST_CASE("grid construction guards") {
  CHECK_THROWS_AS(GridField::make(4, 4, 0, 0, 0.1,
                                  [](double, double) { return 0.0; }),
                  InvalidSpecError);
  GridField g = sphere_grid(32);
  CHECK_THROWS_AS(solve_liouville_k1(g, -1.0, {}), InvalidSpecError);
}

TEST_CASE("radial manufactured solutions for k = 1, 2") {
  for (int k : {1, 2}) {
    const double u0 = k == 1 ? 0.25 * std::log(2.0) : std::log(2.0) / 3.0;
    const RadialResult rr = solve_radial(k, 1.0, 3.0, 4001, u0, {});
    REQUIRE(rr.report.converged);
    double err = 0;
    for (size_t i = 0; i < rr.profile.s.size(); ++i)
      err = std::max(err, std::abs(rr.profile.u[i] -
                                   (0.5 * std::log1p(rr.profile.s[i]) + u0)));
    CAPTURE(k);
    CHECK(err < 1e-6);
    // regularity: u'(0) determined by (u'(0))^k = c e^{-2(k+1)u0}
    CHECK(rr.profile.up[0] ==
          doctest::Approx(std::pow(std::exp(-2.0 * (k + 1) * u0), 1.0 / k))
              .epsilon(1e-12));
    CHECK(verify_solution(rr.profile, {0.5, 1.0, 2.0}).max_residual < 1e-4);
  }
}

TEST_CASE("radial solve away from the manufactured family") {
  const RadialResult rr = solve_radial(1, 2.5, 2.5, 3001, -0.3, {});
  REQUIRE(rr.report.converged);
  CHECK(rr.report.iterations >= 2);  // the initial guess is not a solution
  for (double v : rr.profile.up) CHECK(v > 0.0);
  const VerifySummary vs = verify_solution(rr.profile, {0.5, 1.0});
  CHECK(vs.max_residual < 1e-4);
  CHECK(vs.inadmissible == 0);
}

TEST_CASE("radial profile interpolation is accurate") {
  const RadialResult rr =
      solve_radial(1, 1.0, 3.0, 4001, 0.25 * std::log(2.0), {});
  for (double s : {0.123456, 1.37109, 2.5}) {
    const double want = 0.5 * std::log1p(s) + 0.25 * std::log(2.0);
    CHECK(std::abs(rr.profile.value(s) - want) < 1e-7);
  }
  CHECK_THROWS_AS(rr.profile.value(3.5), InvalidSpecError);
}

TEST_CASE("radial argument guards") {
  CHECK_THROWS_AS(solve_radial(0, 1.0, 3.0, 100, 0.0, {}), InvalidSpecError);
  CHECK_THROWS_AS(solve_radial(1, 0.0, 3.0, 100, 0.0, {}), InvalidSpecError);
  CHECK_THROWS_AS(solve_radial(1, 1.0, 3.0, 4, 0.0, {}), InvalidSpecError);
}
