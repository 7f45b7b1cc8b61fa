// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sasaki/curvature.hpp"
#include "sasaki/einstein.hpp"
#include "sasaki/solver.hpp"
#include "sasaki/structure.hpp"

using namespace sasaki;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct Campaign {
  PotentialSpec spec;
  double radius;
};

// sphere k=1..3, product (1,1) and (2,1), quadratic, five seeded admissible
// polynomial potentials
std::vector<Campaign> campaign_potentials() {
  std::vector<Campaign> cs = {{PotentialSpec::sphere(1), 2.0},
                              {PotentialSpec::sphere(2), 2.0},
                              {PotentialSpec::sphere(3), 2.0},
                              {PotentialSpec::product(1, 1), 2.0},
                              {PotentialSpec::product(2, 1), 2.0},
                              {PotentialSpec::quadratic(1), 2.0}};
  const int dims[5] = {1, 2, 3, 1, 2};
  for (int t = 0; t < 5; ++t)
    cs.push_back({random_admissible_polynomial(dims[t], 1000 + t), 0.6});
  return cs;
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst_axioms = 0, worst_nij = 0;
  for (const auto& c : campaign_potentials()) {
    const auto probes = probe_vectors(c.spec.k, 4242);
    for (const auto& p : sample_ball(c.spec.k, 50, c.radius, 271828)) {
      const WirtingerJet jet = evaluate_jet(c.spec, p, 4);
      const AxiomResiduals r =
          axiom_residuals(build_structure(jet), jet, probes);
      worst_axioms = std::max({worst_axioms, r.phi_square, r.eta_xi,
                               r.compatibility, r.xi_metric_dual,
                               r.fundamental});
      worst_nij = std::max(worst_nij, r.nijenhuis);
    }
  }
  const double dt = seconds_since(t0);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "max axiom residual %.2e < 1e-10, Nijenhuis %.2e < 1e-8, "
                "%.1f s < 30 s",
                worst_axioms, worst_nij, dt);
  report(1, "axiom suite", worst_axioms < 1e-10 && worst_nij < 1e-8 && dt < 30,
         detail);
}

void criterion2() {
  double dgamma = 0, dricci = 0, dmetric = 0, dlogdet = 0;
  for (const auto& c : campaign_potentials()) {
    const Basis B{c.spec.k};
    const int n = B.dim();
    for (const auto& p : sample_ball(c.spec.k, 20, c.radius, 314159)) {
      const WirtingerJet jet = evaluate_jet(c.spec, p, 4);
      const ChristoffelPack cc = christoffel_closed(jet);
      const ChristoffelPack cn = christoffel_numeric(c.spec, p, 1e-3);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int d = 0; d < n; ++d)
            dgamma = std::max(dgamma,
                              std::abs(cc.gamma(a, b, d) - cn.gamma(a, b, d)));
      dricci = std::max(dricci, (ricci_from_riemann(riemann_closed(jet)) -
                                 ricci_closed(jet))
                                    .max_abs());
      dmetric = std::max(dmetric, metricity_residual(c.spec, p, 1e-3));
      dlogdet = std::max(dlogdet, logdet_trace_identity(jet));
    }
  }
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "Christoffel %.2e < 1e-5, Ricci contraction %.2e < 1e-9, "
                "metricity %.2e < 1e-5, log-det identity %.2e < 1e-10",
                dgamma, dricci, dmetric, dlogdet);
  report(2, "closed-form cross-checks",
         dgamma < 1e-5 && dricci < 1e-9 && dmetric < 1e-5 && dlogdet < 1e-10,
         detail);
}

void criterion3() {
  double dxx = 0, dprop = 0;
  for (const auto& c : campaign_potentials()) {
    const Basis B{c.spec.k};
    for (const auto& p : sample_ball(c.spec.k, 20, c.radius, 578281)) {
      const WirtingerJet jet = evaluate_jet(c.spec, p, 4);
      const StructurePack s = build_structure(jet);
      const CMat ric = ricci_closed(jet);
      const CMat contracted = ricci_from_riemann(riemann_closed(jet));
      dxx = std::max({dxx, std::abs(ric(0, 0) - 2.0 * c.spec.k),
                      std::abs(contracted(0, 0) - 2.0 * c.spec.k)});
      for (int j = 0; j < c.spec.k; ++j) {
        dprop = std::max(dprop,
                         std::abs(ric(0, B.hol(j)) -
                                  2.0 * c.spec.k * s.g(0, B.hol(j))));
        for (int i = 0; i < c.spec.k; ++i)
          dprop = std::max(dprop, std::abs(ric(B.hol(i), B.hol(j)) -
                                           2.0 * c.spec.k *
                                               s.g(B.hol(i), B.hol(j))));
      }
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "|R_xx - 2k| %.2e < 1e-12, |R_xj - 2k g_xj|, |R_ij - 2k g_ij| "
                "%.2e < 1e-10",
                dxx, dprop);
  report(3, "fixed Ricci components", dxx < 1e-12 && dprop < 1e-10, detail);
}

void criterion4() {
  double ein = 0;
  for (const auto& spec :
       {PotentialSpec::sphere(1), PotentialSpec::sphere(2),
        PotentialSpec::product(1, 1), PotentialSpec::product(1, 2),
        PotentialSpec::product(2, 1)}) {
    for (const auto& p : sample_ball(spec.k, 25, 1.5, 161803))
      ein = std::max(ein,
                     einstein_residual(evaluate_jet(spec, p, 4), spec.k)
                         .max_abs);
  }
  double quad = 0;
  for (const auto& p : sample_ball(1, 25, 1.5, 141421)) {
    const CMat r =
        einstein_residual(evaluate_jet(PotentialSpec::quadratic(1), p, 4), 1)
            .residual;
    quad = std::max(quad, std::abs(r(0, 0) - Cx{-2.0, 0.0}));
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "Einstein families max %.2e < 1e-9, quadratic |res - (-2)| "
                "%.2e < 1e-12",
                ein, quad);
  report(4, "Einstein examples", ein < 1e-9 && quad < 1e-12, detail);
}

void criterion5() {
  const GaugeResult s1 = apply_gauge(
      PotentialSpec::sphere(1), GaugeMap::constant(1, 0.25 * std::log(2.0)));
  const GaugeResult s2 = apply_gauge(
      PotentialSpec::sphere(2), GaugeMap::constant(2, std::log(2.0) / 3.0));
  double r1 = 0, r2 = 0;
  for (const auto& p : sample_ball(1, 25, 2.0, 123))
    r1 = std::max(r1,
                  integrated_ma_residual(evaluate_jet(s1.spec, p, 2), 1, 1.0));
  for (const auto& p : sample_ball(2, 25, 2.0, 456)) {
    const WirtingerJet j = evaluate_jet(s2.spec, p, 2);
    r2 = std::max(r2, integrated_ma_residual(j, 2, 1.0));
    // determinant form written out for dimension five
    const Cx det =
        j.mixed(0, 0) * j.mixed(1, 1) - j.mixed(0, 1) * j.mixed(1, 0);
    r2 = std::max(r2, std::abs(det - std::exp(-6.0 * j.value())));
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail),
                "k=1 shifted %.2e < 1e-12, k=2 shifted %.2e < 1e-12", r1, r2);
  report(5, "integrated Monge-Ampere forms", r1 < 1e-12 && r2 < 1e-12, detail);
}

void criterion6() {
  double wmax = 0;
  for (const auto& p : sample_ball(2, 20, 2.0, 987)) {
    const WirtingerJet jet = evaluate_jet(PotentialSpec::sphere(2), p, 4);
    const StructurePack s = build_structure(jet);
    wmax = std::max(wmax, curvature_bundle(jet, s).weyl.max_abs);
  }
  double trace = 0;
  for (const auto& c : campaign_potentials()) {
    if (c.spec.k < 2) continue;  // Weyl vanishes identically in dimension 3
    for (const auto& p : sample_ball(c.spec.k, 5, c.radius, 654)) {
      const WirtingerJet jet = evaluate_jet(c.spec, p, 4);
      const StructurePack s = build_structure(jet);
      trace = std::max(
          trace, weyl_trace_residual(curvature_bundle(jet, s).weyl.lowered, s));
    }
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail),
                "sphere k=2 max|W| %.2e < 1e-6, trace residual %.2e < 1e-9",
                wmax, trace);
  report(6, "Weyl flatness of the sphere", wmax < 1e-6 && trace < 1e-9,
         detail);
}

void criterion7() {
  Rng rng(112233);
  double worst = 0;
  for (const auto& c : campaign_potentials()) {
    GaugeMap g;
    g.k = c.spec.k;
    std::vector<int> e1(g.k, 0), e2(g.k, 0);
    e1[0] = 1;
    e2[0] = 2;
    g.terms = {{e1, Cx{rng.uniform(-1, 1), rng.uniform(-1, 1)}},
               {e2, Cx{rng.uniform(-1, 1), rng.uniform(-1, 1)}}};
    const auto pts = sample_ball(c.spec.k, 10, c.radius, 445566);
    const GaugeInvarianceReport rep = check_gauge_invariance(c.spec, g, pts);
    worst = std::max(worst, rep.max());
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail),
                "max gauge deviation over jets, g, phi, eta, Einstein "
                "residual %.2e < 1e-12",
                worst);
  report(7, "gauge invariance", worst < 1e-12, detail);
}

void criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  double errs[3];
  int idx = 0;
  bool all_converged = true;
  for (int N : {32, 64, 128}) {
    const double hw = 0.5, h = 2.0 * hw / (N - 1);
    GridField g =
        GridField::make(N, N, -hw, -hw, h, sphere_manufactured_k1, 0.0);
    all_converged = all_converged && solve_liouville_k1(g, 1.0, {}).converged;
    double e = 0;
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i)
        e = std::max(e, std::abs(g.at(i, j) -
                                 sphere_manufactured_k1(g.re(i), g.im(j))));
    errs[idx++] = e;
  }
  const double o1 = std::log2(errs[0] / errs[1]);
  const double o2 = std::log2(errs[1] / errs[2]);
  const bool order_ok = std::abs(o1 - 2.0) < 0.3 && std::abs(o2 - 2.0) < 0.3;

  double radial_err = 0;
  bool radial_ok = true;
  for (int k : {1, 2}) {
    const double u0 = k == 1 ? 0.25 * std::log(2.0) : std::log(2.0) / 3.0;
    const RadialResult rr = solve_radial(k, 1.0, 3.0, 4001, u0, {});
    radial_ok = radial_ok && rr.report.converged;
    if (!rr.report.converged) continue;
    for (size_t i = 0; i < rr.profile.s.size(); ++i)
      radial_err = std::max(
          radial_err, std::abs(rr.profile.u[i] -
                               (0.5 * std::log1p(rr.profile.s[i]) + u0)));
  }

  const double hw = 0.5, h = 2.0 * hw / 127;
  GridField g128 =
      GridField::make(128, 128, -hw, -hw, h, sphere_manufactured_k1, 0.0);
  const bool conv128 = solve_liouville_k1(g128, 1.0, {}).converged;
  const VerifySummary vs = verify_solution(g128, 4);
  const double dt = seconds_since(t0);

  char detail[240];
  std::snprintf(detail, sizeof(detail),
                "orders %.2f/%.2f in 2+-0.3, radial error %.2e < 1e-6, "
                "interior residual %.2e < 1e-3, %.0f s < 120 s",
                o1, o2, radial_err, vs.max_residual, dt);
  report(8, "solver convergence",
         all_converged && order_ok && radial_ok && radial_err < 1e-6 &&
             conv128 && vs.inadmissible == 0 && vs.max_residual < 1e-3 &&
             dt < 120,
         detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  if (failures == 0)
    std::printf("acceptance: all 8 criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  return failures;
}
