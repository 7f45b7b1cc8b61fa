// Command-line front end: verification campaigns, curvature dumps, Einstein
// classification, Monge-Ampere solves, gauge checks.
//
// Exit codes: 0 pass, 1 residual failure, 2 inadmissible input,
// 3 non-convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sasaki/curvature.hpp"
#include "sasaki/einstein.hpp"
#include "sasaki/fd_jet.hpp"
#include "sasaki/parallel.hpp"
#include "sasaki/potential.hpp"
#include "sasaki/report.hpp"
#include "sasaki/solver.hpp"
#include "sasaki/structure.hpp"

using json = nlohmann::json;
using namespace sasaki;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitResidual = 1;
constexpr int kExitInadmissible = 2;
constexpr int kExitNonConvergence = 3;

struct CommonOpts {
  std::string potential = "sphere";
  int k = 1;
  int q = 1, n = 1;
  double c = 0.5;
  std::string spec;  // inline JSON or @path
  int points = 50;
  double radius = 1.0;
  std::uint64_t seed = 20240817;
  double tol = -1.0;  // negative: pick the tier default
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_plan = true) {
  cmd->add_option("--potential", o.potential,
                  "sphere | product | quadratic | polynomial");
  cmd->add_option("--k", o.k, "complex dimension");
  cmd->add_option("--q", o.q, "product potential: first block size");
  cmd->add_option("--n", o.n, "product potential: second block size");
  cmd->add_option("--c", o.c, "quadratic coefficient");
  cmd->add_option("--spec", o.spec, "potential spec JSON (inline or @file)");
  if (with_plan) {
    cmd->add_option("--points", o.points, "sample point count");
    cmd->add_option("--radius", o.radius, "sample ball radius");
  }
  cmd->add_option("--seed", o.seed, "sample/probe seed");
  cmd->add_option("--tol", o.tol, "override the tier tolerance");
  cmd->add_option("--out", o.out, "report JSON path");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidSpecError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PotentialSpec resolve_potential(const CommonOpts& o) {
  if (!o.spec.empty()) {
    const std::string text =
        o.spec.front() == '@' ? slurp(o.spec.substr(1)) : o.spec;
    return spec_from_json(json::parse(text));
  }
  if (o.potential == "sphere") return PotentialSpec::sphere(o.k);
  if (o.potential == "product") return PotentialSpec::product(o.q, o.n);
  if (o.potential == "quadratic") return PotentialSpec::quadratic(o.k, o.c);
  if (o.potential == "polynomial")
    throw InvalidSpecError("polynomial potentials need --spec JSON");
  throw InvalidSpecError("unknown potential kind: " + o.potential);
}

void emit(const std::string& path, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty())
    std::cout << text;
  else
    write_text(path, text);
}

double tier_tol(const PotentialSpec& spec, const CommonOpts& o, double analytic,
                double fd) {
  if (o.tol > 0.0) return o.tol;
  return spec.analytic() ? analytic : fd;
}

int cmd_verify(const CommonOpts& o) {
  const PotentialSpec spec = resolve_potential(o);
  const double tol = tier_tol(spec, o, 1e-10, 1e-4);
  const double nij_tol = spec.analytic() ? 1e-8 : 1e-3;
  const auto pts = sample_ball(spec.k, o.points, o.radius, o.seed);
  const auto probes = probe_vectors(spec.k, o.seed ^ 0x9e3779b97f4a7c15ull);

  std::vector<VerifyRow> rows(pts.size());
  std::vector<std::exception_ptr> errs(pts.size());
  par::for_each(static_cast<std::ptrdiff_t>(pts.size()), [&](std::ptrdiff_t i) {
    try {
      const WirtingerJet jet = jet_for(spec, pts[i], 4);
      const StructurePack pack = build_structure(jet);
      rows[i].point = pts[i];
      rows[i].axioms = axiom_residuals(pack, jet, probes);
      rows[i].frame = frame_residuals(spec, pts[i]);
      rows[i].killing = killing_residual(spec, pts[i]);
    } catch (...) {
      errs[i] = std::current_exception();
    }
  });
  for (const auto& e : errs)
    if (e) std::rethrow_exception(e);

  const json rep = verify_rows_to_json(spec, rows, o.seed, tol, nij_tol);
  emit(o.out, rep);
  return rep.at("summary").at("pass").get<bool>() ? kExitPass : kExitResidual;
}

int cmd_einstein(const CommonOpts& o) {
  const PotentialSpec spec = resolve_potential(o);
  const double tol = tier_tol(spec, o, 1e-8, 1e-4);
  SamplePlan plan{o.points, o.radius, o.seed};
  const ClassifySummary s = classify(spec, plan, tol);
  emit(o.out, classify_to_json(spec, s, o.seed));
  return s.einstein ? kExitPass : kExitResidual;
}

const char* basis_label(const Basis& b, int mu, std::string& buf) {
  if (mu == 0) return "x";
  buf = (b.is_hol(mu) ? "z" : "zb") + std::to_string(b.coord(mu) + 1);
  return buf.c_str();
}

int cmd_curvature(const CommonOpts& o, const std::string& csv_path) {
  const PotentialSpec spec = resolve_potential(o);
  const auto pts = sample_ball(spec.k, o.points, o.radius, o.seed);
  const Basis B{spec.k};
  const int n = B.dim();

  json out_pts = json::array();
  std::ostringstream csv;
  csv << "point,tensor,mu,nu,rho,sigma,re,im\n";
  std::string l1, l2, l3, l4;
  for (size_t pi = 0; pi < pts.size(); ++pi) {
    const WirtingerJet jet = jet_for(spec, pts[pi], 4);
    const StructurePack pack = build_structure(jet);
    const CurvatureTensors ct = curvature_bundle(jet, pack);
    json jm = json::array(), jginv = json::array(), jric = json::array();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        jm.push_back({pack.g(a, b).real(), pack.g(a, b).imag()});
        jginv.push_back({pack.g_inv(a, b).real(), pack.g_inv(a, b).imag()});
        jric.push_back({ct.ricci(a, b).real(), ct.ricci(a, b).imag()});
        csv << pi << ",g," << basis_label(B, a, l1) << ","
            << basis_label(B, b, l2) << ",,," << pack.g(a, b).real() << ","
            << pack.g(a, b).imag() << "\n";
        csv << pi << ",ricci," << basis_label(B, a, l1) << ","
            << basis_label(B, b, l2) << ",,," << ct.ricci(a, b).real() << ","
            << ct.ricci(a, b).imag() << "\n";
      }
    json jriem = json::array();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            const Cx v = ct.riemann(a, b, c, d);
            jriem.push_back({v.real(), v.imag()});
            if (std::abs(v) > 0)
              csv << pi << ",riemann," << basis_label(B, a, l1) << ","
                  << basis_label(B, b, l2) << "," << basis_label(B, c, l3)
                  << "," << basis_label(B, d, l4) << "," << v.real() << ","
                  << v.imag() << "\n";
          }
    out_pts.push_back(
        {{"point", point_to_json(pts[pi])},
         {"g", std::move(jm)},
         {"g_inv", std::move(jginv)},
         {"ricci", std::move(jric)},
         {"riemann", std::move(jriem)},
         {"scalar", {ct.scalar.real(), ct.scalar.imag()}},
         {"weyl_max_abs", ct.weyl.max_abs}});
  }
  json rep = {{"potential", spec_to_json(spec)},
              {"k", spec.k},
              {"basis", kBasisConvention},
              {"index_order", "x, z1..zk, zb1..zbk (row-major flattening)"},
              {"seed", o.seed},
              {"tier", spec.analytic() ? "analytic" : "fd"},
              {"points", std::move(out_pts)}};
  emit(o.out, rep);
  if (!csv_path.empty()) write_text(csv_path, csv.str());
  return kExitPass;
}

int cmd_gauge_check(const CommonOpts& o, double are, double aim, double bre,
                    double bim) {
  const PotentialSpec spec = resolve_potential(o);
  const double tol = o.tol > 0.0 ? o.tol : 1e-12;
  const int k = spec.k;

  // f(z) = alpha z^1 + beta (z^1)^2; seeded when not given explicitly
  Cx alpha{are, aim}, beta{bre, bim};
  if (alpha == Cx{} && beta == Cx{}) {
    Rng rng(o.seed + 7);
    alpha = Cx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    beta = Cx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
  }
  GaugeMap gauge;
  gauge.k = k;
  {
    std::vector<int> e1(k, 0), e2(k, 0);
    e1[0] = 1;
    e2[0] = 2;
    gauge.terms = {{e1, alpha}, {e2, beta}};
  }
  const auto pts = sample_ball(k, o.points, o.radius, o.seed);
  const GaugeInvarianceReport rep = check_gauge_invariance(spec, gauge, pts);
  const bool pass = rep.pass(tol);
  emit(o.out, json{{"potential", spec_to_json(spec)},
                   {"k", k},
                   {"basis", kBasisConvention},
                   {"seed", o.seed},
                   {"tier", spec.analytic() ? "analytic" : "fd"},
                   {"gauge",
                    {{"alpha", {alpha.real(), alpha.imag()}},
                     {"beta", {beta.real(), beta.imag()}}}},
                   {"tolerance", tol},
                   {"max_mixed_jet_diff", rep.mixed_jet},
                   {"max_g_diff", rep.g},
                   {"max_phi_diff", rep.phi},
                   {"max_eta_diff", rep.eta},
                   {"max_einstein_diff", rep.einstein},
                   {"max_shift_imag", rep.shift_imag},
                   {"pass", pass}});
  return pass ? kExitPass : kExitResidual;
}

struct SolveOpts {
  int grid = 64;
  double half_width = 0.5;
  double cc = 1.0;
  std::string boundary = "sphere";
  double boundary_value = 0.0;
  int max_iters = 50;
  double tol = 1e-10;
  double verify_tol = -1.0;  // default: 25 h^2 (verification stencil tier)
  std::string out, out_grid;
  std::uint64_t seed = 20240817;
};

int cmd_solve(SolveOpts so) {
  const int N = so.grid;
  const double h = 2.0 * so.half_width / (N - 1);
  if (so.verify_tol <= 0.0) so.verify_tol = 25.0 * h * h;
  std::function<double(double, double)> bnd;
  if (so.boundary == "sphere")
    bnd = sphere_manufactured_k1;
  else if (so.boundary == "constant")
    bnd = [&](double, double) { return so.boundary_value; };
  else
    throw InvalidSpecError("unknown boundary: " + so.boundary);

  GridField grid =
      GridField::make(N, N, -so.half_width, -so.half_width, h, bnd, 0.0);
  NewtonConfig cfg;
  cfg.max_iters = so.max_iters;
  cfg.tol = so.tol;
  const NewtonReport rep = solve_liouville_k1(grid, so.cc, cfg);

  json out = {{"command", "solve"},
              {"k", 1},
              {"c", so.cc},
              {"basis", kBasisConvention},
              {"seed", so.seed},
              {"boundary", so.boundary},
              {"grid", grid_header_json(grid, so.cc, 1)},
              {"newton", newton_report_to_json(rep)}};
  if (rep.converged) {
    const VerifySummary vs = verify_solution(grid, 4);
    out["verification"] = {{"max_residual", vs.max_residual},
                           {"samples", vs.samples},
                           {"inadmissible", vs.inadmissible},
                           {"tolerance", so.verify_tol},
                           {"pass", vs.einstein(so.verify_tol)}};
    if (!so.out_grid.empty()) {
      write_grid_csv(so.out_grid, grid);
      out["grid_csv"] = so.out_grid;
    }
    emit(so.out, out);
    return vs.einstein(so.verify_tol) ? kExitPass : kExitResidual;
  }
  emit(so.out, out);
  return kExitNonConvergence;
}

struct RadialOpts {
  int k = 1;
  double cc = 1.0;
  double u0 = 0.0;
  double smax = 3.0;
  int nodes = 4001;
  int max_iters = 50;
  double tol = 1e-10;
  double verify_tol = 1e-4;
  std::string out, out_profile;
  std::uint64_t seed = 20240817;
};

int cmd_radial(const RadialOpts& ro) {
  NewtonConfig cfg;
  cfg.max_iters = ro.max_iters;
  cfg.tol = ro.tol;
  RadialResult rr;
  try {
    rr = solve_radial(ro.k, ro.cc, ro.smax, ro.nodes, ro.u0, cfg);
  } catch (const NonConvergenceError& e) {
    emit(ro.out, json{{"command", "radial"},
                      {"k", ro.k},
                      {"c", ro.cc},
                      {"error", e.what()}});
    return kExitNonConvergence;
  }
  json out = {{"command", "radial"},
              {"k", ro.k},
              {"c", ro.cc},
              {"u0", ro.u0},
              {"smax", ro.smax},
              {"nodes", ro.nodes},
              {"basis", kBasisConvention},
              {"seed", ro.seed},
              {"newton", newton_report_to_json(rr.report)}};
  if (!rr.report.converged) {
    emit(ro.out, out);
    return kExitNonConvergence;
  }
  std::vector<double> samples;
  for (double s : {0.5, 1.0, 2.0})
    if (s < ro.smax - 0.5) samples.push_back(s);
  const VerifySummary vs = verify_solution(rr.profile, samples);
  out["verification"] = {{"sample_s", samples},
                         {"max_residual", vs.max_residual},
                         {"inadmissible", vs.inadmissible},
                         {"tolerance", ro.verify_tol},
                         {"pass", vs.einstein(ro.verify_tol)}};
  if (!ro.out_profile.empty()) {
    write_radial_csv(ro.out_profile, rr.profile);
    out["profile_csv"] = ro.out_profile;
  }
  emit(ro.out, out);
  return vs.einstein(ro.verify_tol) ? kExitPass : kExitResidual;
}

// --config JSON: fills any option the command line left untouched
void apply_config(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  const json cfg = json::parse(slurp(path));
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr)
      throw InvalidSpecError("unknown config key: " + key);
    if (opt->count() > 0) continue;  // explicit flags win
    std::string text =
        value.is_string() ? value.get<std::string>() : value.dump();
    opt->add_result(text);
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical engine for potential-generated contact metric "
               "structures"};
  app.require_subcommand(1);

  CommonOpts vo, eo, co, go;
  std::string v_cfg, e_cfg, c_cfg, g_cfg, s_cfg, r_cfg;
  std::string curvature_csv;
  double g_are = 0, g_aim = 0, g_bre = 0, g_bim = 0;
  SolveOpts so;
  RadialOpts ro;

  CLI::App* verify = app.add_subcommand("verify", "structure axiom residuals");
  add_common(verify, vo);
  verify->add_option("--config", v_cfg, "JSON config file");

  CLI::App* einstein =
      app.add_subcommand("einstein", "Einstein condition classification");
  add_common(einstein, eo);
  einstein->add_option("--config", e_cfg, "JSON config file");

  CLI::App* curvature =
      app.add_subcommand("curvature", "curvature tensor dumps");
  add_common(curvature, co);
  curvature->add_option("--csv", curvature_csv, "flattened CSV dump path");
  curvature->add_option("--config", c_cfg, "JSON config file");

  CLI::App* gauge =
      app.add_subcommand("gauge-check", "gauge invariance of the structure");
  add_common(gauge, go);
  gauge->add_option("--alpha-re", g_are, "Re alpha for f = alpha z + beta z^2");
  gauge->add_option("--alpha-im", g_aim, "Im alpha");
  gauge->add_option("--beta-re", g_bre, "Re beta");
  gauge->add_option("--beta-im", g_bim, "Im beta");
  gauge->add_option("--config", g_cfg, "JSON config file");

  CLI::App* solve =
      app.add_subcommand("solve", "k=1 Dirichlet Monge-Ampere solve");
  solve->add_option("--grid", so.grid, "grid size per side");
  solve->add_option("--domain", so.half_width, "half width of the square");
  solve->add_option("--cc", so.cc, "Monge-Ampere constant c");
  solve->add_option("--boundary", so.boundary, "sphere | constant");
  solve->add_option("--boundary-value", so.boundary_value,
                    "value for constant boundary");
  solve->add_option("--max-iters", so.max_iters, "Newton iteration cap");
  solve->add_option("--tol", so.tol, "Newton sup-norm tolerance");
  solve->add_option("--verify-tol", so.verify_tol, "verification tolerance");
  solve->add_option("--out", so.out, "report JSON path");
  solve->add_option("--out-grid", so.out_grid, "grid CSV path");
  solve->add_option("--seed", so.seed, "seed recorded in the report");
  solve->add_option("--config", s_cfg, "JSON config file");

  CLI::App* radial = app.add_subcommand("radial", "radial-ansatz solve");
  radial->add_option("--k", ro.k, "complex dimension");
  radial->add_option("--cc", ro.cc, "Monge-Ampere constant c");
  radial->add_option("--u0", ro.u0, "u(0)");
  radial->add_option("--smax", ro.smax, "radial domain end in s = |z|^2");
  radial->add_option("--nodes", ro.nodes, "collocation nodes");
  radial->add_option("--max-iters", ro.max_iters, "Newton iteration cap");
  radial->add_option("--tol", ro.tol, "Newton sup-norm tolerance");
  radial->add_option("--verify-tol", ro.verify_tol, "verification tolerance");
  radial->add_option("--out", ro.out, "report JSON path");
  radial->add_option("--out-profile", ro.out_profile, "profile CSV path");
  radial->add_option("--seed", ro.seed, "seed recorded in the report");
  radial->add_option("--config", r_cfg, "JSON config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      apply_config(verify, v_cfg);
      return cmd_verify(vo);
    }
    if (einstein->parsed()) {
      apply_config(einstein, e_cfg);
      return cmd_einstein(eo);
    }
    if (curvature->parsed()) {
      apply_config(curvature, c_cfg);
      return cmd_curvature(co, curvature_csv);
    }
    if (gauge->parsed()) {
      apply_config(gauge, g_cfg);
      return cmd_gauge_check(go, g_are, g_aim, g_bre, g_bim);
    }
    if (solve->parsed()) {
      apply_config(solve, s_cfg);
      return cmd_solve(so);
    }
    if (radial->parsed()) {
      apply_config(radial, r_cfg);
      return cmd_radial(ro);
    }
  } catch (const NonConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const HessianNotPositiveDefiniteError& e) {
    std::cerr << "inadmissible potential: " << e.what() << "\n";
    return kExitInadmissible;
  } catch (const SingularHessianError& e) {
    std::cerr << "inadmissible potential: " << e.what() << "\n";
    return kExitInadmissible;
  } catch (const InvalidSpecError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInadmissible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInadmissible;
  }
  return kExitInadmissible;
}
