#include "sasaki/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sasaki {

using json = nlohmann::json;

json point_to_json(const ChartPoint& p) {
  json z = json::array();
  for (const Cx& c : p.z) z.push_back({c.real(), c.imag()});
  return {{"x", p.x}, {"z", std::move(z)}};
}

json newton_report_to_json(const NewtonReport& r) {
  return {{"iterations", r.iterations},
          {"converged", r.converged},
          {"final_residual", r.final_residual},
          {"residual_history", r.history}};
}

json classify_to_json(const PotentialSpec& spec, const ClassifySummary& s,
                      std::uint64_t seed) {
  json pts = json::array();
  for (const auto& pv : s.points)
    pts.push_back({{"point", point_to_json(pv.point)},
                   {"max_abs", pv.max_abs}});
  return {{"potential", spec_to_json(spec)},
          {"k", spec.k},
          {"lambda", s.lambda},
          {"basis", kBasisConvention},
          {"seed", seed},
          {"tolerance", s.tol},
          {"tier", spec.analytic() ? "analytic" : "fd"},
          {"points", std::move(pts)},
          {"max_abs", s.max_abs},
          {"verdict", s.einstein ? "Einstein" : "NotEinstein"}};
}

json verify_rows_to_json(const PotentialSpec& spec,
                         const std::vector<VerifyRow>& rows,
                         std::uint64_t seed, double tol,
                         double nijenhuis_tol) {
  json points = json::array();
  AxiomResiduals worst;
  double worst_deta = 0, worst_frob = 0, worst_kill = 0;
  for (const auto& r : rows) {
    points.push_back({{"point", point_to_json(r.point)},
                      {"axiom1", r.axioms.phi_square},
                      {"axiom2", r.axioms.eta_xi},
                      {"axiom3", r.axioms.compatibility},
                      {"axiom4", r.axioms.xi_metric_dual},
                      {"axiom5", r.axioms.nijenhuis},
                      {"axiom6", r.axioms.fundamental},
                      {"deta", r.frame.deta},
                      {"frobenius", r.frame.frobenius},
                      {"killing", r.killing}});
    worst.phi_square = std::max(worst.phi_square, r.axioms.phi_square);
    worst.eta_xi = std::max(worst.eta_xi, r.axioms.eta_xi);
    worst.compatibility = std::max(worst.compatibility, r.axioms.compatibility);
    worst.xi_metric_dual =
        std::max(worst.xi_metric_dual, r.axioms.xi_metric_dual);
    worst.nijenhuis = std::max(worst.nijenhuis, r.axioms.nijenhuis);
    worst.fundamental = std::max(worst.fundamental, r.axioms.fundamental);
    worst_deta = std::max(worst_deta, r.frame.deta);
    worst_frob = std::max(worst_frob, r.frame.frobenius);
    worst_kill = std::max(worst_kill, r.killing);
  }
  const bool pass =
      worst.phi_square < tol && worst.eta_xi < tol &&
      worst.compatibility < tol && worst.xi_metric_dual < tol &&
      worst.nijenhuis < nijenhuis_tol && worst.fundamental < tol &&
      worst_deta < tol && worst_frob < nijenhuis_tol && worst_kill < tol;
  return {{"potential", spec_to_json(spec)},
          {"k", spec.k},
          {"basis", kBasisConvention},
          {"seed", seed},
          {"tolerance", tol},
          {"nijenhuis_tolerance", nijenhuis_tol},
          {"tier", spec.analytic() ? "analytic" : "fd"},
          {"points", std::move(points)},
          {"summary",
           {{"max_axiom1", worst.phi_square},
            {"max_axiom2", worst.eta_xi},
            {"max_axiom3", worst.compatibility},
            {"max_axiom4", worst.xi_metric_dual},
            {"max_axiom5", worst.nijenhuis},
            {"max_axiom6", worst.fundamental},
            {"max_deta", worst_deta},
            {"max_frobenius", worst_frob},
            {"max_killing", worst_kill},
            {"pass", pass}}}};
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

void write_grid_csv(const std::string& path, const GridField& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "i,j,re_z,im_z,K\n";
  char buf[160];
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%.17g\n", i, j,
                    grid.re(i), grid.im(j), grid.at(i, j));
      out << buf;
    }
}

json grid_header_json(const GridField& grid, double c, int k) {
  return {{"nx", grid.nx},
          {"ny", grid.ny},
          {"spacing", grid.h},
          {"domain",
           {{"x0", grid.x0},
            {"y0", grid.y0},
            {"x1", grid.re(grid.nx - 1)},
            {"y1", grid.im(grid.ny - 1)}}},
          {"c", c},
          {"k", k}};
}

void write_radial_csv(const std::string& path, const RadialProfile& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "s,u,du,d2u\n";
  char buf[160];
  for (size_t i = 0; i < p.s.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", p.s[i],
                  p.u[i], p.up[i], p.upp[i]);
    out << buf;
  }
}

}  // namespace sasaki
