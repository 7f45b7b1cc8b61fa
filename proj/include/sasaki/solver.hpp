#pragma once

#include <functional>
#include <vector>

#include "sasaki/types.hpp"

namespace sasaki {

// Real potential samples on a rectangular grid over (Re z, Im z) for k = 1.
// Node (i,j) sits at z = (x0 + i*h) + i(y0 + j*h); the rim rows carry
// Dirichlet data and stay fixed during solves.
struct GridField {
  int nx = 0, ny = 0;
  double x0 = 0.0, y0 = 0.0, h = 0.0;
  std::vector<double> v;

  double& at(int i, int j) { return v[static_cast<size_t>(j) * nx + i]; }
  double at(int i, int j) const { return v[static_cast<size_t>(j) * nx + i]; }
  bool boundary(int i, int j) const {
    return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
  }
  double re(int i) const { return x0 + i * h; }
  double im(int j) const { return y0 + j * h; }

  static GridField make(int nx, int ny, double x0, double y0, double h,
                        const std::function<double(double, double)>& boundary,
                        double interior_init = 0.0);
  static GridField from_function(
      int nx, int ny, double x0, double y0, double h,
      const std::function<double(double, double)>& f);
};

struct NewtonConfig {
  double tol = 1e-10;          // sup-norm residual target
  int max_iters = 50;
  double cg_tol_rel = 1e-10;
  int cg_max_iters = 100000;
};

struct NewtonReport {
  int iterations = 0;
  std::vector<double> history;  // sup-norm residual per accepted iterate
  bool converged = false;
  double final_residual = 0.0;
};

// Damped Newton for the 5-point discretization of
// (1/4) lap K = c exp(-4K) with Dirichlet boundary; each step solves the
// symmetric positive linearized system by Jacobi-preconditioned CG.
// Mutates the interior of `grid`.
NewtonReport solve_liouville_k1(GridField& grid, double c,
                                const NewtonConfig& cfg = {});

// exact solution used for manufactured boundaries: (1/2)log(1+|z|^2) +
// (1/4)log 2 solves K_{z zbar} = exp(-4K)
double sphere_manufactured_k1(double re, double im);

// Radial profile u(s), K = u(|z|^2): (u')^{k-1}(u' + s u'') =
// c exp(-2(k+1)u), u(0) fixed, u'(0) = (c exp(-2(k+1)u(0)))^{1/k}.
struct RadialProfile {
  int k = 1;
  double c = 1.0;
  double smax = 0.0;
  std::vector<double> s, u, up, upp;

  // quintic local Lagrange interpolation of u at s = sq
  double value(double sq) const;
};

struct RadialResult {
  RadialProfile profile;
  NewtonReport report;
};

RadialResult solve_radial(int k, double c, double smax, int nodes, double u0,
                          const NewtonConfig& cfg = {});

// Einstein residual of a discrete solution, per node through plain
// grid-aligned finite-difference jets (interior margin of 4 nodes).
struct VerifySummary {
  double max_residual = 0.0;
  int samples = 0;
  int inadmissible = 0;  // nodes where the discrete Hessian lost positivity
  bool einstein(double tol) const {
    return inadmissible == 0 && max_residual < tol;
  }
};

VerifySummary verify_solution(const GridField& grid, int margin = 4);
VerifySummary verify_solution(const RadialProfile& profile,
                              const std::vector<double>& sample_s);

}  // namespace sasaki
