#include "sasaki/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sasaki/einstein.hpp"
#include "sasaki/fd_jet.hpp"
#include "sasaki/linalg.hpp"
#include "sasaki/parallel.hpp"

namespace sasaki {

GridField GridField::make(int nx, int ny, double x0, double y0, double h,
                          const std::function<double(double, double)>& bnd,
                          double interior_init) {
  if (nx < 8 || ny < 8) throw InvalidSpecError("grid requires nx, ny >= 8");
  GridField g;
  g.nx = nx;
  g.ny = ny;
  g.x0 = x0;
  g.y0 = y0;
  g.h = h;
  g.v.assign(static_cast<size_t>(nx) * ny, interior_init);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (g.boundary(i, j)) g.at(i, j) = bnd(g.re(i), g.im(j));
  return g;
}

GridField GridField::from_function(
    int nx, int ny, double x0, double y0, double h,
    const std::function<double(double, double)>& f) {
  GridField g = make(nx, ny, x0, y0, h, f, 0.0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) g.at(i, j) = f(g.re(i), g.im(j));
  return g;
}

double sphere_manufactured_k1(double re, double im) {
  return 0.5 * std::log(1.0 + re * re + im * im) + 0.25 * std::log(2.0);
}

namespace {

// Interior-node helpers for the Liouville solve. Residual
// F = (1/4) lap_h K - c exp(-4K); the CG system is A = -F' =
// -(1/4) lap_h - 4c exp(-4K), positive on the solved configurations.
struct LiouvilleOps {
  const GridField& grid;
  double c;
  int mi, mj;  // interior extents

  LiouvilleOps(const GridField& g, double c_) : grid(g), c(c_) {
    mi = g.nx - 2;
    mj = g.ny - 2;
  }
  std::ptrdiff_t size() const {
    return static_cast<std::ptrdiff_t>(mi) * mj;
  }
  int gi(std::ptrdiff_t r) const { return 1 + static_cast<int>(r % mi); }
  int gj(std::ptrdiff_t r) const { return 1 + static_cast<int>(r / mi); }

  void residual(const std::vector<double>& K, std::vector<double>& F) const {
    const double ih2 = 1.0 / (grid.h * grid.h);
    const int nx = grid.nx;
    par::for_each(size(), [&](std::ptrdiff_t r) {
      const int i = gi(r), j = gj(r);
      const size_t idx = static_cast<size_t>(j) * nx + i;
      const double lap = (K[idx - 1] + K[idx + 1] + K[idx - nx] +
                          K[idx + nx] - 4.0 * K[idx]) *
                         ih2;
      F[r] = 0.25 * lap - c * std::exp(-4.0 * K[idx]);
    });
  }

  // y = A p with p an interior vector extended by zero on the rim
  void apply(const std::vector<double>& K, const std::vector<double>& p,
             std::vector<double>& y) const {
    const double ih2 = 1.0 / (grid.h * grid.h);
    const int nx = grid.nx;
    par::for_each(size(), [&](std::ptrdiff_t r) {
      const int i = gi(r), j = gj(r);
      const size_t idx = static_cast<size_t>(j) * nx + i;
      auto pv = [&](int ii, int jj) -> double {
        if (ii <= 0 || jj <= 0 || ii >= grid.nx - 1 || jj >= grid.ny - 1)
          return 0.0;
        return p[static_cast<size_t>(jj - 1) * mi + (ii - 1)];
      };
      const double lap = (pv(i - 1, j) + pv(i + 1, j) + pv(i, j - 1) +
                          pv(i, j + 1) - 4.0 * pv(i, j)) *
                         ih2;
      y[r] = -0.25 * lap - 4.0 * c * std::exp(-4.0 * K[idx]) * pv(i, j);
    });
  }

  void diag(const std::vector<double>& K, std::vector<double>& d) const {
    const double ih2 = 1.0 / (grid.h * grid.h);
    const int nx = grid.nx;
    par::for_each(size(), [&](std::ptrdiff_t r) {
      const size_t idx = static_cast<size_t>(gj(r)) * nx + gi(r);
      d[r] = ih2 - 4.0 * c * std::exp(-4.0 * K[idx]);
    });
  }
};

// Jacobi-preconditioned CG on A x = b; returns false on loss of positive
// curvature (the caller falls back to a preconditioned gradient step).
bool pcg(const LiouvilleOps& ops, const std::vector<double>& K,
         const std::vector<double>& b, std::vector<double>& x,
         const NewtonConfig& cfg) {
  const std::ptrdiff_t n = ops.size();
  std::vector<double> r = b, z(n), p(n), ap(n), d(n);
  ops.diag(K, d);
  for (std::ptrdiff_t i = 0; i < n; ++i)
    if (d[i] <= 0.0) d[i] = 1.0;
  x.assign(n, 0.0);
  par::for_each_light(n, [&](std::ptrdiff_t i) { z[i] = r[i] / d[i]; });
  p = z;
  double rz = par::dot(r, z);
  const double b2 = std::sqrt(par::dot(b, b));
  if (b2 == 0.0) return true;
  for (int it = 0; it < cfg.cg_max_iters; ++it) {
    ops.apply(K, p, ap);
    const double pap = par::dot(p, ap);
    if (pap <= 0.0) return false;
    const double alpha = rz / pap;
    par::for_each_light(n, [&](std::ptrdiff_t i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    });
    if (std::sqrt(par::dot(r, r)) <= cfg.cg_tol_rel * b2) return true;
    par::for_each_light(n, [&](std::ptrdiff_t i) { z[i] = r[i] / d[i]; });
    const double rz_new = par::dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    par::for_each_light(n, [&](std::ptrdiff_t i) { p[i] = z[i] + beta * p[i]; });
  }
  throw NonConvergenceError("CG did not reach its tolerance");
}

}  // namespace

NewtonReport solve_liouville_k1(GridField& grid, double c,
                                const NewtonConfig& cfg) {
  if (c < 0.0) throw InvalidSpecError("solve_liouville_k1 requires c >= 0");
  LiouvilleOps ops(grid, c);
  const std::ptrdiff_t n = ops.size();
  std::vector<double> K = grid.v, F(n), delta(n), Ktrial;

  NewtonReport rep;
  ops.residual(K, F);
  double res = par::sup_norm(F);
  rep.history.push_back(res);

  for (int it = 0; it < cfg.max_iters && res >= cfg.tol; ++it) {
    // F' delta = -F  <=>  A delta = F with A = -F'
    const bool pd = pcg(ops, K, F, delta, cfg);
    if (!pd) {
      std::vector<double> d(n);
      ops.diag(K, d);
      par::for_each(n, [&](std::ptrdiff_t i) {
        delta[i] = F[i] / std::max(d[i], 1.0);
      });
    }
    double alpha = 1.0;
    bool accepted = false;
    std::vector<double> Ft(n);
    for (int back = 0; back < 30; ++back) {
      Ktrial = K;
      par::for_each_light(n, [&](std::ptrdiff_t r) {
        Ktrial[static_cast<size_t>(ops.gj(r)) * grid.nx + ops.gi(r)] +=
            alpha * delta[r];
      });
      ops.residual(Ktrial, Ft);
      const double res_t = par::sup_norm(Ft);
      if (std::isfinite(res_t) && res_t < res * (1.0 - 1e-4 * alpha)) {
        K.swap(Ktrial);
        F.swap(Ft);
        res = res_t;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    ++rep.iterations;
    if (!accepted) break;
    rep.history.push_back(res);
  }

  rep.final_residual = res;
  rep.converged = res < cfg.tol;
  grid.v = K;
  return rep;
}

// ---------------------------------------------------------------------------
// Radial solve: first-order system (u, v = u') with trapezoidal collocation.
// u'' = w(s, u, v) = (c e^{-2(k+1)u} v^{1-k} - v)/s, w(0,u,v) = -2 v^2.

namespace {

struct RadialOps {
  int k;
  double c, h;
  int nodes;
  double u0, g0;

  double w(double s, double u, double v) const {
    if (s == 0.0) return -2.0 * v * v;
    return (c * std::exp(-2.0 * (k + 1) * u) * std::pow(v, 1 - k) - v) / s;
  }
  double dw_du(double s, double u, double v) const {
    if (s == 0.0) return 0.0;
    return -2.0 * (k + 1) * c * std::exp(-2.0 * (k + 1) * u) *
           std::pow(v, 1 - k) / s;
  }
  double dw_dv(double s, double u, double v) const {
    if (s == 0.0) return -4.0 * v;
    return ((1 - k) * c * std::exp(-2.0 * (k + 1) * u) * std::pow(v, -k) -
            1.0) /
           s;
  }

  // y interleaved (u_0, v_0, ..., u_{N-1}, v_{N-1})
  void residual(const std::vector<double>& y, std::vector<double>& r) const {
    r[0] = y[0] - u0;
    r[1] = y[1] - g0;
    for (int i = 0; i + 1 < nodes; ++i) {
      const double si = i * h, sj = (i + 1) * h;
      const double ui = y[2 * i], vi = y[2 * i + 1];
      const double uj = y[2 * i + 2], vj = y[2 * i + 3];
      r[2 * i + 2] = uj - ui - 0.5 * h * (vi + vj);
      r[2 * i + 3] = vj - vi - 0.5 * h * (w(si, ui, vi) + w(sj, uj, vj));
    }
  }

  BandedMatrix jacobian(const std::vector<double>& y) const {
    BandedMatrix J(2 * nodes, 3, 1);
    J.add(0, 0, 1.0);
    J.add(1, 1, 1.0);
    for (int i = 0; i + 1 < nodes; ++i) {
      const double si = i * h, sj = (i + 1) * h;
      const double ui = y[2 * i], vi = y[2 * i + 1];
      const double uj = y[2 * i + 2], vj = y[2 * i + 3];
      const int r1 = 2 * i + 2, r2 = 2 * i + 3;
      J.add(r1, 2 * i, -1.0);
      J.add(r1, 2 * i + 1, -0.5 * h);
      J.add(r1, 2 * i + 2, 1.0);
      J.add(r1, 2 * i + 3, -0.5 * h);
      J.add(r2, 2 * i, -0.5 * h * dw_du(si, ui, vi));
      J.add(r2, 2 * i + 1, -1.0 - 0.5 * h * dw_dv(si, ui, vi));
      J.add(r2, 2 * i + 2, -0.5 * h * dw_du(sj, uj, vj));
      J.add(r2, 2 * i + 3, 1.0 - 0.5 * h * dw_dv(sj, uj, vj));
    }
    return J;
  }
};

}  // namespace

RadialResult solve_radial(int k, double c, double smax, int nodes, double u0,
                          const NewtonConfig& cfg) {
  if (k < 1) throw InvalidSpecError("solve_radial requires k >= 1");
  if (!(c > 0.0)) throw InvalidSpecError("solve_radial requires c > 0");
  if (nodes < 16) throw InvalidSpecError("solve_radial requires >= 16 nodes");

  RadialOps ops;
  ops.k = k;
  ops.c = c;
  ops.h = smax / (nodes - 1);
  ops.nodes = nodes;
  ops.u0 = u0;
  ops.g0 = std::pow(c * std::exp(-2.0 * (k + 1) * u0), 1.0 / k);

  // initial profile with the right slope at 0 and a 1/(1+s) decay
  std::vector<double> y(2 * nodes);
  for (int i = 0; i < nodes; ++i) {
    const double s = i * ops.h;
    y[2 * i] = u0 + ops.g0 * std::log1p(s);
    y[2 * i + 1] = ops.g0 / (1.0 + s);
  }

  std::vector<double> r(2 * nodes), rt(2 * nodes);
  ops.residual(y, r);
  double res = par::serial_sup_norm(r.data(), r.size());
  NewtonReport rep;
  rep.history.push_back(res);

  for (int it = 0; it < cfg.max_iters && res >= cfg.tol; ++it) {
    BandedMatrix J = ops.jacobian(y);
    std::vector<double> rhs(r.size());
    for (size_t i = 0; i < r.size(); ++i) rhs[i] = -r[i];
    std::vector<double> delta = J.solve(std::move(rhs));
    double alpha = 1.0;
    bool accepted = false;
    for (int back = 0; back < 30; ++back) {
      std::vector<double> yt = y;
      for (size_t i = 0; i < y.size(); ++i) yt[i] += alpha * delta[i];
      ops.residual(yt, rt);
      const double res_t = par::serial_sup_norm(rt.data(), rt.size());
      if (std::isfinite(res_t) && res_t < res * (1.0 - 1e-4 * alpha)) {
        y.swap(yt);
        r.swap(rt);
        res = res_t;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    ++rep.iterations;
    if (!accepted) break;
    rep.history.push_back(res);
  }
  rep.final_residual = res;
  rep.converged = res < cfg.tol;
  if (!rep.converged) return {RadialProfile{}, rep};

  RadialResult out;
  out.report = rep;
  RadialProfile& pr = out.profile;
  pr.k = k;
  pr.c = c;
  pr.smax = smax;
  pr.s.resize(nodes);
  pr.u.resize(nodes);
  pr.up.resize(nodes);
  pr.upp.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    pr.s[i] = i * ops.h;
    pr.u[i] = y[2 * i];
    pr.up[i] = y[2 * i + 1];
    pr.upp[i] = ops.w(pr.s[i], pr.u[i], pr.up[i]);
    if (i > 0 && !(pr.up[i] > 0.0))
      throw NonConvergenceError(
          "radial solve produced u' <= 0 (inadmissible Hessian)");
  }
  return out;
}

double RadialProfile::value(double sq) const {
  const int n = static_cast<int>(s.size());
  if (sq < 0.0 || sq > smax)
    throw InvalidSpecError("radial profile evaluated outside [0, smax]");
  const double h = s[1] - s[0];
  int i0 = static_cast<int>(sq / h) - 2;
  i0 = std::clamp(i0, 0, n - 6);
  // 6-point Lagrange interpolation on the uniform grid
  double acc = 0.0;
  for (int a = 0; a < 6; ++a) {
    double w = u[i0 + a];
    for (int b = 0; b < 6; ++b) {
      if (a == b) continue;
      w *= (sq - s[i0 + b]) / (s[i0 + a] - s[i0 + b]);
    }
    acc += w;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Verification through finite-difference jets

VerifySummary verify_solution(const GridField& grid, int margin) {
  const int nx = grid.nx, ny = grid.ny;
  if (nx - 2 * margin <= 0 || ny - 2 * margin <= 0)
    throw InvalidSpecError("verification margin exhausts the grid");

  RealField field = [&grid](const ChartPoint& p) {
    const double re = p.z[0].real(), im = p.z[0].imag();
    const double fi = (re - grid.x0) / grid.h, fj = (im - grid.y0) / grid.h;
    const int i = static_cast<int>(std::lround(fi));
    const int j = static_cast<int>(std::lround(fj));
    if (std::abs(fi - i) > 1e-6 || std::abs(fj - j) > 1e-6)
      throw InvalidSpecError("off-node evaluation of a grid field");
    return grid.at(i, j);
  };

  const int iw = nx - 2 * margin, jh = ny - 2 * margin;
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(iw) * jh;
  std::vector<double> res(total, 0.0);
  std::vector<unsigned char> bad(total, 0);
  par::for_each(total, [&](std::ptrdiff_t r) {
    const int i = margin + static_cast<int>(r % iw);
    const int j = margin + static_cast<int>(r / iw);
    const ChartPoint p{0.0, {Cx{grid.re(i), grid.im(j)}}};
    try {
      const WirtingerJet jet = fd_jet(field, p, 4, grid.h);
      res[r] = einstein_residual(jet, 1).max_abs;
    } catch (const HessianNotPositiveDefiniteError&) {
      bad[r] = 1;
    } catch (const SingularHessianError&) {
      bad[r] = 1;
    }
  });

  VerifySummary out;
  out.samples = static_cast<int>(total);
  out.max_residual = par::sup_norm(res);
  for (unsigned char b : bad) out.inadmissible += b;
  return out;
}

VerifySummary verify_solution(const RadialProfile& profile,
                              const std::vector<double>& sample_s) {
  VerifySummary out;
  const int k = profile.k;
  RealField field = [&profile](const ChartPoint& p) {
    double sq = 0.0;
    for (const Cx& z : p.z) sq += std::norm(z);
    return profile.value(sq);
  };
  for (double sv : sample_s) {
    CVec z(k, Cx{});
    z[0] = std::sqrt(sv);
    const ChartPoint p{0.0, z};
    try {
      const WirtingerJet jet = fd_jet_default(field, p, 4);
      out.max_residual = std::max(out.max_residual,
                                  einstein_residual(jet, k).max_abs);
    } catch (const HessianNotPositiveDefiniteError&) {
      ++out.inadmissible;
    } catch (const SingularHessianError&) {
      ++out.inadmissible;
    }
    ++out.samples;
  }
  return out;
}

}  // namespace sasaki
