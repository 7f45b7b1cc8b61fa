#include "sasaki/einstein.hpp"

#include <cmath>
#include <exception>

#include "sasaki/parallel.hpp"
#include "sasaki/structure.hpp"

namespace sasaki {

EinsteinReport einstein_residual(const WirtingerJet& jet, int k, double tol) {
  EinsteinReport r;
  r.lambda = 2.0 * k;
  r.tol = tol;
  const CMat e = logdet_hess_second(jet);
  r.residual = CMat(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      r.residual(i, j) = -e(i, j) - 2.0 * (k + 1) * jet.d({j}, {i});
  r.max_abs = r.residual.max_abs();
  r.einstein = r.max_abs < tol;
  return r;
}

double integrated_ma_residual(const WirtingerJet& jet, int k, double c) {
  const double det = det_lu(jet.hessian()).real();
  const double rhs = c * std::exp(-2.0 * (k + 1) * jet.value());
  return std::abs(det - rhs);
}

double kahler_einstein_residual(const WirtingerJet& jet, int k) {
  // Ricci of the Kaehler metric h with matrix 2*Hess: the factor 2 shifts
  // log det by a constant, so the residual must match einstein_residual.
  CMat h2 = jet.hessian();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) h2(i, j) *= 2.0;
  const CMat h2inv = cholesky_inverse(cholesky_lower(h2));
  CMat res(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      CMat m2(k, k), mj(k, k), mi(k, k);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
          m2(a, b) = 2.0 * jet.d({a, j}, {b, i});
          mj(a, b) = 2.0 * jet.d({a, j}, {b});
          mi(a, b) = 2.0 * jet.d({a}, {b, i});
        }
      Cx e{};
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) e += h2inv(a, b) * m2(b, a);
      const CMat pj = h2inv * mj;
      const CMat pi = h2inv * mi;
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) e -= pj(a, b) * pi(b, a);
      res(i, j) = -e - 2.0 * (k + 1) * jet.d({j}, {i});
    }
  const CMat ref = einstein_residual(jet, k).residual;
  if ((res - ref).max_abs() > 1e-12 * (1.0 + ref.max_abs()))
    throw std::runtime_error(
        "Kaehler-Einstein residual disagrees with the potential-equation "
        "residual");
  return res.max_abs();
}

ClassifySummary classify(const PotentialSpec& spec, const SamplePlan& plan,
                         double tol) {
  validate(spec);
  if (plan.count < 1) throw InvalidSpecError("sample plan must be nonempty");
  const auto pts = sample_ball(spec.k, plan.count, plan.radius, plan.seed);

  ClassifySummary s;
  s.lambda = 2.0 * spec.k;
  s.tol = tol;
  s.points.resize(pts.size());
  std::vector<std::exception_ptr> errs(pts.size());
  par::for_each(static_cast<std::ptrdiff_t>(pts.size()), [&](std::ptrdiff_t i) {
    try {
      const WirtingerJet jet = jet_for(spec, pts[i], 4);
      s.points[i] = {pts[i], einstein_residual(jet, spec.k, tol).max_abs};
    } catch (...) {
      errs[i] = std::current_exception();
    }
  });
  for (const auto& e : errs)
    if (e) std::rethrow_exception(e);

  s.max_abs = 0.0;
  for (const auto& pv : s.points) s.max_abs = std::max(s.max_abs, pv.max_abs);
  s.einstein = s.max_abs < tol;
  return s;
}

double GaugeInvarianceReport::max() const {
  return std::max({mixed_jet, g, phi, eta, einstein, shift_imag});
}

GaugeInvarianceReport check_gauge_invariance(
    const PotentialSpec& spec, const GaugeMap& gauge,
    const std::vector<ChartPoint>& pts) {
  const GaugeResult gr = apply_gauge(spec, gauge);
  const int k = spec.k;
  const Basis B{k};
  const int n = B.dim();
  GaugeInvarianceReport rep;
  for (const auto& p : pts) {
    const WirtingerJet j0 = jet_for(spec, p, 4);
    const WirtingerJet j1 = jet_for(gr.spec, p, 4);
    for (const auto& [key, v] : j0.entries())
      if (!key.first.empty() && !key.second.empty())
        rep.mixed_jet = std::max(
            rep.mixed_jet, std::abs(v - j1.entry(key.first, key.second)));

    const StructurePack s0 = build_structure(j0);
    const StructurePack s1 = build_structure(j1);
    CMat J = CMat::identity(n), Jinv = CMat::identity(n);
    for (int m = 0; m < k; ++m) {
      J(0, B.hol(m)) = gr.map.dxp_dz(p.z, m);
      J(0, B.anti(m)) = gr.map.dxp_dzbar(p.z, m);
      Jinv(0, B.hol(m)) = -J(0, B.hol(m));
      Jinv(0, B.anti(m)) = -J(0, B.anti(m));
    }
    rep.g = std::max(rep.g, (J.transpose() * s1.g * J - s0.g).max_abs());
    rep.phi = std::max(rep.phi, (Jinv * s1.phi * J - s0.phi).max_abs());
    for (int nu = 0; nu < n; ++nu) {
      Cx e{};
      for (int a = 0; a < n; ++a) e += J(a, nu) * s1.eta[a];
      rep.eta = std::max(rep.eta, std::abs(e - s0.eta[nu]));
    }
    rep.einstein = std::max(rep.einstein,
                            (einstein_residual(j1, k).residual -
                             einstein_residual(j0, k).residual)
                                .max_abs());
    const Cx sh = kI * std::conj(gauge.f(p.z)) - kI * gauge.f(p.z);
    rep.shift_imag = std::max(rep.shift_imag, std::abs(sh.imag()));
  }
  return rep;
}

double curvature_einstein_residual(const WirtingerJet& jet) {
  const StructurePack pack = build_structure(jet);
  const CMat ric = ricci_closed(jet);
  const int n = pack.basis().dim();
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      worst = std::max(worst,
                       std::abs(ric(a, b) - 2.0 * jet.k() * pack.g(a, b)));
  return worst;
}

}  // namespace sasaki
