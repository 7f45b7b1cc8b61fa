#include "sasaki/structure.hpp"

#include <algorithm>
#include <cmath>

#include "sasaki/fd_jet.hpp"

namespace sasaki {

StructurePack build_structure(const WirtingerJet& jet) {
  const int k = jet.k();
  const Basis B{k};
  const int n = B.dim();
  if (jet.order() < 2) throw InvalidSpecError("build_structure needs order 2");

  const CMat hess = jet.hessian();
  const CMat chol = cholesky_lower(hess);  // admissibility gate
  const CMat hinv = cholesky_inverse(chol);

  StructurePack s;
  s.k = k;
  s.kappa = hinv.conj();  // kappa^{j lbar} = conj((H^{-1})[j][l])

  s.eta.assign(n, Cx{});
  s.eta[0] = 1.0;
  for (int m = 0; m < k; ++m) {
    s.eta[B.hol(m)] = kI * jet.d1(m);
    s.eta[B.anti(m)] = -kI * std::conj(jet.d1(m));
  }

  // covariant metric: eta^2 + 2 K_{,m nbar} dz^m dzbar^n expanded in the
  // holonomic basis
  s.g = CMat(n, n);
  s.g(0, 0) = 1.0;
  for (int i = 0; i < k; ++i) {
    const Cx ki = jet.d1(i);
    s.g(0, B.hol(i)) = kI * ki;
    s.g(B.hol(i), 0) = kI * ki;
    s.g(0, B.anti(i)) = -kI * std::conj(ki);
    s.g(B.anti(i), 0) = -kI * std::conj(ki);
    for (int j = 0; j < k; ++j) {
      const Cx kj = jet.d1(j);
      s.g(B.hol(i), B.hol(j)) = -ki * kj;
      s.g(B.anti(i), B.anti(j)) = -std::conj(ki) * std::conj(kj);
      s.g(B.hol(i), B.anti(j)) = jet.mixed(i, j) + ki * std::conj(kj);
      s.g(B.anti(j), B.hol(i)) = s.g(B.hol(i), B.anti(j));
    }
  }

  // contravariant metric, closed form in kappa
  s.g_inv = CMat(n, n);
  Cx gxx = 1.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      gxx += 2.0 * jet.d1(i) * std::conj(jet.d1(j)) * s.kappa(i, j);
  s.g_inv(0, 0) = gxx;
  for (int m = 0; m < k; ++m) {
    Cx gxh{};
    for (int j = 0; j < k; ++j) gxh += std::conj(jet.d1(j)) * s.kappa(m, j);
    s.g_inv(0, B.hol(m)) = kI * gxh;
    s.g_inv(B.hol(m), 0) = kI * gxh;
    Cx gxa{};
    for (int j = 0; j < k; ++j) gxa += jet.d1(j) * s.kappa(j, m);
    s.g_inv(0, B.anti(m)) = -kI * gxa;
    s.g_inv(B.anti(m), 0) = -kI * gxa;
    for (int l = 0; l < k; ++l) {
      s.g_inv(B.hol(m), B.anti(l)) = s.kappa(m, l);
      s.g_inv(B.anti(l), B.hol(m)) = s.kappa(m, l);
    }
  }

  s.phi = CMat(n, n);
  for (int m = 0; m < k; ++m) {
    s.phi(B.hol(m), B.hol(m)) = -kI;
    s.phi(0, B.hol(m)) = -jet.d1(m);
    s.phi(B.anti(m), B.anti(m)) = kI;
    s.phi(0, B.anti(m)) = -std::conj(jet.d1(m));
  }

  s.xi.assign(n, Cx{});
  s.xi[0] = 1.0;
  return s;
}

CMat deta_full(const WirtingerJet& jet) {
  const int k = jet.k();
  const Basis B{k};
  const int n = B.dim();
  // P[rho][sigma] = d_rho eta_sigma; eta_x is constant, x-derivatives vanish
  CMat p(n, n);
  for (int m = 0; m < k; ++m) {
    for (int nn = 0; nn < k; ++nn) {
      p(B.hol(nn), B.hol(m)) = kI * jet.d({m, nn}, {});
      p(B.anti(nn), B.hol(m)) = kI * jet.d({m}, {nn});
      p(B.hol(nn), B.anti(m)) = -kI * jet.d({nn}, {m});
      p(B.anti(nn), B.anti(m)) = -kI * std::conj(jet.d({m, nn}, {}));
    }
  }
  CMat d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = p(i, j) - p(j, i);
  return d;
}

std::vector<CVec> probe_vectors(int k, std::uint64_t seed) {
  const Basis B{k};
  const int n = B.dim();
  std::vector<CVec> probes;
  for (int i = 0; i < n; ++i) {
    CVec e(n, Cx{});
    e[i] = 1.0;
    probes.push_back(std::move(e));
  }
  Rng rng(seed);
  for (int r = 0; r < 8; ++r) {
    CVec v(n);
    for (int i = 0; i < n; ++i)
      v[i] = Cx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    probes.push_back(std::move(v));
  }
  return probes;
}

namespace {
Cx bilinear(const CMat& g, const CVec& x, const CVec& y) {
  Cx s{};
  for (int i = 0; i < g.rows(); ++i) {
    if (x[i] == Cx{}) continue;
    Cx row{};
    for (int j = 0; j < g.cols(); ++j) row += g(i, j) * y[j];
    s += x[i] * row;
  }
  return s;
}
CVec matvec(const CMat& m, const CVec& x) { return m * x; }
Cx pair_form(const CVec& eta, const CVec& x) {
  Cx s{};
  for (size_t i = 0; i < eta.size(); ++i) s += eta[i] * x[i];
  return s;
}
double max_abs(const CVec& v) {
  double m = 0;
  for (const Cx& c : v) m = std::max(m, std::abs(c));
  return m;
}
}  // namespace

double AxiomResiduals::max() const {
  return std::max({phi_square, eta_xi, compatibility, xi_metric_dual,
                   nijenhuis, fundamental});
}

AxiomResiduals axiom_residuals(const StructurePack& pack,
                               const WirtingerJet& jet,
                               const std::vector<CVec>& probes) {
  const int n = pack.basis().dim();
  AxiomResiduals r;
  r.eta_xi = std::abs(pair_form(pack.eta, pack.xi) - 1.0);

  const CMat d = deta_full(jet);
  for (const CVec& x : probes) {
    // (1) as vectors
    CVec px = matvec(pack.phi, x);
    CVec ppx = matvec(pack.phi, px);
    CVec want(n);
    const Cx ex = pair_form(pack.eta, x);
    for (int i = 0; i < n; ++i) want[i] = ppx[i] + x[i] - ex * pack.xi[i];
    r.phi_square = std::max(r.phi_square, max_abs(want));
    // (4)
    Cx gxi{};
    for (int j = 0; j < n; ++j) gxi += pack.g(0, j) * x[j];
    r.xi_metric_dual = std::max(r.xi_metric_dual, std::abs(gxi - ex));
    for (const CVec& y : probes) {
      const CVec py = matvec(pack.phi, y);
      const Cx lhs3 = bilinear(pack.g, px, py);
      const Cx rhs3 = bilinear(pack.g, x, y) - ex * pair_form(pack.eta, y);
      r.compatibility = std::max(r.compatibility, std::abs(lhs3 - rhs3));
      // (6): the fundamental 2-form is half the full alternation of d eta
      const Cx dxy = 0.5 * bilinear(d, x, y);
      const Cx gphixy = bilinear(pack.g, px, y);
      r.fundamental = std::max(r.fundamental, std::abs(dxy - gphixy));
    }
  }
  r.nijenhuis = nijenhuis_from_jet(pack, jet, probes);
  return r;
}

double nijenhuis_from_jet(const StructurePack& pack, const WirtingerJet& jet,
                          const std::vector<CVec>& probes) {
  const int k = pack.k;
  const Basis B{k};
  const int n = B.dim();
  // only the x-row of phi varies: phi^x_{hol m} = -K_m, phi^x_{anti m} =
  // -conj(K_m); dphi[alpha][nu] = d_alpha phi^x_nu
  CMat dphi(n, n);
  for (int m = 0; m < k; ++m)
    for (int a = 0; a < k; ++a) {
      dphi(B.hol(a), B.hol(m)) = -jet.d({m, a}, {});
      dphi(B.anti(a), B.hol(m)) = -jet.d({m}, {a});
      dphi(B.hol(a), B.anti(m)) = -jet.d({a}, {m});
      dphi(B.anti(a), B.anti(m)) = -std::conj(jet.d({m, a}, {}));
    }

  const CMat d = deta_full(jet);
  // derivative of (phi V)^x along e_alpha for constant V
  auto dphi_vec = [&](int alpha, const CVec& v) {
    Cx s{};
    for (int b = 0; b < n; ++b) s += dphi(alpha, b) * v[b];
    return s;
  };

  double res = 0.0;
  for (size_t i = 0; i < probes.size(); ++i)
    for (size_t j = i + 1; j < probes.size(); ++j) {
      const CVec& x = probes[i];
      const CVec& y = probes[j];
      const CVec px = matvec(pack.phi, x);
      const CVec py = matvec(pack.phi, y);
      // Only the x-row of phi varies, so for constant probes every bracket
      // in N_phi is a multiple of xi: phi([phi X, Y]) and phi([X, phi Y])
      // vanish, phi^2[X,Y] = 0, and N_phi reduces to the x-component of
      // [phi X, phi Y].
      CVec nf(n, Cx{});
      for (int a = 0; a < n; ++a)
        nf[0] += px[a] * dphi_vec(a, y) - py[a] * dphi_vec(a, x);
      // N + deta(X,Y) xi, full alternation pairing
      nf[0] += bilinear(d, x, y);
      res = std::max(res, max_abs(nf));
    }
  return res;
}

double nijenhuis_residual(const PotentialSpec& spec, const ChartPoint& p,
                          const std::vector<CVec>& probes) {
  const WirtingerJet jet = jet_for(spec, p, 3);
  const StructurePack pack = build_structure(jet);
  return nijenhuis_from_jet(pack, jet, probes);
}

double HoloFrame::reconstruction_residual(const CMat& hessian) const {
  const int n = chol.rows();
  double r = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Cx s{};
      for (int l = 0; l < n; ++l) s += coeff(l, j) * std::conj(coeff(l, i));
      r = std::max(r, std::abs(s - hessian(j, i)));
    }
  return r;
}

HoloFrame frame_from_hessian(const WirtingerJet& jet) {
  return HoloFrame{cholesky_lower(jet.hessian())};
}

void AltForm::add(std::vector<int> idx, Cx v) {
  // sort with parity; repeated indices annihilate
  int sign = 1;
  for (size_t i = 1; i < idx.size(); ++i)
    for (size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
      std::swap(idx[j], idx[j - 1]);
      sign = -sign;
    }
  for (size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return;
  c_[std::move(idx)] += static_cast<double>(sign) * v;
}

double AltForm::max_abs() const {
  double m = 0.0;
  for (const auto& [idx, v] : c_) m = std::max(m, std::abs(v));
  return m;
}

AltForm wedge(const AltForm& a, const AltForm& b) {
  AltForm out(a.degree() + b.degree());
  for (const auto& [ia, va] : a.coeffs())
    for (const auto& [ib, vb] : b.coeffs()) {
      std::vector<int> idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.add(std::move(idx), va * vb);
    }
  return out;
}

FrameResiduals frame_residuals(const PotentialSpec& spec, const ChartPoint& p,
                               double h) {
  if (!(h > 0.0)) throw StepUnderflowError("frame_residuals requires h > 0");
  if (h < fd_min_step(1))
    throw StepUnderflowError("frame step underflows first derivatives");
  const int k = spec.k;
  const Basis B{k};

  auto frame_at = [&](const ChartPoint& q) {
    return frame_from_hessian(jet_for(spec, q, 2));
  };
  const HoloFrame f0 = frame_at(p);
  const WirtingerJet jet = jet_for(spec, p, 2);

  // d f^i_j over the complexified directions by central differences
  // dmu^i = sum_{rho,j} (d_rho f^i_j) dy^rho ^ dz^j
  std::vector<AltForm> dmu(k, AltForm(2));
  for (int m = 0; m < k; ++m) {
    ChartPoint pr = p, pl = p, pu = p, pd = p;
    pr.z[m] += h;
    pl.z[m] -= h;
    pu.z[m] += Cx{0.0, h};
    pd.z[m] -= Cx{0.0, h};
    const HoloFrame fr = frame_at(pr), fl = frame_at(pl), fu = frame_at(pu),
                    fd = frame_at(pd);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        const Cx dre = (fr.coeff(i, j) - fl.coeff(i, j)) / (2.0 * h);
        const Cx dim = (fu.coeff(i, j) - fd.coeff(i, j)) / (2.0 * h);
        const Cx dhol = 0.5 * (dre - kI * dim);
        const Cx danti = 0.5 * (dre + kI * dim);
        dmu[i].add({B.hol(m), B.hol(j)}, dhol);
        dmu[i].add({B.anti(m), B.hol(j)}, danti);
      }
  }

  AltForm mu_all(0);
  mu_all.add({}, Cx{1.0, 0.0});
  std::vector<AltForm> mu(k, AltForm(1));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) mu[i].add({B.hol(j)}, f0.coeff(i, j));
    mu_all = wedge(mu_all, mu[i]);
  }

  FrameResiduals out;
  for (int i = 0; i < k; ++i)
    out.frobenius = std::max(out.frobenius, wedge(dmu[i], mu_all).max_abs());

  // d eta = -2i sum_l mu^l ^ mubar^l as full alternation arrays
  const CMat d = deta_full(jet);
  const int n = B.dim();
  CMat w(n, n);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      Cx s{};
      for (int l = 0; l < k; ++l)
        s += f0.coeff(l, a) * std::conj(f0.coeff(l, b));
      w(B.hol(a), B.anti(b)) = -2.0 * kI * s;
      w(B.anti(b), B.hol(a)) = 2.0 * kI * s;
    }
  out.deta = (d - w).max_abs();
  return out;
}

double killing_residual(const PotentialSpec& spec, const ChartPoint& p) {
  const double h = 0.5;
  ChartPoint up = p, down = p;
  up.x += h;
  down.x -= h;
  const StructurePack a = build_structure(jet_for(spec, up, 2));
  const StructurePack b = build_structure(jet_for(spec, down, 2));
  double r = 0.0;
  for (int i = 0; i < a.g.rows(); ++i)
    for (int j = 0; j < a.g.cols(); ++j)
      r = std::max(r, std::abs(a.g(i, j) - b.g(i, j)) / (2.0 * h));
  return r;
}

WirtingerJet jet_for(const PotentialSpec& spec, const ChartPoint& p,
                     int order) {
  if (spec.analytic()) return evaluate_jet(spec, p, order);
  return fd_jet_default(real_field(spec), p, order);
}

double reality_residual(const CMat& t, const Basis& b) {
  double r = 0.0;
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < t.cols(); ++j)
      r = std::max(r,
                   std::abs(std::conj(t(i, j)) - t(b.bar(i), b.bar(j))));
  return r;
}

double reality_residual(const CVec& t, const Basis& b) {
  double r = 0.0;
  for (size_t i = 0; i < t.size(); ++i)
    r = std::max(r, std::abs(std::conj(t[i]) - t[b.bar(static_cast<int>(i))]));
  return r;
}

}  // namespace sasaki
