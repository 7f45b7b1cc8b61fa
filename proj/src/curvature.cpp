#include "sasaki/curvature.hpp"

#include <cmath>

#include "sasaki/fd_jet.hpp"

namespace sasaki {

namespace {

CMat kappa_of(const WirtingerJet& jet) {
  return cholesky_inverse(cholesky_lower(jet.hessian())).conj();
}

Cx trace_prod(const CMat& a, const CMat& b) {
  Cx t{};
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t += a(i, j) * b(j, i);
  return t;
}

// dH in a holomorphic (bar = false) or antiholomorphic direction m:
// (d_m H)(a,b) = K_{,a m bbar}, (d_mbar H)(a,b) = K_{,a bbar mbar}
CMat dhess(const WirtingerJet& jet, int m, bool bar) {
  const int k = jet.k();
  CMat d(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      d(a, b) = bar ? jet.d({a}, {b, m}) : jet.d({a, m}, {b});
  return d;
}

// d kappa = -kappa (dH)^T kappa in any direction
CMat dkappa(const CMat& kappa, const CMat& dh) {
  CMat r = kappa * dh.transpose() * kappa;
  for (int i = 0; i < r.rows(); ++i)
    for (int j = 0; j < r.cols(); ++j) r(i, j) = -r(i, j);
  return r;
}

}  // namespace

ABCPack abc_functions(const WirtingerJet& jet) {
  const int k = jet.k();
  if (jet.order() < 3) throw InvalidSpecError("abc_functions needs order 3");
  const CMat kappa = kappa_of(jet);
  ABCPack p;
  p.k = k;
  p.C = Tensor3(k);
  p.B = Tensor3(k);
  p.A = CMat(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int m = 0; m < k; ++m) {
        Cx c{};
        for (int l = 0; l < k; ++l) c += kappa(i, l) * jet.d({j, m}, {l});
        p.C(i, j, m) = c;
        p.B(i, j, m) = c + (i == m ? jet.d1(j) : Cx{}) +
                       (i == j ? jet.d1(m) : Cx{});
      }
  for (int j = 0; j < k; ++j)
    for (int m = 0; m < k; ++m) {
      Cx a = 2.0 * jet.d1(j) * jet.d1(m) - jet.d({j, m}, {});
      for (int l = 0; l < k; ++l) a += p.C(l, j, m) * jet.d1(l);
      p.A(j, m) = a;
    }
  return p;
}

ChristoffelPack christoffel_closed(const WirtingerJet& jet) {
  const int k = jet.k();
  const Basis B{k};
  const int n = B.dim();
  if (jet.order() < 3)
    throw InvalidSpecError("christoffel_closed needs order 3");
  const ABCPack abc = abc_functions(jet);

  ChristoffelPack cp;
  cp.k = k;
  cp.gamma = Tensor3(n);
  cp.lower = Tensor3(n);
  Tensor3& G = cp.gamma;

  for (int l = 0; l < k; ++l) {
    // Gamma^x_x = -dK
    G(0, 0, B.hol(l)) = -jet.d1(l);
    G(0, 0, B.anti(l)) = -std::conj(jet.d1(l));
  }
  for (int j = 0; j < k; ++j) {
    // Gamma^x_j = -K_j dx - i A_{jm} dz^m, and conjugate
    G(0, B.hol(j), 0) = -jet.d1(j);
    G(0, B.anti(j), 0) = -std::conj(jet.d1(j));
    for (int m = 0; m < k; ++m) {
      G(0, B.hol(j), B.hol(m)) = -kI * abc.A(j, m);
      G(0, B.anti(j), B.anti(m)) = std::conj(-kI * abc.A(j, m));
    }
    // Gamma^i_x = -i dz^i, and conjugate
    G(B.hol(j), 0, B.hol(j)) = -kI;
    G(B.anti(j), 0, B.anti(j)) = kI;
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      // Gamma^i_j = -i delta dx - delta K_{lbar} dzbar^l + B^i_{jl} dz^l
      if (i == j) {
        G(B.hol(i), B.hol(j), 0) = -kI;
        G(B.anti(i), B.anti(j), 0) = kI;
        for (int l = 0; l < k; ++l) {
          G(B.hol(i), B.hol(j), B.anti(l)) = -std::conj(jet.d1(l));
          G(B.anti(i), B.anti(j), B.hol(l)) = -jet.d1(l);
        }
      }
      for (int l = 0; l < k; ++l) {
        G(B.hol(i), B.hol(j), B.hol(l)) += abc.B(i, j, l);
        G(B.anti(i), B.anti(j), B.anti(l)) += std::conj(abc.B(i, j, l));
      }
      // Gamma^i_jbar = -K_jbar dz^i, and conjugate
      G(B.hol(i), B.anti(j), B.hol(i)) = -std::conj(jet.d1(j));
      G(B.anti(i), B.hol(j), B.anti(i)) = -jet.d1(j);
    }

  // lowered list
  Tensor3& L = cp.lower;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      // Gamma_{xi} = i K_{,ij} dz^j
      L(0, B.hol(i), B.hol(j)) = kI * jet.d({i, j}, {});
      L(0, B.anti(i), B.anti(j)) = std::conj(kI * jet.d({i, j}, {}));
      // Gamma_{ix} = i K_{,i jbar} dzbar^j
      L(B.hol(i), 0, B.anti(j)) = kI * jet.d({i}, {j});
      L(B.anti(i), 0, B.hol(j)) = std::conj(kI * jet.d({i}, {j}));
      for (int l = 0; l < k; ++l) {
        // Gamma_{ij} = -K_i K_{jl} dz^l - K_j K_{i lbar} dzbar^l
        L(B.hol(i), B.hol(j), B.hol(l)) =
            -jet.d1(i) * jet.d({j, l}, {});
        L(B.hol(i), B.hol(j), B.anti(l)) =
            -jet.d1(j) * jet.d({i}, {l});
        L(B.anti(i), B.anti(j), B.anti(l)) =
            std::conj(-jet.d1(i) * jet.d({j, l}, {}));
        L(B.anti(i), B.anti(j), B.hol(l)) =
            std::conj(-jet.d1(j) * jet.d({i}, {l}));
        // Gamma_{i jbar} dz^l and dzbar^l pieces
        L(B.hol(i), B.anti(j), B.hol(l)) = -jet.d1(l) * jet.d({i}, {j});
        L(B.hol(i), B.anti(j), B.anti(l)) =
            jet.d({i}, {j, l}) + jet.d1(i) * std::conj(jet.d({j, l}, {})) +
            std::conj(jet.d1(j)) * jet.d({i}, {l}) +
            std::conj(jet.d1(l)) * jet.d({i}, {j});
        L(B.anti(i), B.hol(j), B.anti(l)) =
            std::conj(-jet.d1(l) * jet.d({i}, {j}));
        L(B.anti(i), B.hol(j), B.hol(l)) = std::conj(
            jet.d({i}, {j, l}) + jet.d1(i) * std::conj(jet.d({j, l}, {})) +
            std::conj(jet.d1(j)) * jet.d({i}, {l}) +
            std::conj(jet.d1(l)) * jet.d({i}, {j}));
      }
      // Gamma_{i jbar} = i K_{,i jbar} dx + ...
      L(B.hol(i), B.anti(j), 0) = kI * jet.d({i}, {j});
      L(B.anti(i), B.hol(j), 0) = std::conj(kI * jet.d({i}, {j}));
    }
  return cp;
}

Tensor4 riemann_closed(const WirtingerJet& jet) {
  const int k = jet.k();
  const Basis B{k};
  const int n = B.dim();
  if (jet.order() < 4) throw InvalidSpecError("riemann_closed needs order 4");
  const CMat kappa = kappa_of(jet);
  const ABCPack abc = abc_functions(jet);

  // derivatives of kappa in every direction
  std::vector<CMat> dk_hol(k), dk_anti(k);
  for (int m = 0; m < k; ++m) {
    dk_hol[m] = dkappa(kappa, dhess(jet, m, false));
    dk_anti[m] = dkappa(kappa, dhess(jet, m, true));
  }

  auto dC = [&](int i, int j, int nn, int l, bool bar) {
    const CMat& dk = bar ? dk_anti[l] : dk_hol[l];
    Cx v{};
    for (int p = 0; p < k; ++p) {
      v += dk(i, p) * jet.d({j, nn}, {p});
      v += kappa(i, p) * (bar ? jet.d({j, nn}, {p, l})
                              : jet.d({j, nn, l}, {p}));
    }
    return v;
  };
  auto dB = [&](int i, int j, int nn, int l, bool bar) {
    Cx v = dC(i, j, nn, l, bar);
    if (bar) {
      if (i == nn) v += jet.d({j}, {l});
      if (i == j) v += jet.d({nn}, {l});
    } else {
      if (i == nn) v += jet.d({j, l}, {});
      if (i == j) v += jet.d({nn, l}, {});
    }
    return v;
  };
  auto dA_bar = [&](int j, int l, int m) {
    Cx v = -jet.d({j, l}, {m}) +
           2.0 * (jet.d({j}, {m}) * jet.d1(l) + jet.d1(j) * jet.d({l}, {m}));
    for (int i = 0; i < k; ++i) {
      v += dC(i, j, l, m, true) * jet.d1(i);
      v += abc.C(i, j, l) * jet.d({i}, {m});
    }
    return v;
  };

  // raw dy^rho ^ dy^sigma coefficients; every added term also enters with
  // conjugated indices so the conjugate Omega blocks need no separate list
  Tensor4 raw(n);
  auto add = [&](int mu, int nu, int rho, int sigma, Cx v) {
    raw(mu, nu, rho, sigma) += v;
    raw(B.bar(mu), B.bar(nu), B.bar(rho), B.bar(sigma)) += std::conj(v);
  };

  for (int l = 0; l < k; ++l)
    // Omega^x_x = i K_l dx ^ dz^l - i K_lbar dx ^ dzbar^l (self-conjugate)
    add(0, 0, 0, B.hol(l), kI * jet.d1(l));

  for (int j = 0; j < k; ++j) {
    for (int l = 0; l < k; ++l) {
      // Omega^x_j
      add(0, B.hol(j), 0, B.hol(l), -jet.d1(j) * jet.d1(l));
      add(0, B.hol(j), 0, B.anti(l),
          jet.d({j}, {l}) + jet.d1(j) * std::conj(jet.d1(l)));
      for (int m = 0; m < k; ++m)
        add(0, B.hol(j), B.hol(l), B.anti(m), kI * dA_bar(j, l, m));
    }
    // Omega^i_x
    add(B.hol(j), 0, 0, B.hol(j), Cx{-1.0, 0.0});
    for (int l = 0; l < k; ++l) {
      add(B.hol(j), 0, B.hol(j), B.hol(l), kI * jet.d1(l));
      add(B.hol(j), 0, B.anti(l), B.hol(j), kI * std::conj(jet.d1(l)));
    }
  }

  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      // Omega^i_j
      add(B.hol(i), B.hol(j), 0, B.hol(i), -kI * jet.d1(j));
      for (int nn = 0; nn < k; ++nn)
        for (int l = 0; l < k; ++l) {
          Cx hh{};
          for (int m = 0; m < k; ++m)
            hh += abc.B(i, m, nn) * abc.B(m, j, l);
          hh -= dB(i, j, nn, l, false);
          if (i == l) hh += abc.A(j, nn);
          add(B.hol(i), B.hol(j), B.hol(nn), B.hol(l), hh);

          Cx hm = -dB(i, j, nn, l, true);
          if (i == nn) hm += jet.d1(j) * std::conj(jet.d1(l));
          if (i == j) hm -= jet.d({nn}, {l});
          add(B.hol(i), B.hol(j), B.hol(nn), B.anti(l), hm);
        }
      // Omega^i_jbar
      add(B.hol(i), B.anti(j), 0, B.hol(i), kI * std::conj(jet.d1(j)));
      for (int l = 0; l < k; ++l) {
        add(B.hol(i), B.anti(j), B.hol(i), B.hol(l),
            jet.d({l}, {j}) + std::conj(jet.d1(j)) * jet.d1(l));
        add(B.hol(i), B.anti(j), B.hol(i), B.anti(l),
            -std::conj(jet.d1(j)) * std::conj(jet.d1(l)));
      }
    }

  // Omega = (1/2) R dy^rho ^ dy^sigma: antisymmetrize the raw coefficients
  Tensor4 r(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int rho = 0; rho < n; ++rho)
        for (int sg = 0; sg < n; ++sg)
          r(mu, nu, rho, sg) = raw(mu, nu, rho, sg) - raw(mu, nu, sg, rho);
  return r;
}

CMat ricci_from_riemann(const Tensor4& riemann) {
  const int n = riemann.dim();
  CMat ric(n, n);
  for (int nu = 0; nu < n; ++nu)
    for (int sg = 0; sg < n; ++sg) {
      Cx s{};
      for (int mu = 0; mu < n; ++mu) s += riemann(mu, nu, mu, sg);
      ric(nu, sg) = s;
    }
  return ric;
}

CMat logdet_hess_second(const WirtingerJet& jet) {
  const int k = jet.k();
  if (jet.order() < 4)
    throw InvalidSpecError("logdet_hess_second needs order 4");
  const CMat hinv = cholesky_inverse(cholesky_lower(jet.hessian()));
  CMat e(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      CMat m2(k, k), mj(k, k), mi(k, k);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
          m2(a, b) = jet.d({a, j}, {b, i});
          mj(a, b) = jet.d({a, j}, {b});
          mi(a, b) = jet.d({a}, {b, i});
        }
      e(i, j) = trace_prod(hinv, m2) - trace_prod(hinv * mj, hinv * mi);
    }
  return e;
}

CMat kappa_trace_second(const WirtingerJet& jet) {
  const int k = jet.k();
  if (jet.order() < 4)
    throw InvalidSpecError("kappa_trace_second needs order 4");
  const CMat kappa = kappa_of(jet);
  CMat t(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const CMat dk = dkappa(kappa, dhess(jet, j, false));
      Cx v{};
      for (int l = 0; l < k; ++l)
        for (int m = 0; m < k; ++m) {
          v += dk(l, m) * jet.d({l}, {m, i});
          v += kappa(l, m) * jet.d({l, j}, {m, i});
        }
      t(i, j) = v;
    }
  return t;
}

double logdet_trace_identity(const WirtingerJet& jet) {
  return (kappa_trace_second(jet) - logdet_hess_second(jet)).max_abs();
}

CMat ricci_closed(const WirtingerJet& jet) {
  const int k = jet.k();
  const Basis B{k};
  const int n = B.dim();
  const CMat e = logdet_hess_second(jet);
  CMat ric(n, n);
  ric(0, 0) = 2.0 * k;
  for (int j = 0; j < k; ++j) {
    const Cx rxj = 2.0 * kI * static_cast<double>(k) * jet.d1(j);
    ric(0, B.hol(j)) = rxj;
    ric(B.hol(j), 0) = rxj;
    ric(0, B.anti(j)) = std::conj(rxj);
    ric(B.anti(j), 0) = std::conj(rxj);
    for (int i = 0; i < k; ++i) {
      const Cx rij = -2.0 * k * jet.d1(i) * jet.d1(j);
      ric(B.hol(i), B.hol(j)) = rij;
      ric(B.anti(i), B.anti(j)) = std::conj(rij);
      const Cx rbij = 2.0 * k * std::conj(jet.d1(i)) * jet.d1(j) -
                      2.0 * jet.d({j}, {i}) - e(i, j);
      ric(B.anti(i), B.hol(j)) = rbij;
      ric(B.hol(j), B.anti(i)) = rbij;
    }
  }
  return ric;
}

Cx scalar_curvature(const CMat& ricci, const StructurePack& pack) {
  Cx s{};
  const int n = ricci.rows();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s += pack.g_inv(a, b) * ricci(a, b);
  return s;
}

WeylResult weyl_tensor(const Tensor4& riemann, const CMat& ricci, Cx scalar,
                       const StructurePack& pack) {
  const int n = riemann.dim();
  WeylResult w;
  w.lowered = Tensor4(n);
  w.mixed = Tensor4(n);
  if (n == 3) return w;  // identically zero in three dimensions

  Tensor4 rl(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int rho = 0; rho < n; ++rho)
        for (int sg = 0; sg < n; ++sg) {
          Cx s{};
          for (int a = 0; a < n; ++a)
            s += pack.g(mu, a) * riemann(a, nu, rho, sg);
          rl(mu, nu, rho, sg) = s;
        }

  const CMat& g = pack.g;
  const double c1 = 1.0 / (n - 2);
  const Cx c2 = scalar / static_cast<double>((n - 1) * (n - 2));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Cx v = rl(a, b, c, d);
          v -= c1 * (g(a, c) * ricci(b, d) - g(a, d) * ricci(b, c) -
                     g(b, c) * ricci(a, d) + g(b, d) * ricci(a, c));
          v += c2 * (g(a, c) * g(b, d) - g(a, d) * g(b, c));
          w.lowered(a, b, c, d) = v;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Cx s{};
          for (int m = 0; m < n; ++m)
            s += pack.g_inv(a, m) * w.lowered(m, b, c, d);
          w.mixed(a, b, c, d) = s;
        }
  w.max_abs = w.lowered.max_abs();
  return w;
}

double weyl_trace_residual(const Tensor4& wl, const StructurePack& pack) {
  const int n = wl.dim();
  if (n == 3) return 0.0;
  const CMat& gi = pack.g_inv;
  double worst = 0.0;
  // contract each index pair with g^{..}; six distinct pairs
  for (int pair = 0; pair < 6; ++pair) {
    static const int pi[6] = {0, 0, 0, 1, 1, 2};
    static const int pj[6] = {1, 2, 3, 2, 3, 3};
    for (int f1 = 0; f1 < n; ++f1)
      for (int f2 = 0; f2 < n; ++f2) {
        Cx s{};
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            int idx[4];
            int free_slot = 0;
            int frees[2] = {f1, f2};
            for (int q = 0; q < 4; ++q) {
              if (q == pi[pair])
                idx[q] = a;
              else if (q == pj[pair])
                idx[q] = b;
              else
                idx[q] = frees[free_slot++];
            }
            s += gi(a, b) * wl(idx[0], idx[1], idx[2], idx[3]);
          }
        worst = std::max(worst, std::abs(s));
      }
  }
  return worst;
}

CurvatureTensors curvature_bundle(const WirtingerJet& jet,
                                  const StructurePack& pack) {
  CurvatureTensors ct;
  ct.k = jet.k();
  ct.riemann = riemann_closed(jet);
  ct.ricci = ricci_closed(jet);
  ct.scalar = scalar_curvature(ct.ricci, pack);
  ct.weyl = weyl_tensor(ct.riemann, ct.ricci, ct.scalar, pack);
  return ct;
}

// ---------------------------------------------------------------------------
// Numeric oracles

namespace {

// derivative of the metric components in complexified directions by central
// differences over (Re z^m, Im z^m); slot 0 (x) is structurally zero
std::vector<CMat> dg_numeric(const PotentialSpec& spec, const ChartPoint& p,
                             double h) {
  const int k = spec.k;
  const Basis B{k};
  const int n = B.dim();
  std::vector<CMat> dg(n, CMat(n, n));
  for (int m = 0; m < k; ++m) {
    ChartPoint pr = p, pl = p, pu = p, pd = p;
    pr.z[m] += h;
    pl.z[m] -= h;
    pu.z[m] += Cx{0.0, h};
    pd.z[m] -= Cx{0.0, h};
    const CMat gr = build_structure(jet_for(spec, pr, 2)).g;
    const CMat gl = build_structure(jet_for(spec, pl, 2)).g;
    const CMat gu = build_structure(jet_for(spec, pu, 2)).g;
    const CMat gd = build_structure(jet_for(spec, pd, 2)).g;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const Cx dre = (gr(a, b) - gl(a, b)) / (2.0 * h);
        const Cx dim = (gu(a, b) - gd(a, b)) / (2.0 * h);
        dg[B.hol(m)](a, b) = 0.5 * (dre - kI * dim);
        dg[B.anti(m)](a, b) = 0.5 * (dre + kI * dim);
      }
  }
  return dg;
}

std::vector<CMat> dg_richardson(const PotentialSpec& spec, const ChartPoint& p,
                                double h) {
  auto coarse = dg_numeric(spec, p, h);
  auto fine = dg_numeric(spec, p, h / 2.0);
  for (size_t d = 0; d < coarse.size(); ++d)
    for (int a = 0; a < coarse[d].rows(); ++a)
      for (int b = 0; b < coarse[d].cols(); ++b)
        fine[d](a, b) = (4.0 * fine[d](a, b) - coarse[d](a, b)) / 3.0;
  return fine;
}

}  // namespace

ChristoffelPack christoffel_numeric(const PotentialSpec& spec,
                                    const ChartPoint& p, double h) {
  if (!(h > 0.0) || h < fd_min_step(1))
    throw StepUnderflowError("christoffel_numeric step underflow");
  const int k = spec.k;
  const Basis B{k};
  const int n = B.dim();
  const auto dg = dg_richardson(spec, p, h);
  const StructurePack pack = build_structure(jet_for(spec, p, 2));

  ChristoffelPack cp;
  cp.k = k;
  cp.lower = Tensor3(n);
  cp.gamma = Tensor3(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int rho = 0; rho < n; ++rho)
        cp.lower(mu, nu, rho) = 0.5 * (dg[rho](mu, nu) + dg[nu](rho, mu) -
                                       dg[mu](nu, rho));
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int rho = 0; rho < n; ++rho) {
        Cx s{};
        for (int a = 0; a < n; ++a)
          s += pack.g_inv(mu, a) * cp.lower(a, nu, rho);
        cp.gamma(mu, nu, rho) = s;
      }
  return cp;
}

Tensor4 riemann_numeric(const PotentialSpec& spec, const ChartPoint& p,
                        double h) {
  const int k = spec.k;
  const Basis B{k};
  const int n = B.dim();
  const ChristoffelPack g0 = christoffel_numeric(spec, p, h);

  // dGamma[rho](mu,nu,sigma) by a second difference level over the numeric
  // Christoffels; the x direction vanishes
  std::vector<Tensor3> dgam(n, Tensor3(n));
  for (int m = 0; m < k; ++m) {
    ChartPoint pr = p, pl = p, pu = p, pd = p;
    pr.z[m] += h;
    pl.z[m] -= h;
    pu.z[m] += Cx{0.0, h};
    pd.z[m] -= Cx{0.0, h};
    const Tensor3 gr = christoffel_numeric(spec, pr, h).gamma;
    const Tensor3 gl = christoffel_numeric(spec, pl, h).gamma;
    const Tensor3 gu = christoffel_numeric(spec, pu, h).gamma;
    const Tensor3 gd = christoffel_numeric(spec, pd, h).gamma;
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu)
        for (int sg = 0; sg < n; ++sg) {
          const Cx dre = (gr(mu, nu, sg) - gl(mu, nu, sg)) / (2.0 * h);
          const Cx dim = (gu(mu, nu, sg) - gd(mu, nu, sg)) / (2.0 * h);
          dgam[B.hol(m)](mu, nu, sg) = 0.5 * (dre - kI * dim);
          dgam[B.anti(m)](mu, nu, sg) = 0.5 * (dre + kI * dim);
        }
  }

  Tensor4 r(n);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int rho = 0; rho < n; ++rho)
        for (int sg = 0; sg < n; ++sg) {
          Cx v = dgam[rho](mu, nu, sg) - dgam[sg](mu, nu, rho);
          for (int l = 0; l < n; ++l)
            v += g0.gamma(mu, l, rho) * g0.gamma(l, nu, sg) -
                 g0.gamma(mu, l, sg) * g0.gamma(l, nu, rho);
          r(mu, nu, rho, sg) = v;
        }
  return r;
}

double metricity_residual(const PotentialSpec& spec, const ChartPoint& p,
                          double h) {
  const int k = spec.k;
  const Basis B{k};
  const int n = B.dim();
  const auto dg = dg_richardson(spec, p, h);
  const StructurePack pack = build_structure(jet_for(spec, p, 2));
  const ChristoffelPack cp = christoffel_closed(jet_for(spec, p, 3));
  double worst = 0.0;
  for (int rho = 0; rho < n; ++rho)
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        Cx v = dg[rho](mu, nu);
        for (int sg = 0; sg < n; ++sg)
          v -= cp.gamma(sg, rho, mu) * pack.g(sg, nu) +
               cp.gamma(sg, rho, nu) * pack.g(mu, sg);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

}  // namespace sasaki
