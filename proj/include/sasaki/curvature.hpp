#pragma once

#include "sasaki/jet.hpp"
#include "sasaki/linalg.hpp"
#include "sasaki/potential.hpp"
#include "sasaki/structure.hpp"
#include "sasaki/types.hpp"

namespace sasaki {

// Auxiliary contractions of the order-3 jet entering the connection and
// curvature closed forms:
//   C^i_{jm} = kappa^{i lbar} K_{,lbar j m}
//   B^i_{jm} = C^i_{jm} + delta^i_m K_{,j} + delta^i_j K_{,m}
//   A_{jm}   = C^l_{jm} K_{,l} + 2 K_{,j} K_{,m} - K_{,jm}
// Conjugate blocks follow by reality and are not stored.
struct ABCPack {
  int k = 0;
  Tensor3 C, B;  // (i,j,m) over 0..k-1
  CMat A;        // (j,m)
};

ABCPack abc_functions(const WirtingerJet& jet);

// Connection coefficients in the complexified basis. gamma(mu,nu,rho) is
// the dy^rho coefficient of the 1-form Gamma^mu_nu; lower(mu,nu,rho)
// likewise for Gamma_{mu nu}. Both are symmetric in (nu,rho).
struct ChristoffelPack {
  int k = 0;
  Tensor3 gamma;
  Tensor3 lower;
};

ChristoffelPack christoffel_closed(const WirtingerJet& jet);

// Levi-Civita symbols from central differences of the metric over
// (Re z, Im z), recombined into the complexified basis; one Richardson
// level. Oracle for christoffel_closed.
ChristoffelPack christoffel_numeric(const PotentialSpec& spec,
                                    const ChartPoint& p, double h = 1e-3);

// R^mu_{nu rho sigma} read off the curvature 2-forms
// Omega^mu_nu = (1/2) R^mu_{nu rho sigma} dy^rho ^ dy^sigma: coefficients
// are accumulated as written and antisymmetrized over the last pair.
Tensor4 riemann_closed(const WirtingerJet& jet);

// Contraction R_{nu sigma} = R^mu_{nu mu sigma}.
CMat ricci_from_riemann(const Tensor4& riemann);

// Closed-form Ricci components; the C^{mbar}_{mbar ibar, j} trace term is
// evaluated through the log-det route.
CMat ricci_closed(const WirtingerJet& jet);

// E(i,j) = (log det K_{,m nbar})_{,ibar j} from the order-4 jet.
CMat logdet_hess_second(const WirtingerJet& jet);

// Same object through the kappa-derivative route
// (kappa^{mbar l} K_{,mbar l ibar})_{,j}; independent of logdet_hess_second.
CMat kappa_trace_second(const WirtingerJet& jet);

// Residual between the two routes above.
double logdet_trace_identity(const WirtingerJet& jet);

struct WeylResult {
  Tensor4 lowered;  // W_{mu nu rho sigma}
  Tensor4 mixed;    // W^mu_{nu rho sigma}
  double max_abs = 0.0;
};

WeylResult weyl_tensor(const Tensor4& riemann, const CMat& ricci, Cx scalar,
                       const StructurePack& pack);

// max over the six g-inverse contractions of the lowered Weyl tensor
double weyl_trace_residual(const Tensor4& weyl_lowered,
                           const StructurePack& pack);

Cx scalar_curvature(const CMat& ricci, const StructurePack& pack);

struct CurvatureTensors {
  int k = 0;
  Tensor4 riemann;
  CMat ricci;
  Cx scalar;
  WeylResult weyl;
};

CurvatureTensors curvature_bundle(const WirtingerJet& jet,
                                  const StructurePack& pack);

// Two stacked finite-difference levels over christoffel_numeric.
Tensor4 riemann_numeric(const PotentialSpec& spec, const ChartPoint& p,
                        double h = 1e-3);

// sup-norm of the numeric covariant derivative of g with the closed-form
// connection.
double metricity_residual(const PotentialSpec& spec, const ChartPoint& p,
                          double h = 1e-3);

}  // namespace sasaki
