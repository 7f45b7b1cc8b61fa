#pragma once

#include <map>
#include <vector>

#include "sasaki/jet.hpp"
#include "sasaki/linalg.hpp"
#include "sasaki/potential.hpp"
#include "sasaki/types.hpp"

namespace sasaki {

// Contact metric structure generated by a potential jet, in the complexified
// holonomic basis (dx, dz^m, dzbar^m).
struct StructurePack {
  int k = 0;
  CVec eta;     // eta_mu
  CMat g;       // g_{mu nu}, symmetric
  CMat g_inv;   // g^{mu nu}, from the closed form (not generic inversion)
  CMat kappa;   // kappa(j,l) = kappa^{j lbar}, inverse of the Hessian
  CMat phi;     // phi^mu_nu
  CVec xi;      // e_0

  Basis basis() const { return Basis{k}; }
};

StructurePack build_structure(const WirtingerJet& jet);

// Full alternation matrix D[rho][sigma] = d_rho eta_sigma - d_sigma eta_rho
// of the contact form, assembled from the order-2 jet. The metric pairing
// g(phi X, Y) matches D/2; the Nijenhuis condition pairs with D itself.
CMat deta_full(const WirtingerJet& jet);

// Canonical basis vectors plus 8 seeded pseudo-random complex probes.
std::vector<CVec> probe_vectors(int k, std::uint64_t seed);

struct AxiomResiduals {
  double phi_square = 0;      // (1) phi^2 X = -X + eta(X) xi
  double eta_xi = 0;          // (2) eta(xi) = 1
  double compatibility = 0;   // (3) g(phi X, phi Y) = g(X,Y) - eta(X)eta(Y)
  double xi_metric_dual = 0;  // (4) g(xi, X) = eta(X)
  double nijenhuis = 0;       // (5) N_phi + deta (x) xi = 0
  double fundamental = 0;     // (6) deta(X,Y) = g(phi X, Y)
  double max() const;
};

AxiomResiduals axiom_residuals(const StructurePack& pack,
                               const WirtingerJet& jet,
                               const std::vector<CVec>& probes);

double nijenhuis_from_jet(const StructurePack& pack, const WirtingerJet& jet,
                          const std::vector<CVec>& probes);
double nijenhuis_residual(const PotentialSpec& spec, const ChartPoint& p,
                          const std::vector<CVec>& probes);

// Null-frame coefficients from the Cholesky factor of the Hessian:
// chol is lower triangular with positive real diagonal, H = chol * chol^H,
// and the coefficient of dz^j in mu^i is chol(j,i), so that
// sum_l f^l_j conj(f^l_i) = K_{,j ibar} holds exactly.
struct HoloFrame {
  CMat chol;
  int k() const { return chol.rows(); }
  Cx coeff(int i, int j) const { return chol(j, i); }  // f^i_j
  double reconstruction_residual(const CMat& hessian) const;
};

HoloFrame frame_from_hessian(const WirtingerJet& jet);

struct FrameResiduals {
  double frobenius = 0;  // d mu^i ^ mu^1 ^ ... ^ mu^k coefficients
  double deta = 0;       // d eta + 2i sum mu^l ^ mubar^l coefficients
};
FrameResiduals frame_residuals(const PotentialSpec& spec, const ChartPoint& p,
                               double h = 1e-3);

// Lie derivative of g along xi, evaluated as an x-difference of components.
double killing_residual(const PotentialSpec& spec, const ChartPoint& p);

// Jet for a spec at a point: analytic for builtin kinds, default-step
// finite differences for blackbox fields.
WirtingerJet jet_for(const PotentialSpec& spec, const ChartPoint& p,
                     int order = 4);

// max |conj(T) - T with all indices conjugate-swapped|
double reality_residual(const CMat& t, const Basis& b);
double reality_residual(const CVec& t, const Basis& b);

// Alternating form with strictly increasing index tuples; used for the
// closed-ideal check on the null frame.
class AltForm {
 public:
  explicit AltForm(int degree) : degree_(degree) {}
  int degree() const { return degree_; }
  void add(std::vector<int> idx, Cx v);
  const std::map<std::vector<int>, Cx>& coeffs() const { return c_; }
  double max_abs() const;

 private:
  int degree_;
  std::map<std::vector<int>, Cx> c_;
};

AltForm wedge(const AltForm& a, const AltForm& b);

}  // namespace sasaki
