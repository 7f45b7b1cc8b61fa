#pragma once

#include <string>
#include <vector>

#include "sasaki/curvature.hpp"
#include "sasaki/jet.hpp"
#include "sasaki/potential.hpp"
#include "sasaki/types.hpp"

namespace sasaki {

// Residual of -(log det K_{,m nbar})_{,ibar j} = 2(k+1) K_{,ibar j} at one
// point. residual(i,j) is the (ibar, j) component; Hermitian.
struct EinsteinReport {
  double lambda = 0.0;  // always 2k
  CMat residual;
  double max_abs = 0.0;
  bool einstein = false;
  double tol = 0.0;
};

EinsteinReport einstein_residual(const WirtingerJet& jet, int k,
                                 double tol = 1e-8);

// |det Hess - c * exp(-2(k+1)K)| for the gauge-integrated form.
double integrated_ma_residual(const WirtingerJet& jet, int k, double c);

// Einstein residual of the 2k-dimensional Kaehler metric with matrix
// 2*K_{,ibar j}; asserts pointwise agreement with einstein_residual.
double kahler_einstein_residual(const WirtingerJet& jet, int k);

struct SamplePlan {
  int count = 50;
  double radius = 1.0;
  std::uint64_t seed = 20240817;
};

struct PointVerdict {
  ChartPoint point;
  double max_abs = 0.0;
};

struct ClassifySummary {
  double lambda = 0.0;
  double tol = 0.0;
  std::vector<PointVerdict> points;
  double max_abs = 0.0;
  bool einstein = false;
};

// Batch Einstein check over seeded sample points; per-point work runs in
// parallel, reports merge in point order.
ClassifySummary classify(const PotentialSpec& spec, const SamplePlan& plan,
                         double tol = 1e-8);

// max |Ric - 2k g| from the closed-form Ricci; vanishes exactly when the
// potential equation does.
double curvature_einstein_residual(const WirtingerJet& jet);

// Componentwise invariance of the generated structure under a gauge map:
// mixed jet blocks and the Einstein residual compare directly, g / phi /
// eta through the Jacobian of the (z, x) -> (z, x') coordinate change.
struct GaugeInvarianceReport {
  double mixed_jet = 0;
  double g = 0;
  double phi = 0;
  double eta = 0;
  double einstein = 0;
  double shift_imag = 0;  // the x-shift i fbar - i f must be real
  double max() const;
  bool pass(double tol) const { return max() < tol; }
};

GaugeInvarianceReport check_gauge_invariance(const PotentialSpec& spec,
                                             const GaugeMap& gauge,
                                             const std::vector<ChartPoint>& pts);

}  // namespace sasaki
