#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sasaki/jet.hpp"
#include "sasaki/types.hpp"

#include <nlohmann/json_fwd.hpp>

namespace sasaki {

// One monomial coeff * z^a * zbar^b, exponent vectors of length k.
struct PolyTerm {
  std::vector<int> a, b;
  Cx c;
};

// Holomorphic polynomial f(z). Adding f + fbar to the potential together
// with the x-shift x -> x + i*fbar - i*f leaves the generated structure
// unchanged; this type carries both the addition and the coordinate map.
struct GaugeMap {
  int k = 0;
  std::vector<std::pair<std::vector<int>, Cx>> terms;  // (exponents, coeff)

  Cx f(const CVec& z) const;
  // derivative of f by the index list alpha (holomorphic slots)
  Cx df(const CVec& z, const MultiIndex& alpha) const;
  double x_shift(const CVec& z) const;  // i*fbar - i*f = 2 Im f, real
  ChartPoint map_point(const ChartPoint& p) const;

  // Jacobian of the coordinate map (z, x) -> (z, x'): only the x' row is
  // nontrivial. dx'/dz^m and dx'/dzbar^m at z.
  Cx dxp_dz(const CVec& z, int m) const;
  Cx dxp_dzbar(const CVec& z, int m) const;

  static GaugeMap constant(int k, double value);  // f = value/2, K -> K+value
};

struct PotentialSpec {
  enum class Kind { Sphere, Product, Quadratic, Polynomial, Blackbox };

  Kind kind = Kind::Sphere;
  int k = 1;
  int q = 0, n = 0;   // product split, k = q + n
  double c = 0.5;     // quadratic coefficient: K = c * sum |z|^2
  std::vector<PolyTerm> terms;
  std::function<double(const ChartPoint&)> field;  // blackbox evaluator
  std::optional<GaugeMap> gauge;  // additive f + fbar riding on the base

  static PotentialSpec sphere(int k);
  static PotentialSpec product(int q, int n);
  static PotentialSpec quadratic(int k, double c = 0.5);
  static PotentialSpec polynomial(int k, std::vector<PolyTerm> terms);
  static PotentialSpec blackbox(int k,
                                std::function<double(const ChartPoint&)> f);

  std::string kind_name() const;
  bool analytic() const { return kind != Kind::Blackbox; }
};

// Throws InvalidSpecError on malformed specs (non-Hermitian polynomial
// table, degree > 6, bad dimensions).
void validate(const PotentialSpec& spec);

double evaluate_value(const PotentialSpec& spec, const ChartPoint& p);
std::function<double(const ChartPoint&)> real_field(const PotentialSpec& spec);

// Exact derivatives for the builtin families; rejects blackbox specs.
WirtingerJet evaluate_jet(const PotentialSpec& spec, const ChartPoint& p,
                          int order = 4);

struct GaugeResult {
  PotentialSpec spec;  // potential for K' = K + f + fbar
  GaugeMap map;        // coordinate map (z, x) -> (z, x + i*fbar - i*f)
};
GaugeResult apply_gauge(const PotentialSpec& spec, const GaugeMap& gauge);

nlohmann::json spec_to_json(const PotentialSpec& spec);
PotentialSpec spec_from_json(const nlohmann::json& j);

// Deterministic admissible polynomial potential: dominant |z|^2 part plus
// small seeded higher-order Hermitian terms; positive definite on the
// sampling ball by construction margin.
PotentialSpec random_admissible_polynomial(int k, std::uint64_t seed);

}  // namespace sasaki
