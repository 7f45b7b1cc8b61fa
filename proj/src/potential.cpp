#include "sasaki/potential.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

namespace sasaki {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// GaugeMap

Cx GaugeMap::f(const CVec& z) const {
  Cx v{};
  for (const auto& [e, c] : terms) {
    Cx m = c;
    for (int i = 0; i < k; ++i)
      for (int p = 0; p < e[i]; ++p) m *= z[i];
    v += m;
  }
  return v;
}

namespace {
double falling(int p, int d) {
  double f = 1.0;
  for (int i = 0; i < d; ++i) f *= (p - i);
  return f;
}
std::vector<int> to_exponents(const MultiIndex& idx, int k) {
  std::vector<int> e(k, 0);
  for (int i : idx) ++e[i];
  return e;
}
}  // namespace

Cx GaugeMap::df(const CVec& z, const MultiIndex& alpha) const {
  const auto d = to_exponents(alpha, k);
  Cx v{};
  for (const auto& [e, c] : terms) {
    Cx m = c;
    bool dead = false;
    for (int i = 0; i < k && !dead; ++i) {
      if (d[i] > e[i]) {
        dead = true;
        break;
      }
      m *= falling(e[i], d[i]);
      for (int p = 0; p < e[i] - d[i]; ++p) m *= z[i];
    }
    if (!dead) v += m;
  }
  return v;
}

double GaugeMap::x_shift(const CVec& z) const { return 2.0 * f(z).imag(); }

ChartPoint GaugeMap::map_point(const ChartPoint& p) const {
  return {p.x + x_shift(p.z), p.z};
}

Cx GaugeMap::dxp_dz(const CVec& z, int m) const { return -kI * df(z, {m}); }
Cx GaugeMap::dxp_dzbar(const CVec& z, int m) const {
  return kI * std::conj(df(z, {m}));
}

GaugeMap GaugeMap::constant(int k, double value) {
  GaugeMap g;
  g.k = k;
  g.terms.push_back({std::vector<int>(k, 0), Cx{value / 2.0, 0.0}});
  return g;
}

// ---------------------------------------------------------------------------
// Spec construction and validation

PotentialSpec PotentialSpec::sphere(int k) {
  PotentialSpec s;
  s.kind = Kind::Sphere;
  s.k = k;
  return s;
}
PotentialSpec PotentialSpec::product(int q, int n) {
  PotentialSpec s;
  s.kind = Kind::Product;
  s.q = q;
  s.n = n;
  s.k = q + n;
  return s;
}
PotentialSpec PotentialSpec::quadratic(int k, double c) {
  PotentialSpec s;
  s.kind = Kind::Quadratic;
  s.k = k;
  s.c = c;
  return s;
}
PotentialSpec PotentialSpec::polynomial(int k, std::vector<PolyTerm> terms) {
  PotentialSpec s;
  s.kind = Kind::Polynomial;
  s.k = k;
  s.terms = std::move(terms);
  return s;
}
PotentialSpec PotentialSpec::blackbox(
    int k, std::function<double(const ChartPoint&)> f) {
  PotentialSpec s;
  s.kind = Kind::Blackbox;
  s.k = k;
  s.field = std::move(f);
  return s;
}

std::string PotentialSpec::kind_name() const {
  switch (kind) {
    case Kind::Sphere: return "sphere";
    case Kind::Product: return "product";
    case Kind::Quadratic: return "quadratic";
    case Kind::Polynomial: return "polynomial";
    case Kind::Blackbox: return "blackbox";
  }
  return "?";
}

void validate(const PotentialSpec& spec) {
  if (spec.k < 1) throw InvalidSpecError("potential requires k >= 1");
  if (spec.kind == PotentialSpec::Kind::Product) {
    if (spec.q < 0 || spec.n < 0 || spec.q + spec.n != spec.k ||
        spec.k < 1)
      throw InvalidSpecError("product potential requires q,n >= 0, q+n = k");
  }
  if (spec.kind == PotentialSpec::Kind::Polynomial) {
    std::map<std::pair<std::vector<int>, std::vector<int>>, Cx> table;
    for (const auto& t : spec.terms) {
      if (static_cast<int>(t.a.size()) != spec.k ||
          static_cast<int>(t.b.size()) != spec.k)
        throw InvalidSpecError("polynomial term exponent length != k");
      int deg = std::accumulate(t.a.begin(), t.a.end(), 0) +
                std::accumulate(t.b.begin(), t.b.end(), 0);
      if (deg > 6)
        throw InvalidSpecError("polynomial potential limited to degree 6");
      table[{t.a, t.b}] += t.c;
    }
    for (const auto& [key, c] : table) {
      auto it = table.find({key.second, key.first});
      Cx mirror = it == table.end() ? Cx{} : it->second;
      if (std::abs(mirror - std::conj(c)) > 1e-14 * (1.0 + std::abs(c)))
        throw InvalidSpecError(
            "polynomial coefficient table is not Hermitian-symmetric");
    }
  }
  if (spec.kind == PotentialSpec::Kind::Blackbox && !spec.field)
    throw InvalidSpecError("blackbox potential without evaluator");
  if (spec.gauge && spec.gauge->k != spec.k)
    throw InvalidSpecError("gauge dimension mismatch");
}

// ---------------------------------------------------------------------------
// Log blocks: coeff * log(1 + sum_{m in vars} |z^m|^2) building K for the
// sphere and product families.

namespace {

struct LogBlock {
  double coeff;
  std::vector<int> vars;
};

std::vector<LogBlock> log_blocks(const PotentialSpec& spec) {
  std::vector<LogBlock> blocks;
  if (spec.kind == PotentialSpec::Kind::Sphere) {
    LogBlock b;
    b.coeff = 0.5;
    b.vars.resize(spec.k);
    std::iota(b.vars.begin(), b.vars.end(), 0);
    blocks.push_back(std::move(b));
  } else if (spec.kind == PotentialSpec::Kind::Product) {
    const double denom = spec.q + spec.n + 1;
    for (int i = 0; i < spec.q; ++i) blocks.push_back({1.0 / denom, {i}});
    if (spec.n > 0) {
      LogBlock w;
      w.coeff = (spec.n + 1) / (2.0 * denom);
      for (int i = 0; i < spec.n; ++i) w.vars.push_back(spec.q + i);
      blocks.push_back(std::move(w));
    }
  }
  return blocks;
}

// Mixed derivative of log(1 + sum_B |z|^2) for the canonical patterns
// (|a| >= |b|). delta terms pair holomorphic with antiholomorphic slots.
Cx log_block_entry(const LogBlock& blk, const CVec& z, const MultiIndex& a,
                   const MultiIndex& b) {
  for (int i : a)
    if (std::find(blk.vars.begin(), blk.vars.end(), i) == blk.vars.end())
      return Cx{};
  for (int i : b)
    if (std::find(blk.vars.begin(), blk.vars.end(), i) == blk.vars.end())
      return Cx{};
  double s = 0.0;
  for (int v : blk.vars) s += std::norm(z[v]);
  const double t = 1.0 + s;
  auto zb = [&](int m) { return std::conj(z[m]); };
  auto del = [](int m, int p) { return m == p ? 1.0 : 0.0; };
  const int p = static_cast<int>(a.size()), qn = static_cast<int>(b.size());
  Cx v{};
  if (p == 0 && qn == 0) {
    v = std::log(t);
  } else if (p == 1 && qn == 0) {
    v = zb(a[0]) / t;
  } else if (p == 2 && qn == 0) {
    v = -zb(a[0]) * zb(a[1]) / (t * t);
  } else if (p == 3 && qn == 0) {
    v = 2.0 * zb(a[0]) * zb(a[1]) * zb(a[2]) / (t * t * t);
  } else if (p == 4 && qn == 0) {
    v = -6.0 * zb(a[0]) * zb(a[1]) * zb(a[2]) * zb(a[3]) / (t * t * t * t);
  } else if (p == 1 && qn == 1) {
    v = del(a[0], b[0]) / t - zb(a[0]) * z[b[0]] / (t * t);
  } else if (p == 2 && qn == 1) {
    const int m = a[0], n = a[1], pp = b[0];
    v = -(del(m, pp) * zb(n) + del(n, pp) * zb(m)) / (t * t) +
        2.0 * zb(m) * zb(n) * z[pp] / (t * t * t);
  } else if (p == 3 && qn == 1) {
    const int m = a[0], n = a[1], pp = a[2], qq = b[0];
    v = 2.0 *
            (del(m, qq) * zb(n) * zb(pp) + del(n, qq) * zb(m) * zb(pp) +
             del(pp, qq) * zb(m) * zb(n)) /
            (t * t * t) -
        6.0 * zb(m) * zb(n) * zb(pp) * z[qq] / (t * t * t * t);
  } else if (p == 2 && qn == 2) {
    const int m = a[0], n = a[1], pp = b[0], qq = b[1];
    v = -(del(m, pp) * del(n, qq) + del(n, pp) * del(m, qq)) / (t * t) +
        2.0 *
            ((del(m, pp) * zb(n) + del(n, pp) * zb(m)) * z[qq] +
             (del(m, qq) * zb(n) + del(n, qq) * zb(m)) * z[pp]) /
            (t * t * t) -
        6.0 * zb(m) * zb(n) * z[pp] * z[qq] / (t * t * t * t);
  }
  return blk.coeff * v;
}

Cx quadratic_entry(double c, const CVec& z, const MultiIndex& a,
                   const MultiIndex& b) {
  const int p = static_cast<int>(a.size()), qn = static_cast<int>(b.size());
  if (p == 0 && qn == 0) {
    double s = 0.0;
    for (const Cx& v : z) s += std::norm(v);
    return c * s;
  }
  if (p == 1 && qn == 0) return c * std::conj(z[a[0]]);
  if (p == 1 && qn == 1) return a[0] == b[0] ? Cx{c} : Cx{};
  return Cx{};
}

Cx polynomial_entry(const std::vector<PolyTerm>& terms, int k, const CVec& z,
                    const MultiIndex& a, const MultiIndex& b) {
  const auto da = to_exponents(a, k), db = to_exponents(b, k);
  Cx v{};
  for (const auto& t : terms) {
    Cx m = t.c;
    bool dead = false;
    for (int i = 0; i < k && !dead; ++i) {
      if (da[i] > t.a[i] || db[i] > t.b[i]) {
        dead = true;
        break;
      }
      m *= falling(t.a[i], da[i]) * falling(t.b[i], db[i]);
      for (int p = 0; p < t.a[i] - da[i]; ++p) m *= z[i];
      for (int p = 0; p < t.b[i] - db[i]; ++p) m *= std::conj(z[i]);
    }
    if (!dead) v += m;
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Evaluation

double evaluate_value(const PotentialSpec& spec, const ChartPoint& p) {
  validate(spec);
  if (!p.finite() || p.k() != spec.k)
    throw InvalidSpecError("point dimension mismatch or non-finite point");
  double v = 0.0;
  switch (spec.kind) {
    case PotentialSpec::Kind::Sphere:
    case PotentialSpec::Kind::Product:
      for (const auto& blk : log_blocks(spec))
        v += log_block_entry(blk, p.z, {}, {}).real();
      break;
    case PotentialSpec::Kind::Quadratic:
      v = quadratic_entry(spec.c, p.z, {}, {}).real();
      break;
    case PotentialSpec::Kind::Polynomial:
      v = polynomial_entry(spec.terms, spec.k, p.z, {}, {}).real();
      break;
    case PotentialSpec::Kind::Blackbox:
      v = spec.field(p);
      break;
  }
  if (spec.gauge) v += 2.0 * spec.gauge->f(p.z).real();
  return v;
}

std::function<double(const ChartPoint&)> real_field(
    const PotentialSpec& spec) {
  return [spec](const ChartPoint& p) { return evaluate_value(spec, p); };
}

WirtingerJet evaluate_jet(const PotentialSpec& spec, const ChartPoint& p,
                          int order) {
  validate(spec);
  if (order < 0 || order > 4)
    throw InvalidSpecError("jet order must be in 0..4");
  if (spec.kind == PotentialSpec::Kind::Blackbox)
    throw InvalidSpecError(
        "analytic jets unavailable for blackbox potentials; use fd_jet");
  if (!p.finite() || p.k() != spec.k)
    throw InvalidSpecError("point dimension mismatch or non-finite point");

  const auto blocks = log_blocks(spec);
  WirtingerJet jet(spec.k, order);
  for (const auto& [a, b] : WirtingerJet::canonical_keys(spec.k, order)) {
    Cx v{};
    switch (spec.kind) {
      case PotentialSpec::Kind::Sphere:
      case PotentialSpec::Kind::Product:
        for (const auto& blk : blocks) v += log_block_entry(blk, p.z, a, b);
        break;
      case PotentialSpec::Kind::Quadratic:
        v = quadratic_entry(spec.c, p.z, a, b);
        break;
      case PotentialSpec::Kind::Polynomial:
        v = polynomial_entry(spec.terms, spec.k, p.z, a, b);
        break;
      case PotentialSpec::Kind::Blackbox:
        break;
    }
    if (spec.gauge) {
      if (b.empty() && a.empty())
        v += 2.0 * spec.gauge->f(p.z).real();
      else if (b.empty())
        v += spec.gauge->df(p.z, a);
      // mixed blocks pick up nothing from f + fbar
    }
    jet.set(a, b, v);
  }
  return jet;
}

GaugeResult apply_gauge(const PotentialSpec& spec, const GaugeMap& gauge) {
  validate(spec);
  if (gauge.k != spec.k) throw InvalidSpecError("gauge dimension mismatch");
  PotentialSpec out = spec;
  if (!out.gauge) {
    out.gauge = gauge;
  } else {
    for (const auto& t : gauge.terms) out.gauge->terms.push_back(t);
  }
  return {std::move(out), gauge};
}

// ---------------------------------------------------------------------------
// JSON round trip

namespace {
json gauge_to_json(const GaugeMap& g) {
  json terms = json::array();
  for (const auto& [e, c] : g.terms)
    terms.push_back({{"e", e}, {"re", c.real()}, {"im", c.imag()}});
  return {{"terms", std::move(terms)}};
}
GaugeMap gauge_from_json(const json& j, int k) {
  GaugeMap g;
  g.k = k;
  for (const auto& t : j.at("terms")) {
    std::vector<int> e = t.at("e").get<std::vector<int>>();
    if (static_cast<int>(e.size()) != k)
      throw InvalidSpecError("gauge exponent length != k");
    g.terms.push_back(
        {std::move(e),
         Cx{t.at("re").get<double>(), t.value("im", 0.0)}});
  }
  return g;
}
}  // namespace

json spec_to_json(const PotentialSpec& spec) {
  json j;
  j["kind"] = spec.kind_name();
  switch (spec.kind) {
    case PotentialSpec::Kind::Sphere:
      j["k"] = spec.k;
      break;
    case PotentialSpec::Kind::Product:
      j["q"] = spec.q;
      j["n"] = spec.n;
      break;
    case PotentialSpec::Kind::Quadratic:
      j["k"] = spec.k;
      j["c"] = spec.c;
      break;
    case PotentialSpec::Kind::Polynomial: {
      j["k"] = spec.k;
      json terms = json::array();
      for (const auto& t : spec.terms)
        terms.push_back({{"a", t.a},
                         {"b", t.b},
                         {"re", t.c.real()},
                         {"im", t.c.imag()}});
      j["terms"] = std::move(terms);
      break;
    }
    case PotentialSpec::Kind::Blackbox:
      throw InvalidSpecError("blackbox potentials are not serializable");
  }
  if (spec.gauge) j["gauge"] = gauge_to_json(*spec.gauge);
  return j;
}

PotentialSpec spec_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  PotentialSpec spec;
  if (kind == "sphere") {
    spec = PotentialSpec::sphere(j.at("k").get<int>());
  } else if (kind == "product") {
    spec = PotentialSpec::product(j.at("q").get<int>(), j.at("n").get<int>());
  } else if (kind == "quadratic") {
    spec = PotentialSpec::quadratic(j.at("k").get<int>(), j.value("c", 0.5));
  } else if (kind == "polynomial") {
    std::vector<PolyTerm> terms;
    for (const auto& t : j.at("terms"))
      terms.push_back({t.at("a").get<std::vector<int>>(),
                       t.at("b").get<std::vector<int>>(),
                       Cx{t.at("re").get<double>(), t.value("im", 0.0)}});
    spec = PotentialSpec::polynomial(j.at("k").get<int>(), std::move(terms));
  } else {
    throw InvalidSpecError("unknown potential kind: " + kind);
  }
  if (j.contains("gauge")) spec.gauge = gauge_from_json(j.at("gauge"), spec.k);
  validate(spec);
  return spec;
}

PotentialSpec random_admissible_polynomial(int k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PolyTerm> terms;
  auto unit = [&](int i) {
    std::vector<int> e(k, 0);
    e[i] = 1;
    return e;
  };
  // dominant diagonal |z^m|^2 part keeps the Hessian positive definite
  for (int m = 0; m < k; ++m)
    terms.push_back({unit(m), unit(m), Cx{rng.uniform(0.8, 1.2), 0.0}});
  // small Hermitian pairs of mixed higher-order terms
  const int extra = 3;
  for (int t = 0; t < extra; ++t) {
    std::vector<int> a(k, 0), b(k, 0);
    int da = 1 + static_cast<int>(rng.uniform() * 2.0);   // 1..2
    int db = 1 + static_cast<int>(rng.uniform() * 2.0);
    for (int i = 0; i < da; ++i) ++a[static_cast<int>(rng.uniform() * k)];
    for (int i = 0; i < db; ++i) ++b[static_cast<int>(rng.uniform() * k)];
    Cx c{rng.uniform(-0.03, 0.03), rng.uniform(-0.03, 0.03)};
    terms.push_back({a, b, c});
    terms.push_back({b, a, std::conj(c)});
  }
  return PotentialSpec::polynomial(k, std::move(terms));
}

}  // namespace sasaki
