#include "sasaki/fd_jet.hpp"

#include <cmath>
#include <limits>

namespace sasaki {

namespace {

// Wirtinger derivative over the index lists (a, b), innermost first.
Cx wirt(const RealField& field, const ChartPoint& p, const MultiIndex& a,
        const MultiIndex& b, double h) {
  if (!a.empty()) {
    MultiIndex rest(a.begin(), a.end() - 1);
    const int m = a.back();
    ChartPoint pr = p, pl = p, pu = p, pd = p;
    pr.z[m] += h;
    pl.z[m] -= h;
    pu.z[m] += Cx{0.0, h};
    pd.z[m] -= Cx{0.0, h};
    const Cx dre = (wirt(field, pr, rest, b, h) - wirt(field, pl, rest, b, h)) /
                   (2.0 * h);
    const Cx dim = (wirt(field, pu, rest, b, h) - wirt(field, pd, rest, b, h)) /
                   (2.0 * h);
    return 0.5 * (dre - kI * dim);
  }
  if (!b.empty()) {
    MultiIndex rest(b.begin(), b.end() - 1);
    const int m = b.back();
    ChartPoint pr = p, pl = p, pu = p, pd = p;
    pr.z[m] += h;
    pl.z[m] -= h;
    pu.z[m] += Cx{0.0, h};
    pd.z[m] -= Cx{0.0, h};
    const Cx dre = (wirt(field, pr, a, rest, h) - wirt(field, pl, a, rest, h)) /
                   (2.0 * h);
    const Cx dim = (wirt(field, pu, a, rest, h) - wirt(field, pd, a, rest, h)) /
                   (2.0 * h);
    return 0.5 * (dre + kI * dim);
  }
  return Cx{field(p), 0.0};
}

}  // namespace

double fd_min_step(int order) {
  // roundoff ~ eps/h^order crosses truncation ~ h^2 near eps^{1/(order+2)}
  const double eps = std::numeric_limits<double>::epsilon();
  return 0.25 * std::pow(eps, 1.0 / (order + 2));
}

WirtingerJet fd_jet(const RealField& field, const ChartPoint& p, int order,
                    double h) {
  if (order < 0 || order > 4)
    throw InvalidSpecError("fd_jet order must be in 0..4");
  if (!(h > 0.0)) throw StepUnderflowError("fd_jet requires h > 0");
  if (h < fd_min_step(order))
    throw StepUnderflowError("fd_jet step " + std::to_string(h) +
                             " underflows order-" + std::to_string(order) +
                             " stencils");
  WirtingerJet jet(p.k(), order);
  for (const auto& [a, b] : WirtingerJet::canonical_keys(p.k(), order))
    jet.set(a, b, wirt(field, p, a, b, h));
  return jet;
}

WirtingerJet fd_jet_default(const RealField& field, const ChartPoint& p,
                            int order, double h) {
  const WirtingerJet coarse = fd_jet(field, p, order, h);
  const WirtingerJet fine = fd_jet(field, p, order, h / 2.0);
  WirtingerJet jet(p.k(), order);
  for (const auto& [key, v] : coarse.entries()) {
    const Cx vf = fine.entry(key.first, key.second);
    jet.set(key.first, key.second, (4.0 * vf - v) / 3.0);
  }
  return jet;
}

}  // namespace sasaki
