#pragma once

#include <functional>

#include "sasaki/jet.hpp"
#include "sasaki/types.hpp"

namespace sasaki {

using RealField = std::function<double(const ChartPoint&)>;

// Central-difference Wirtinger jet: each derivative level applies
// d/dz = (d/dRe - i d/dIm)/2 with +-h stencils, nested for higher orders.
// Plain O(h^2); independent oracle for evaluate_jet. Throws
// StepUnderflowError when h is below the cancellation floor for the
// requested order (~eps^{1/(order+2)}).
WirtingerJet fd_jet(const RealField& field, const ChartPoint& p, int order,
                    double h);

// Default-step oracle: h = 1e-2 with one Richardson level, error O(h^4).
WirtingerJet fd_jet_default(const RealField& field, const ChartPoint& p,
                            int order = 4, double h = 1e-2);

double fd_min_step(int order);

}  // namespace sasaki
