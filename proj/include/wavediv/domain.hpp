#pragma once

#include <algorithm>
#include <functional>
#include <utility>

#include "wavediv/density_estimate.hpp"
#include "wavediv/distributions.hpp"

namespace wavediv {

// Trimmed compact interval D_eps with the density floor and cap that realize
// the boundedness condition: clipped densities live in [kappa_floor,
// kappa_cap] on [lo,hi].
struct Domain {
    double lo = 0.0;
    double hi = 1.0;
    double epsilon = 0.0;
    double kappa_floor = 1e-8;
    double kappa_cap = 1e8;

    double length() const { return hi - lo; }
    double clamp(double v) const { return std::clamp(v, kappa_floor, kappa_cap); }
};

// What trim_domain needs from a reference: point evaluation, quantiles and
// support bounds.  Built from an analytic distribution or a fitted estimate
// (whose quantiles come from inverting the integrated estimate).
struct DensityRef {
    DensityFn pdf;
    std::function<double(double)> quantile;
    double support_lo;
    double support_hi;
};

DensityRef make_density_ref(const Distribution& dist);
DensityRef make_density_ref(const WaveletDensityEstimate& estimate);

// D_eps construction.  The interval is the union of the two references'
// central [eps/2, 1-eps/2] quantile ranges clipped to the common support, so
// each reference keeps mass >= 1-eps inside.  Refuses when even the
// intersection of the central ranges is empty (disjoint effective supports:
// the comparison is meaningless).  kappa_floor/cap are the extremes of both
// densities over a dense grid, the floor raised to at least kappa_min.
Domain trim_domain(const DensityRef& f, const DensityRef& g, double epsilon,
                   double kappa_min = 1e-8, int grid_points = 4096);

} // namespace wavediv
