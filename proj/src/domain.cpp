#include "wavediv/domain.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

namespace wavediv {

DensityRef make_density_ref(const Distribution& dist) {
    DensityRef ref;
    ref.pdf = [dist](double x) { return dist.pdf(x); };
    ref.quantile = [dist](double p) { return dist.quantile(p); };
    ref.support_lo = dist.support_lo();
    ref.support_hi = dist.support_hi();
    return ref;
}

DensityRef make_density_ref(const WaveletDensityEstimate& estimate) {
    // Quantiles come from the integrated estimate.  Negative excursions of
    // the linear estimator are floored at zero for the CDF so the inversion
    // is monotone.
    const double lo = estimate.support_begin();
    const double hi = estimate.support_end();
    const int n = 4096;
    const double h = (hi - lo) / n;
    auto cdf = std::make_shared<std::vector<double>>();
    cdf->reserve(n + 1);
    cdf->push_back(0.0);
    double acc = 0.0;
    double prev = std::max(0.0, estimate(lo));
    for (int i = 1; i <= n; ++i) {
        const double cur = std::max(0.0, estimate(lo + h * i));
        acc += 0.5 * h * (prev + cur);
        cdf->push_back(acc);
        prev = cur;
    }
    const double total = cdf->back();
    if (!(total > 0.0)) {
        throw std::runtime_error("estimate has no positive mass; cannot build quantiles");
    }

    DensityRef ref;
    auto est = std::make_shared<WaveletDensityEstimate>(estimate);
    ref.pdf = [est](double x) { return (*est)(x); };
    ref.quantile = [cdf, total, lo, h, n](double p) {
        const double target = p * total;
        // first grid point where the integrated mass reaches the target
        int a = 0, b = n;
        while (a + 1 < b) {
            const int mid = (a + b) / 2;
            if ((*cdf)[static_cast<std::size_t>(mid)] < target) {
                a = mid;
            } else {
                b = mid;
            }
        }
        const double ca = (*cdf)[static_cast<std::size_t>(a)];
        const double cb = (*cdf)[static_cast<std::size_t>(b)];
        const double t = cb > ca ? (target - ca) / (cb - ca) : 0.5;
        return lo + h * (a + t);
    };
    ref.support_lo = lo;
    ref.support_hi = hi;
    return ref;
}

Domain trim_domain(const DensityRef& f, const DensityRef& g, double epsilon, double kappa_min,
                   int grid_points) {
    if (!(epsilon > 0.0) || epsilon > 0.1) {
        throw std::invalid_argument("epsilon must lie in (0, 0.1]");
    }
    if (!(kappa_min > 0.0)) throw std::invalid_argument("kappa_min must be positive");
    if (grid_points < 16) throw std::invalid_argument("domain grid too coarse");

    const double fl = f.quantile(epsilon / 2.0), fu = f.quantile(1.0 - epsilon / 2.0);
    const double gl = g.quantile(epsilon / 2.0), gu = g.quantile(1.0 - epsilon / 2.0);

    // Disjoint effective supports make the comparison meaningless.
    if (std::max(fl, gl) >= std::min(fu, gu)) {
        throw std::runtime_error("trim_domain: effective supports are disjoint");
    }

    double lo = std::min(fl, gl);
    double hi = std::max(fu, gu);
    lo = std::max(lo, std::max(f.support_lo, g.support_lo));
    hi = std::min(hi, std::min(f.support_hi, g.support_hi));
    if (!(hi > lo)) {
        throw std::runtime_error("trim_domain: trimmed interval is empty");
    }

    double vmin = std::numeric_limits<double>::infinity();
    double vmax = 0.0;
    const double h = (hi - lo) / grid_points;
    for (int i = 0; i <= grid_points; ++i) {
        const double x = lo + h * i;
        const double fv = f.pdf(x);
        const double gv = g.pdf(x);
        vmin = std::min(vmin, std::min(fv, gv));
        vmax = std::max(vmax, std::max(fv, gv));
    }

    Domain d;
    d.lo = lo;
    d.hi = hi;
    d.epsilon = epsilon;
    d.kappa_floor = std::max(vmin, kappa_min);
    d.kappa_cap = std::max(vmax, d.kappa_floor);
    return d;
}

} // namespace wavediv
