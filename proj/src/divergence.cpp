#include "wavediv/divergence.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wavediv {

RenormalizedPair renormalize(DensityFn f, DensityFn g, const Domain& domain,
                             const QuadratureRule& quad) {
    RenormalizedPair pair;
    pair.domain = domain;
    pair.f = std::move(f);
    pair.g = std::move(g);
    pair.d1 = quad.integrate(domain.lo, domain.hi,
                             [&](double x) { return domain.clamp(pair.f(x)); });
    pair.d2 = quad.integrate(domain.lo, domain.hi,
                             [&](double x) { return domain.clamp(pair.g(x)); });
    if (!(pair.d1 > 0.0) || !(pair.d2 > 0.0)) {
        throw std::runtime_error("renormalize: clipped density has no mass on the domain");
    }
    return pair;
}

DivergenceValue divergence(const PhiFunctional& phi, const DensityFn& f, const DensityFn& g,
                           const Domain& domain, const QuadratureRule& quad) {
    std::vector<double> xs, ws;
    quad.nodes(domain.lo, domain.hi, xs, ws);

    const std::size_t n = xs.size();
    std::vector<double> fa(n), ga(n);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        fa[i] = domain.clamp(f(xs[i]));
        ga[i] = domain.clamp(g(xs[i]));
        d1 += ws[i] * fa[i];
        d2 += ws[i] * ga[i];
    }
    if (!(d1 > 0.0) || !(d2 > 0.0)) {
        throw std::runtime_error("divergence: clipped density has no mass on the domain");
    }

    double core = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double term = phi.phi(fa[i] / d1, ga[i] / d2);
        if (!std::isfinite(term)) {
            std::ostringstream os;
            os << "divergence: non-finite integrand near x = " << xs[i] << " (f~="
               << fa[i] / d1 << ", g~=" << ga[i] / d2 << ")";
            throw std::runtime_error(os.str());
        }
        core += ws[i] * term;
    }

    DivergenceValue out;
    out.core = core;
    out.d1 = d1;
    out.d2 = d2;
    out.value = phi.finalize(core);
    if (!std::isfinite(out.value)) {
        throw std::runtime_error("divergence: finalization produced a non-finite value");
    }
    return out;
}

DivergenceValue symmetrized_divergence(const PhiFunctional& phi, const DensityFn& f,
                                       const DensityFn& g, const Domain& domain,
                                       const QuadratureRule& quad) {
    const DivergenceValue fwd = divergence(phi, f, g, domain, quad);
    const DivergenceValue rev = divergence(phi, g, f, domain, quad);
    DivergenceValue out;
    out.value = 0.5 * (fwd.value + rev.value);
    out.core = 0.5 * (fwd.core + rev.core);
    out.d1 = fwd.d1;
    out.d2 = fwd.d2;
    return out;
}

BesovSeminorm besov_seminorm(const DensityFn& f, double t, const std::vector<double>& grid,
                             const std::vector<double>& h_set) {
    if (!(t > 0.0) || t >= 1.0) {
        throw std::invalid_argument("besov_seminorm implements the [t]=0 criterion: t in (0,1)");
    }
    if (grid.empty() || h_set.empty()) {
        throw std::invalid_argument("besov_seminorm needs a grid and step set");
    }
    BesovSeminorm out;
    for (double x : grid) {
        out.sup_abs = std::max(out.sup_abs, std::fabs(f(x)));
        for (double h : h_set) {
            if (!(h > 0.0)) throw std::invalid_argument("besov steps must be positive");
            const double second = f(x + h) - 2.0 * f(x) + f(x - h);
            out.second_difference =
                std::max(out.second_difference, std::fabs(second) / std::pow(h, t));
        }
    }
    return out;
}

} // namespace wavediv
