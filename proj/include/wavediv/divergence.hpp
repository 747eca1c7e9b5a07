#pragma once

#include <vector>

#include "wavediv/domain.hpp"
#include "wavediv/phi_functional.hpp"
#include "wavediv/quadrature.hpp"

namespace wavediv {

// Evaluators clipped to [kappa_floor, kappa_cap] on the domain and
// renormalized by their clipped mass, so they are exact densities on D_eps.
// The same quadrature rule computes the renormalizers and every integral
// built on the pair, which keeps self-divergence identically zero.
struct RenormalizedPair {
    Domain domain;
    DensityFn f, g;
    double d1 = 1.0, d2 = 1.0; // clipped masses of f and g on the domain

    double ft(double x) const { return domain.clamp(f(x)) / d1; }
    double gt(double x) const { return domain.clamp(g(x)) / d2; }
};

RenormalizedPair renormalize(DensityFn f, DensityFn g, const Domain& domain,
                             const QuadratureRule& quad);

struct DivergenceValue {
    double value = 0.0; // finalized D^(eps)
    double core = 0.0;  // integral of phi(ft, gt) before finalization
    double d1 = 1.0;    // renormalizer of f
    double d2 = 1.0;    // renormalizer of g
};

// D^(eps)(f,g): integral over the domain of phi applied to the clipped,
// renormalized densities, then the kind's finalization.  Throws on a
// non-finite integrand, naming where it happened.
DivergenceValue divergence(const PhiFunctional& phi, const DensityFn& f, const DensityFn& g,
                           const Domain& domain, const QuadratureRule& quad);

// (J(f,g) + J(g,f)) / 2 with both runs on the same domain and rule.
DivergenceValue symmetrized_divergence(const PhiFunctional& phi, const DensityFn& f,
                                       const DensityFn& g, const Domain& domain,
                                       const QuadratureRule& quad);

// Besov-style second-difference diagnostic:
// sup over grid x h_set of |f(x+h) - 2 f(x) + f(x-h)| / h^t, plus sup |f|.
struct BesovSeminorm {
    double sup_abs = 0.0;
    double second_difference = 0.0;
    double total() const { return sup_abs + second_difference; }
};

BesovSeminorm besov_seminorm(const DensityFn& f, double t, const std::vector<double>& grid,
                             const std::vector<double>& h_set);

} // namespace wavediv
