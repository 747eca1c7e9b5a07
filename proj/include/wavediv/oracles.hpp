#pragma once

#include <optional>
#include <stdexcept>

#include "wavediv/distributions.hpp"
#include "wavediv/divergence.hpp"

namespace wavediv {

// Signals a divergence that is infinite by the finiteness condition of the
// Gamma-function formula.
class InfiniteDivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OracleFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// I_alpha between Beta(a,b) and Beta(c,d) densities through the
// Gamma-function identity, evaluated in log space.  Requires
// alpha*a + (1-alpha)*c > 0 and alpha*b + (1-alpha)*d > 0 (strict: at
// equality a Gamma argument hits zero and the integral diverges);
// throws InfiniteDivergenceError otherwise.
double beta_I_alpha(double a, double b, double c, double d, double alpha);

bool beta_I_alpha_finite(double a, double b, double c, double d, double alpha);

// Analytic divergence on the untrimmed common support for the supported
// pairs: Gaussian-Gaussian KL, Beta-Beta Renyi/Tsallis (via beta_I_alpha),
// Uniform-Uniform everything.  nullopt when the pair/kind combination is
// unsupported (callers fall back to quadrature_oracle).
std::optional<double> closed_form_divergence(const Distribution& f, const Distribution& g,
                                             const PhiFunctional& phi);

struct OracleValue {
    double value = 0.0;          // finalized divergence
    double core = 0.0;           // integral of phi(f,g) before finalization
    double error_estimate = 0.0; // panel-doubling (Richardson-style) estimate of the core
};

// High-resolution reference integral of phi(f(x), g(x)) over [lo,hi]:
// composite 8-point Gauss-Legendre panels, doubled until the Richardson-style
// estimate |Q_2M - Q_M| falls below tol (relative to the value scale),
// starting at 2^16 evaluations.  No clipping or renormalization here - this
// is the raw integral.  Throws OracleFailure when the target is not reached.
OracleValue quadrature_oracle(const DensityFn& f, const DensityFn& g, const PhiFunctional& phi,
                              double lo, double hi, double tol = 1e-9);

// D^(eps) reference for Monte Carlo studies: the same clipping and
// renormalization semantics as the divergence module, but integrated with
// the oracle integrator - an independent code path from the composite
// Simpson/midpoint rules.
OracleValue reference_divergence(const Distribution& f, const Distribution& g,
                                 const PhiFunctional& phi, const Domain& domain,
                                 double tol = 1e-10);

} // namespace wavediv
