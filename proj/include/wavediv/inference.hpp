#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include "wavediv/divergence.hpp"
#include "wavediv/sample_set.hpp"

namespace wavediv {

// Raised when a standardized statistic is requested with zero variance
// (e.g. KL under an exact null, where h1 is constant).  The supported
// workflow in that situation is interval-based testing, never a p-value.
class DegenerateVarianceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Which density is estimated.  Symmetrized sides refer to
// J_s = (J(f,g) + J(g,f))/2, whose influence is the halved h-sum.
enum class Side { first, second, two_sample, sym_first, sym_second, sym_two_sample };

enum class VarianceMethod { plug_in_empirical, closed_form_quadrature };

struct VarianceEstimate {
    double value = 0.0;        // asymptotic variance V1 of the (first) estimated side
    double second_value = 0.0; // V2 for two-sample sides
    Side side = Side::first;
    VarianceMethod method = VarianceMethod::plug_in_empirical;
    long n = 0;
    long m = 0;

    bool two_sample() const {
        return side == Side::two_sample || side == Side::sym_two_sample;
    }

    // variance of the point estimate itself: V1/n, plus V2/m for two-sample
    // sides; the standardized statistic divides by its square root
    double var_of_point() const;
};

// h1 = phi_1(f,g), h2 = phi_2(f,g), h3 = phi_1(g,f), h4 = phi_2(g,f),
// evaluated on the clipped renormalized pair.
struct HFunctions {
    DensityFn h1, h2, h3, h4;
};

HFunctions h_functions(const PhiFunctional& phi, const RenormalizedPair& pair);

// Influence function of the finalized divergence for one side, including
// the family's delta-method factor (Renyi divides by (alpha-1) I, Tsallis by
// (alpha-1)) and the 1/2 of the symmetrized form.  core_fg / core_gf are the
// I integrals in both directions (only Renyi consumes them).
DensityFn side_influence(const PhiFunctional& phi, Side side, const RenormalizedPair& pair,
                         double core_fg, double core_gf);

// I(alpha) = integral of ft^alpha gt^(1-alpha) over the domain (swap = g vs f)
double alpha_core_integral(const RenormalizedPair& pair, double alpha, const QuadratureRule& quad,
                           bool swapped = false);

// Paper-form variance of the alpha core: side first gives sigma_1^2(alpha),
// side second gives sigma_2^2(alpha).  The family variances are these
// divided by the delta-method factors, an identity kept exact in code.
double alpha_core_variance(Side side, double alpha, const RenormalizedPair& pair,
                           const QuadratureRule& quad);

// Empirical variance of the side's plug-in influence over in-domain sample
// points.  samples_x is required for f-sides, samples_y for g-sides; both
// for two-sample sides.  Refuses fewer than 2 in-domain points.
VarianceEstimate plug_in_variance(const PhiFunctional& phi, Side side, const SampleSet* samples_x,
                                  const SampleSet* samples_y, const DensityFn& f_est,
                                  const DensityFn& g_est, const Domain& domain,
                                  const QuadratureRule& quad);

// Closed-form expressions for the asymptotic variance under known
// densities, evaluated by quadrature on the clipped renormalized pair.
// Supports the four one-sample sides; two-sample callers combine the two
// sides.
double closed_form_variance(const PhiFunctional& phi, Side side, const DensityFn& f_pdf,
                            const DensityFn& g_pdf, const Domain& domain,
                            const QuadratureRule& quad);

// A-constants of the a.s. rate bounds: a1..a4 are integrals of |h_i| over
// the domain with the family scaling applied, plus the symmetrized halves.
struct RateBoundConstants {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
    double sym_first = 0.0;  // (a1 + a4) / 2
    double sym_second = 0.0; // (a2 + a3) / 2
};

RateBoundConstants rate_bound_constants(const PhiFunctional& phi, const DensityFn& f_pdf,
                                        const DensityFn& g_pdf, const Domain& domain,
                                        const QuadratureRule& quad);

// (point - reference) / sqrt(var_of_point); the two-sample case reproduces
// the sqrt(nm / (m V1 + n V2)) scaling.  Throws DegenerateVarianceError when
// the variance is not positive.
double standardized_statistic(double point, double reference, const VarianceEstimate& var);

// point +- z_{(1+level)/2} sqrt(var_of_point); a zero variance degenerates
// to [point, point].
std::pair<double, double> confidence_interval(double point, const VarianceEstimate& var,
                                              double level);

} // namespace wavediv
