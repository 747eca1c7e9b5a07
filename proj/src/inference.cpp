#include "wavediv/inference.hpp"

#include <cmath>
#include <vector>

#include "wavediv/special_functions.hpp"

namespace wavediv {

double VarianceEstimate::var_of_point() const {
    if (n < 1) throw std::logic_error("variance estimate without a sample size");
    double v = value / static_cast<double>(n);
    if (two_sample()) {
        if (m < 1) throw std::logic_error("two-sample variance without m");
        v += second_value / static_cast<double>(m);
    }
    return v;
}

HFunctions h_functions(const PhiFunctional& phi, const RenormalizedPair& pair) {
    HFunctions h;
    h.h1 = [phi, pair](double x) { return phi.d1(pair.ft(x), pair.gt(x)); };
    h.h2 = [phi, pair](double x) { return phi.d2(pair.ft(x), pair.gt(x)); };
    h.h3 = [phi, pair](double x) { return phi.d1(pair.gt(x), pair.ft(x)); };
    h.h4 = [phi, pair](double x) { return phi.d2(pair.gt(x), pair.ft(x)); };
    return h;
}

namespace {

// family factor d(final)/d(core) for the J(f,g) direction and the J(g,f)
// direction (Renyi needs both core integrals, Tsallis only alpha)
struct DeltaFactors {
    double fg = 1.0;
    double gf = 1.0;
};

DeltaFactors delta_factors(const PhiFunctional& phi, double core_fg, double core_gf) {
    DeltaFactors d;
    switch (phi.kind) {
        case DivergenceKind::renyi:
            d.fg = 1.0 / ((phi.alpha - 1.0) * core_fg);
            d.gf = 1.0 / ((phi.alpha - 1.0) * core_gf);
            break;
        case DivergenceKind::tsallis:
            d.fg = 1.0 / (phi.alpha - 1.0);
            d.gf = d.fg;
            break;
        default:
            break;
    }
    return d;
}

double quad_variance(const QuadratureRule& quad, const Domain& dom, const DensityFn& weight,
                     const DensityFn& h) {
    std::vector<double> xs, ws;
    quad.nodes(dom.lo, dom.hi, xs, ws);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double w = ws[i] * weight(xs[i]);
        const double v = h(xs[i]);
        m1 += w * v;
        m2 += w * v * v;
    }
    return m2 - m1 * m1;
}

double sample_variance(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return acc / (n - 1.0);
}

bool needs_core(const PhiFunctional& phi) { return phi.kind == DivergenceKind::renyi; }

bool needs_swapped_core(const PhiFunctional& phi, Side side) {
    return phi.kind == DivergenceKind::renyi &&
           (side == Side::sym_first || side == Side::sym_second ||
            side == Side::sym_two_sample);
}

} // namespace

DensityFn side_influence(const PhiFunctional& phi, Side side, const RenormalizedPair& pair,
                         double core_fg, double core_gf) {
    const DeltaFactors d = delta_factors(phi, core_fg, core_gf);
    switch (side) {
        case Side::first:
        case Side::two_sample:
            return [phi, pair, d](double x) { return d.fg * phi.d1(pair.ft(x), pair.gt(x)); };
        case Side::second:
            return [phi, pair, d](double x) { return d.fg * phi.d2(pair.ft(x), pair.gt(x)); };
        case Side::sym_first:
        case Side::sym_two_sample:
            return [phi, pair, d](double x) {
                const double ft = pair.ft(x), gt = pair.gt(x);
                return 0.5 * (d.fg * phi.d1(ft, gt) + d.gf * phi.d2(gt, ft));
            };
        case Side::sym_second:
            return [phi, pair, d](double x) {
                const double ft = pair.ft(x), gt = pair.gt(x);
                return 0.5 * (d.fg * phi.d2(ft, gt) + d.gf * phi.d1(gt, ft));
            };
    }
    throw std::logic_error("unhandled side");
}

double alpha_core_integral(const RenormalizedPair& pair, double alpha, const QuadratureRule& quad,
                           bool swapped) {
    return quad.integrate(pair.domain.lo, pair.domain.hi, [&](double x) {
        const double a = swapped ? pair.gt(x) : pair.ft(x);
        const double b = swapped ? pair.ft(x) : pair.gt(x);
        return std::pow(a, alpha) * std::pow(b, 1.0 - alpha);
    });
}

double alpha_core_variance(Side side, double alpha, const RenormalizedPair& pair,
                           const QuadratureRule& quad) {
    const auto ratio_moment = [&](double exponent) {
        return quad.integrate(pair.domain.lo, pair.domain.hi, [&](double x) {
            const double gt = pair.gt(x);
            return gt * std::pow(pair.ft(x) / gt, exponent);
        });
    };
    const double m_alpha = ratio_moment(alpha);
    if (side == Side::first) {
        return alpha * alpha * (ratio_moment(2.0 * alpha - 1.0) - m_alpha * m_alpha);
    }
    if (side == Side::second) {
        const double am1 = alpha - 1.0;
        return am1 * am1 * (ratio_moment(2.0 * alpha) - m_alpha * m_alpha);
    }
    throw std::invalid_argument("alpha_core_variance covers the first and second sides only");
}

VarianceEstimate plug_in_variance(const PhiFunctional& phi, Side side, const SampleSet* samples_x,
                                  const SampleSet* samples_y, const DensityFn& f_est,
                                  const DensityFn& g_est, const Domain& domain,
                                  const QuadratureRule& quad) {
    const bool wants_x = side != Side::second && side != Side::sym_second;
    const bool wants_y = side == Side::second || side == Side::sym_second ||
                         side == Side::two_sample || side == Side::sym_two_sample;
    if (wants_x && samples_x == nullptr) {
        throw std::invalid_argument("plug_in_variance: side needs samples from f");
    }
    if (wants_y && samples_y == nullptr) {
        throw std::invalid_argument("plug_in_variance: side needs samples from g");
    }

    const RenormalizedPair pair = renormalize(f_est, g_est, domain, quad);
    const double core_fg = needs_core(phi) ? alpha_core_integral(pair, phi.alpha, quad) : 1.0;
    const double core_gf =
        needs_swapped_core(phi, side) ? alpha_core_integral(pair, phi.alpha, quad, true) : 1.0;

    const auto collect = [&](const SampleSet& s, const DensityFn& h) {
        std::vector<double> vals;
        vals.reserve(s.values.size());
        for (double x : s.values) {
            if (x >= domain.lo && x <= domain.hi) vals.push_back(h(x));
        }
        if (vals.size() < 2) {
            throw std::runtime_error("plug_in_variance: fewer than 2 in-domain samples");
        }
        return sample_variance(vals);
    };

    VarianceEstimate out;
    out.side = side;
    out.method = VarianceMethod::plug_in_empirical;

    switch (side) {
        case Side::first:
        case Side::sym_first: {
            out.value = collect(*samples_x, side_influence(phi, side, pair, core_fg, core_gf));
            out.n = samples_x->size();
            break;
        }
        case Side::second:
        case Side::sym_second: {
            out.value = collect(*samples_y, side_influence(phi, side, pair, core_fg, core_gf));
            out.n = samples_y->size();
            break;
        }
        case Side::two_sample:
        case Side::sym_two_sample: {
            const Side s1 = side == Side::two_sample ? Side::two_sample : Side::sym_two_sample;
            const Side s2 = side == Side::two_sample ? Side::second : Side::sym_second;
            out.value = collect(*samples_x, side_influence(phi, s1, pair, core_fg, core_gf));
            out.second_value =
                collect(*samples_y, side_influence(phi, s2, pair, core_fg, core_gf));
            out.n = samples_x->size();
            out.m = samples_y->size();
            break;
        }
    }
    if (out.value < 0.0 || out.second_value < 0.0) {
        throw std::runtime_error("plug_in_variance: negative variance");
    }
    return out;
}

double closed_form_variance(const PhiFunctional& phi, Side side, const DensityFn& f_pdf,
                            const DensityFn& g_pdf, const Domain& domain,
                            const QuadratureRule& quad) {
    if (side == Side::two_sample || side == Side::sym_two_sample) {
        throw std::invalid_argument(
            "closed_form_variance: two-sample combines the per-side calls");
    }
    const RenormalizedPair pair = renormalize(f_pdf, g_pdf, domain, quad);

    double var = 0.0;
    if ((side == Side::first || side == Side::second) && phi.is_alpha_family()) {
        // display forms sigma_1^2 / sigma_2^2 with the exact delta scaling
        const double core = alpha_core_variance(side, phi.alpha, pair, quad);
        const double am1 = phi.alpha - 1.0;
        if (phi.kind == DivergenceKind::tsallis) {
            var = core / (am1 * am1);
        } else {
            const double i_fg = alpha_core_integral(pair, phi.alpha, quad);
            var = core / (am1 * am1 * i_fg * i_fg);
        }
    } else if ((side == Side::first || side == Side::second) &&
               phi.kind == DivergenceKind::kl) {
        if (side == Side::first) {
            // Var_f(1 + log(f/g))
            var = quad_variance(quad, domain, [&pair](double x) { return pair.ft(x); },
                                [&pair](double x) { return 1.0 + std::log(pair.ft(x) / pair.gt(x)); });
        } else {
            // integral f^2/g - 1
            var = quad.integrate(domain.lo, domain.hi,
                                 [&pair](double x) {
                                     const double ft = pair.ft(x);
                                     return ft * ft / pair.gt(x);
                                 }) -
                  1.0;
        }
    } else {
        // generic Var of the side influence under the estimated side's density
        const double core_fg = needs_core(phi) ? alpha_core_integral(pair, phi.alpha, quad) : 1.0;
        const double core_gf =
            needs_swapped_core(phi, side) ? alpha_core_integral(pair, phi.alpha, quad, true) : 1.0;
        const DensityFn h = side_influence(phi, side, pair, core_fg, core_gf);
        const bool against_f = side == Side::first || side == Side::sym_first;
        const DensityFn weight = against_f ? DensityFn([&pair](double x) { return pair.ft(x); })
                                           : DensityFn([&pair](double x) { return pair.gt(x); });
        var = quad_variance(quad, domain, weight, h);
    }

    if (!std::isfinite(var)) {
        throw std::runtime_error("closed_form_variance: non-finite integrand (clipping violated)");
    }
    if (var < 0.0 && var > -1e-12) var = 0.0;
    if (var < 0.0) throw std::runtime_error("closed_form_variance: negative variance");
    return var;
}

RateBoundConstants rate_bound_constants(const PhiFunctional& phi, const DensityFn& f_pdf,
                                        const DensityFn& g_pdf, const Domain& domain,
                                        const QuadratureRule& quad) {
    const RenormalizedPair pair = renormalize(f_pdf, g_pdf, domain, quad);
    const double core_fg = needs_core(phi) ? alpha_core_integral(pair, phi.alpha, quad) : 1.0;
    const double core_gf = needs_core(phi) ? alpha_core_integral(pair, phi.alpha, quad, true) : 1.0;
    const DeltaFactors d = delta_factors(phi, core_fg, core_gf);

    const auto abs_integral = [&](auto&& h) {
        const double v = quad.integrate(domain.lo, domain.hi,
                                        [&](double x) { return std::fabs(h(x)); });
        if (!std::isfinite(v)) {
            throw std::runtime_error("rate_bound_constants: non-finite integrand");
        }
        return v;
    };

    RateBoundConstants out;
    out.a1 = abs_integral([&](double x) { return d.fg * phi.d1(pair.ft(x), pair.gt(x)); });
    out.a2 = abs_integral([&](double x) { return d.fg * phi.d2(pair.ft(x), pair.gt(x)); });
    out.a3 = abs_integral([&](double x) { return d.gf * phi.d1(pair.gt(x), pair.ft(x)); });
    out.a4 = abs_integral([&](double x) { return d.gf * phi.d2(pair.gt(x), pair.ft(x)); });
    out.sym_first = 0.5 * (out.a1 + out.a4);
    out.sym_second = 0.5 * (out.a2 + out.a3);
    return out;
}

double standardized_statistic(double point, double reference, const VarianceEstimate& var) {
    const double v = var.var_of_point();
    if (!(v > 0.0)) {
        throw DegenerateVarianceError(
            "degenerate variance: the CLT does not apply; use interval-based testing");
    }
    return (point - reference) / std::sqrt(v);
}

std::pair<double, double> confidence_interval(double point, const VarianceEstimate& var,
                                              double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must lie in (0,1)");
    }
    const double v = var.var_of_point();
    if (v < 0.0) throw std::invalid_argument("negative variance");
    const double half = normal_quantile(0.5 * (1.0 + level)) * std::sqrt(v);
    return {point - half, point + half};
}

} // namespace wavediv
