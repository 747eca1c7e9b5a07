#include "wavediv/oracles.hpp"

#include <cmath>

#include "wavediv/special_functions.hpp"

namespace wavediv {

namespace {

// 8-point Gauss-Legendre nodes (positive half) and weights on [-1,1]
constexpr double kGlNode[4] = {0.18343464249564980494, 0.52553240991632898582,
                               0.79666647741362673959, 0.96028985649753623168};
constexpr double kGlWeight[4] = {0.36268378337836198297, 0.31370664587788728734,
                                 0.22238103445337447054, 0.10122853629037625915};

template <typename F>
double gauss_panels(F&& f, double lo, double hi, long panels) {
    const double h = (hi - lo) / static_cast<double>(panels);
    double acc = 0.0;
    for (long p = 0; p < panels; ++p) {
        const double c = lo + h * (static_cast<double>(p) + 0.5);
        const double r = 0.5 * h;
        double local = 0.0;
        for (int i = 0; i < 4; ++i) {
            local += kGlWeight[i] * (f(c + r * kGlNode[i]) + f(c - r * kGlNode[i]));
        }
        acc += local * r;
    }
    return acc;
}

template <typename F>
double refine_to_tolerance(F&& f, double lo, double hi, double tol, double* err_out) {
    long panels = 1L << 13; // 2^16 evaluations at 8 nodes per panel
    double prev = gauss_panels(f, lo, hi, panels);
    for (int round = 0; round < 5; ++round) {
        panels *= 2;
        const double cur = gauss_panels(f, lo, hi, panels);
        const double err = std::fabs(cur - prev);
        if (err <= tol * std::max(1.0, std::fabs(cur))) {
            if (err_out) *err_out = err;
            return cur;
        }
        prev = cur;
    }
    throw OracleFailure("quadrature oracle did not reach the error target");
}

} // namespace

bool beta_I_alpha_finite(double a, double b, double c, double d, double alpha) {
    return alpha * a + (1.0 - alpha) * c > 0.0 && alpha * b + (1.0 - alpha) * d > 0.0;
}

double beta_I_alpha(double a, double b, double c, double d, double alpha) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0)) {
        throw std::invalid_argument("beta_I_alpha: shape parameters must be positive");
    }
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("beta_I_alpha: alpha must be positive");
    }
    if (!beta_I_alpha_finite(a, b, c, d, alpha)) {
        throw InfiniteDivergenceError("I_alpha is infinite: alpha*a+(1-alpha)*c and "
                                      "alpha*b+(1-alpha)*d must be positive");
    }
    const double ea = alpha * a + (1.0 - alpha) * c;
    const double eb = alpha * b + (1.0 - alpha) * d;
    const double log_i = alpha * (lgamma_lanczos(a + b) - lgamma_lanczos(a) - lgamma_lanczos(b)) +
                         (1.0 - alpha) *
                             (lgamma_lanczos(c + d) - lgamma_lanczos(c) - lgamma_lanczos(d)) +
                         lgamma_lanczos(ea) + lgamma_lanczos(eb) - lgamma_lanczos(ea + eb);
    return std::exp(log_i);
}

std::optional<double> closed_form_divergence(const Distribution& f, const Distribution& g,
                                             const PhiFunctional& phi) {
    using Family = Distribution::Family;

    if (f.family() == Family::gaussian && g.family() == Family::gaussian &&
        phi.kind == DivergenceKind::kl) {
        const double m1 = f.param1(), s1 = f.param2();
        const double m2 = g.param1(), s2 = g.param2();
        const double dm = m1 - m2;
        return std::log(s2 / s1) + (s1 * s1 + dm * dm) / (2.0 * s2 * s2) - 0.5;
    }

    if (f.family() == Family::beta && g.family() == Family::beta && phi.is_alpha_family()) {
        const double core =
            beta_I_alpha(f.param1(), f.param2(), g.param1(), g.param2(), phi.alpha);
        return phi.finalize(core);
    }

    if (f.family() == Family::uniform && g.family() == Family::uniform) {
        const double a1 = f.param1(), b1 = f.param2();
        const double a2 = g.param1(), b2 = g.param2();
        const double lf = b1 - a1, lg = b2 - a2;
        const double overlap = std::min(b1, b2) - std::max(a1, a2);
        switch (phi.kind) {
            case DivergenceKind::renyi:
            case DivergenceKind::tsallis: {
                if (overlap <= 0.0) {
                    throw InfiniteDivergenceError("uniform supports do not overlap");
                }
                const double core =
                    overlap * std::pow(lf, -phi.alpha) * std::pow(lg, phi.alpha - 1.0);
                return phi.finalize(core);
            }
            case DivergenceKind::kl: {
                // finite only when supp f lies inside supp g
                if (a1 < a2 || b1 > b2) {
                    throw InfiniteDivergenceError("KL(uniform,uniform) with escaping mass");
                }
                return std::log(lg / lf);
            }
            case DivergenceKind::l2: {
                const double ov = std::max(overlap, 0.0);
                return (lf - ov) / (lf * lf) + (lg - ov) / (lg * lg) +
                       ov * (1.0 / lf - 1.0 / lg) * (1.0 / lf - 1.0 / lg);
            }
            default:
                break;
        }
    }

    return std::nullopt;
}

OracleValue quadrature_oracle(const DensityFn& f, const DensityFn& g, const PhiFunctional& phi,
                              double lo, double hi, double tol) {
    if (!(hi > lo)) throw std::invalid_argument("quadrature_oracle: empty interval");
    OracleValue out;
    out.core = refine_to_tolerance(
        [&](double x) { return phi.phi(f(x), g(x)); }, lo, hi, tol, &out.error_estimate);
    if (!std::isfinite(out.core)) {
        throw OracleFailure("quadrature oracle produced a non-finite core integral");
    }
    out.value = phi.finalize(out.core);
    return out;
}

OracleValue reference_divergence(const Distribution& f, const Distribution& g,
                                 const PhiFunctional& phi, const Domain& domain, double tol) {
    const auto fc = [&](double x) { return domain.clamp(f.pdf(x)); };
    const auto gc = [&](double x) { return domain.clamp(g.pdf(x)); };
    double e1 = 0.0, e2 = 0.0;
    const double d1 = refine_to_tolerance(fc, domain.lo, domain.hi, tol, &e1);
    const double d2 = refine_to_tolerance(gc, domain.lo, domain.hi, tol, &e2);

    OracleValue out;
    out.core = refine_to_tolerance([&](double x) { return phi.phi(fc(x) / d1, gc(x) / d2); },
                                   domain.lo, domain.hi, tol, &out.error_estimate);
    out.value = phi.finalize(out.core);
    if (!std::isfinite(out.value)) {
        throw OracleFailure("reference divergence is non-finite");
    }
    return out;
}

} // namespace wavediv
