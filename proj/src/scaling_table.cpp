#include "wavediv/scaling_table.hpp"

#include <cmath>
#include <stdexcept>

namespace wavediv {

ScalingFunctionTable::ScalingFunctionTable(ScalingFilter filter, int depth,
                                           std::vector<double> values, double majorant)
    : filter_(std::move(filter)),
      depth_(depth),
      width_(static_cast<double>(filter_.support_end())),
      scale_(std::ldexp(1.0, depth)),
      majorant_(majorant),
      values_(std::move(values)) {}

ScalingTablePtr build_scaling_table(const ScalingFilter& filter, int depth) {
    if (depth < 4 || depth > 20) {
        throw std::invalid_argument("table depth must lie in [4,20]");
    }
    validate_filter(filter);

    const auto& h = filter.coefficients;
    const int L = static_cast<int>(h.size());
    const int W = L - 1;
    const double sqrt2 = std::sqrt(2.0);

    // Integer-point values solve v = T v with T[m][p] = sqrt(2) h_{2m-p}.
    // T is column-stochastic for an admissible filter, so power iteration
    // preserves sum(v) = 1 and converges to the eigenvalue-1 vector.
    // Starting at e0 picks the right-continuous fixed point for Haar, whose
    // T is the identity.
    std::vector<double> v(L, 0.0), w(L, 0.0);
    v[0] = 1.0;
    for (int iter = 0; iter < 256; ++iter) {
        for (int m = 0; m < L; ++m) {
            double acc = 0.0;
            for (int p = 0; p < L; ++p) {
                const int k = 2 * m - p;
                if (k >= 0 && k < L) acc += h[k] * v[p];
            }
            w[m] = sqrt2 * acc;
        }
        double sum = 0.0;
        for (double x : w) sum += x;
        if (sum == 0.0) {
            throw std::invalid_argument("scaling eigenproblem degenerated (malformed filter)");
        }
        for (int m = 0; m < L; ++m) v[m] = w[m] / sum;
    }
    double residual = 0.0;
    for (int m = 0; m < L; ++m) {
        double acc = 0.0;
        for (int p = 0; p < L; ++p) {
            const int k = 2 * m - p;
            if (k >= 0 && k < L) acc += h[k] * v[p];
        }
        residual = std::max(residual, std::fabs(sqrt2 * acc - v[m]));
    }
    if (residual > 1e-10) {
        throw std::invalid_argument(
            "refinement eigenproblem has no eigenvalue-1 eigenvector (malformed filter)");
    }

    const std::size_t n = static_cast<std::size_t>(W) << depth;
    std::vector<double> values(n + 1, 0.0);
    const long full = 1L << depth;

    if (L == 2) {
        // Haar: phi = 1 on [0,1).  Store the left limit at the jump so that
        // interpolation inside the half-open support is exact.
        values.assign(n + 1, v[0]);
    } else {
        // Dyadic refinement down to the requested depth.  Midpoints of level
        // l come exactly from level l-1 via the two-scale relation.
        for (int m = 0; m <= W; ++m) values[static_cast<std::size_t>(m) * full] = v[m];
        for (int level = 1; level <= depth; ++level) {
            const long stride = 1L << (depth - level);
            for (long i = stride; i < static_cast<long>(n); i += 2 * stride) {
                double acc = 0.0;
                for (int k = 0; k < L; ++k) {
                    const long src = 2 * i - static_cast<long>(k) * full;
                    if (src >= 0 && src <= static_cast<long>(n)) acc += h[k] * values[src];
                }
                values[i] = sqrt2 * acc;
            }
        }
    }

    double vmax = 0.0;
    for (double x : values) vmax = std::max(vmax, std::fabs(x));
    const double majorant = vmax * vmax * static_cast<double>(W + 1);

    return std::make_shared<ScalingFunctionTable>(filter, depth, std::move(values), majorant);
}

double eval_scaling(const ScalingFunctionTable& table, double x) { return table(x); }

double kernel(const ScalingFunctionTable& table, double x, double y) {
    const double W = table.support_width();
    // phi(t) != 0 needs t in [0,W), i.e. k in (x-W, x] for both arguments.
    const long k0 = static_cast<long>(std::floor(std::max(x, y) - W)) + 1;
    const long k1 = static_cast<long>(std::floor(std::min(x, y)));
    double acc = 0.0;
    for (long k = k0; k <= k1; ++k) {
        acc += table(x - static_cast<double>(k)) * table(y - static_cast<double>(k));
    }
    return acc;
}

double kernel_at_level(const ScalingFunctionTable& table, int j, double x, double y) {
    if (j < 0) throw std::invalid_argument("resolution level must be >= 0");
    const double s = std::ldexp(1.0, j);
    return s * kernel(table, s * x, s * y);
}

std::function<double(double)> project(const ScalingTablePtr& table, int j,
                                      const std::function<double(double)>& h,
                                      std::pair<double, double> interval, int refine_depth) {
    if (j < 0) throw std::invalid_argument("resolution level must be >= 0");
    if (refine_depth < 0) refine_depth = table->depth();
    if (refine_depth > table->depth()) {
        throw std::invalid_argument("refine_depth exceeds table depth");
    }
    if (refine_depth < 1) {
        // spacing would not resolve the 2^-j cells of the projection
        throw std::invalid_argument("projection quadrature coarser than the resolution level");
    }
    const double W = table->support_width();
    const double sj = std::ldexp(1.0, j);
    const double sj2 = std::sqrt(sj);

    // phi_{j,k} overlaps [a,b] iff 2^j a - W <= k <= 2^j b
    const long k0 = static_cast<long>(std::ceil(sj * interval.first - W));
    const long k1 = static_cast<long>(std::floor(sj * interval.second));
    if (k1 < k0) throw std::invalid_argument("projection interval is empty");

    // c_k = <h, phi_{j,k}> by composite trapezoid aligned with the table grid.
    const long stride = 1L << (table->depth() - refine_depth);
    const long cells = static_cast<long>(W) << refine_depth;
    const double du = std::ldexp(1.0, -refine_depth);
    std::vector<double> coef(static_cast<std::size_t>(k1 - k0 + 1), 0.0);
    for (long k = k0; k <= k1; ++k) {
        double acc = 0.0;
        for (long i = 0; i <= cells; ++i) {
            const double phi = table->value_at(static_cast<std::size_t>(i * stride));
            if (phi == 0.0) continue;
            const double u = static_cast<double>(i) * du;
            double term = phi * h((u + static_cast<double>(k)) / sj);
            if (i == 0 || i == cells) term *= 0.5;
            acc += term;
        }
        coef[static_cast<std::size_t>(k - k0)] = acc * du / sj2;
    }

    ScalingTablePtr tab = table;
    return [tab, k0, k1, coef = std::move(coef), sj, sj2, W](double x) {
        const double u = sj * x;
        long a = static_cast<long>(std::floor(u - W)) + 1;
        long b = static_cast<long>(std::floor(u));
        a = std::max(a, k0);
        b = std::min(b, k1);
        double acc = 0.0;
        for (long k = a; k <= b; ++k) {
            acc += coef[static_cast<std::size_t>(k - k0)] * (*tab)(u - static_cast<double>(k));
        }
        return acc * sj2;
    };
}

double table_mass(const ScalingFunctionTable& table) {
    const auto& vals = table.values();
    double acc = 0.0;
    for (std::size_t i = 1; i + 1 < vals.size(); ++i) acc += vals[i];
    acc += 0.5 * (vals.front() + vals.back());
    return acc * std::ldexp(1.0, -table.depth());
}

double shift_product_integral(const ScalingFunctionTable& table, int shift) {
    const auto& vals = table.values();
    const long n = static_cast<long>(vals.size()) - 1;
    const long off = static_cast<long>(shift) << table.depth();
    double acc = 0.0;
    for (long i = 0; i <= n; ++i) {
        const long k = i - off;
        if (k < 0 || k > n) continue;
        double term = vals[static_cast<std::size_t>(i)] * vals[static_cast<std::size_t>(k)];
        if (i == 0 || i == n || k == 0 || k == n) term *= 0.5;
        acc += term;
    }
    return acc * std::ldexp(1.0, -table.depth());
}

} // namespace wavediv
