#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "wavediv/scaling_filter.hpp"

namespace wavediv {

// Dyadic-grid tabulation of the scaling function phi generated by a filter.
// Values live on [B1,B2] at spacing 2^-depth; evaluation interpolates
// linearly between grid points and is 0 outside the support.  Immutable
// after construction, safe to share across threads.
class ScalingFunctionTable {
public:
    ScalingFunctionTable(ScalingFilter filter, int depth, std::vector<double> values,
                         double majorant);

    const ScalingFilter& filter() const { return filter_; }
    int depth() const { return depth_; }
    double support_begin() const { return 0.0; }
    double support_end() const { return width_; }
    double support_width() const { return width_; }
    double majorant_bound() const { return majorant_; }
    const std::vector<double>& values() const { return values_; }

    // phi at grid index i (x = i * 2^-depth)
    double value_at(std::size_t i) const { return values_[i]; }

    // phi(x) by linear interpolation; total function, 0 outside the
    // half-open support [B1,B2)
    double operator()(double x) const {
        if (x < 0.0 || x >= width_) return 0.0;
        const double t = x * scale_;
        const auto i = static_cast<std::size_t>(t);
        const double frac = t - static_cast<double>(i);
        return values_[i] + frac * (values_[i + 1] - values_[i]);
    }

private:
    ScalingFilter filter_;
    int depth_;
    double width_;
    double scale_; // 2^depth
    double majorant_;
    std::vector<double> values_;
};

using ScalingTablePtr = std::shared_ptr<const ScalingFunctionTable>;

// Cascade construction: solve the integer-point refinement eigenproblem
// (eigenvalue 1), then fill dyadic levels with phi(x) = sqrt(2) sum_k h_k
// phi(2x-k).  depth must lie in [4,20].  Throws if the eigenproblem does not
// settle on an eigenvalue-1 vector (malformed filter).
ScalingTablePtr build_scaling_table(const ScalingFilter& filter, int depth);

double eval_scaling(const ScalingFunctionTable& table, double x);

// K(x,y) = sum_k phi(x-k) phi(y-k); finite sum, symmetric by construction.
double kernel(const ScalingFunctionTable& table, double x, double y);

// K_j(x,y) = 2^j K(2^j x, 2^j y)
double kernel_at_level(const ScalingFunctionTable& table, int j, double x, double y);

// Projection of h onto V_j as a reusable evaluator:
// x -> integral K_j(x,y) h(y) dy, with per-shift coefficients precomputed by
// composite trapezoid on the table grid (spacing 2^-(j+refine_depth)).
// interval is the compact interval carrying h; refine_depth <= table depth,
// -1 means the full table depth.
std::function<double(double)> project(const ScalingTablePtr& table, int j,
                                      const std::function<double(double)>& h,
                                      std::pair<double, double> interval,
                                      int refine_depth = -1);

// Trapezoid integral of phi over its support on the table grid.
double table_mass(const ScalingFunctionTable& table);

// Trapezoid integral of phi(x) phi(x-shift) dx on the table grid.
double shift_product_integral(const ScalingFunctionTable& table, int shift);

} // namespace wavediv
