#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "wavediv/sample_set.hpp"
#include "wavediv/scaling_table.hpp"

namespace wavediv {

using DensityFn = std::function<double(double)>;

// Resolution schedule 2^{j_n} ~ n^{1/4}: nearest integer to log2(n)/4,
// floored at zero.
int resolution_level(long n);

// Linear wavelet density estimator at level j: coefficients
// alpha_{j,k} = (1/n) sum_i 2^{j/2} phi(2^j X_i - k), evaluation expands the
// same coefficients, which is algebraically the kernel average
// (1/n) sum_i K_j(x, X_i).  Immutable once fitted.
class WaveletDensityEstimate {
public:
    WaveletDensityEstimate(ScalingTablePtr table, int level, long k_begin,
                           std::vector<double> coeffs, long n, double smoothness);

    int level() const { return level_; }
    long sample_count() const { return n_; }
    double smoothness_assumed() const { return smoothness_; }
    const ScalingFunctionTable& table() const { return *table_; }
    const ScalingTablePtr& table_ptr() const { return table_; }
    long k_begin() const { return k_begin_; }
    const std::vector<double>& coefficients() const { return coeffs_; }

    // support of the expansion (union of active shift supports)
    double support_begin() const;
    double support_end() const;

    double operator()(double x) const;

private:
    ScalingTablePtr table_;
    int level_;
    long k_begin_;
    std::vector<double> coeffs_;
    long n_;
    double smoothness_;
};

// level defaults to resolution_level(n); refuses empty samples.
WaveletDensityEstimate fit_density(const SampleSet& samples, const ScalingTablePtr& table,
                                   std::optional<int> level = std::nullopt,
                                   double smoothness = 1.5);

double eval_density(const WaveletDensityEstimate& estimate, double x);

// Direct kernel-average evaluation (O(n) per call); used by tests to check
// the coefficient form.
double eval_density_kernel_form(const WaveletDensityEstimate& estimate, const SampleSet& samples,
                                double x);

// integral of f_n over its support, composite trapezoid aligned with the
// table grid
double estimate_mass(const WaveletDensityEstimate& estimate);

// max over grid of |f_n(x) - reference(x)|; grid approximation of the
// sup-norm discrepancy a_n.
double sup_distance(const WaveletDensityEstimate& estimate, const DensityFn& reference,
                    const std::vector<double>& grid);

// 2^{level+depth} equally spaced points covering [lo, hi]
std::vector<double> sup_norm_grid(double lo, double hi, int level, int depth);

// Wavelet empirical process at h: sqrt(n) ((1/n) sum_i K_j(h)(X_i) - expected_h),
// where expected_h = integral of h f is supplied by the caller.
double wavelet_empirical_process(const ScalingTablePtr& table, int j, const DensityFn& h,
                                 std::pair<double, double> h_interval, const SampleSet& samples,
                                 double expected_h);

// sigma^2_{h,n} = E (K_j(h)(X))^2 - (E K_j(h)(X))^2 against the density f,
// by composite trapezoid with `points` panels on [lo, hi].
// Throws if the result is below -1e-12 (quadrature failure); clamps small
// negative round-off to zero.
double sigma_hn(const ScalingTablePtr& table, int j, const DensityFn& h,
                std::pair<double, double> h_interval, const DensityFn& f, double lo, double hi,
                int points = 4096);

} // namespace wavediv
