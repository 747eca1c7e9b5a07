#include "wavediv/density_estimate.hpp"

#include <cmath>
#include <stdexcept>

namespace wavediv {

int resolution_level(long n) {
    if (n < 1) throw std::invalid_argument("sample size must be >= 1");
    const int j = static_cast<int>(std::lround(std::log2(static_cast<double>(n)) / 4.0));
    return j < 0 ? 0 : j;
}

WaveletDensityEstimate::WaveletDensityEstimate(ScalingTablePtr table, int level, long k_begin,
                                               std::vector<double> coeffs, long n,
                                               double smoothness)
    : table_(std::move(table)),
      level_(level),
      k_begin_(k_begin),
      coeffs_(std::move(coeffs)),
      n_(n),
      smoothness_(smoothness) {}

double WaveletDensityEstimate::support_begin() const {
    return std::ldexp(static_cast<double>(k_begin_), -level_);
}

double WaveletDensityEstimate::support_end() const {
    const double kmax = static_cast<double>(k_begin_ + static_cast<long>(coeffs_.size()) - 1);
    return std::ldexp(kmax + table_->support_width(), -level_);
}

double WaveletDensityEstimate::operator()(double x) const {
    const double sj = std::ldexp(1.0, level_);
    const double u = sj * x;
    const double W = table_->support_width();
    long a = static_cast<long>(std::floor(u - W)) + 1;
    long b = static_cast<long>(std::floor(u));
    const long kend = k_begin_ + static_cast<long>(coeffs_.size()) - 1;
    if (a < k_begin_) a = k_begin_;
    if (b > kend) b = kend;
    double acc = 0.0;
    for (long k = a; k <= b; ++k) {
        acc += coeffs_[static_cast<std::size_t>(k - k_begin_)] *
               (*table_)(u - static_cast<double>(k));
    }
    return acc * std::sqrt(sj);
}

WaveletDensityEstimate fit_density(const SampleSet& samples, const ScalingTablePtr& table,
                                   std::optional<int> level, double smoothness) {
    if (samples.values.empty()) {
        throw std::invalid_argument("cannot fit a density to an empty sample");
    }
    const long n = samples.size();
    const int j = level.value_or(resolution_level(n));
    if (j < 0) throw std::invalid_argument("resolution level must be >= 0");

    const double sj = std::ldexp(1.0, j);
    const double sj2 = std::sqrt(sj);
    const double W = table->support_width();

    const double umin = sj * samples.min();
    const double umax = sj * samples.max();
    const long k_begin = static_cast<long>(std::floor(umin - W)) + 1;
    const long k_end = static_cast<long>(std::floor(umax));
    std::vector<double> coeffs(static_cast<std::size_t>(k_end - k_begin + 1), 0.0);

    for (double x : samples.values) {
        const double u = sj * x;
        long a = static_cast<long>(std::floor(u - W)) + 1;
        long b = static_cast<long>(std::floor(u));
        if (a < k_begin) a = k_begin;
        if (b > k_end) b = k_end;
        for (long k = a; k <= b; ++k) {
            coeffs[static_cast<std::size_t>(k - k_begin)] += (*table)(u - static_cast<double>(k));
        }
    }
    const double scale = sj2 / static_cast<double>(n);
    for (double& c : coeffs) c *= scale;

    return WaveletDensityEstimate(table, j, k_begin, std::move(coeffs), n, smoothness);
}

double eval_density(const WaveletDensityEstimate& estimate, double x) { return estimate(x); }

double eval_density_kernel_form(const WaveletDensityEstimate& estimate, const SampleSet& samples,
                                double x) {
    double acc = 0.0;
    for (double xi : samples.values) {
        acc += kernel_at_level(estimate.table(), estimate.level(), x, xi);
    }
    return acc / static_cast<double>(samples.size());
}

double estimate_mass(const WaveletDensityEstimate& estimate) {
    const int j = estimate.level();
    const int r = estimate.table().depth();
    const double lo = estimate.support_begin();
    const double h = std::ldexp(1.0, -(j + r));
    const long cells = (static_cast<long>(estimate.coefficients().size()) - 1 +
                        static_cast<long>(estimate.table().support_width()))
                       << r;
    double acc = 0.0;
    for (long i = 0; i <= cells; ++i) {
        double term = estimate(lo + static_cast<double>(i) * h);
        if (i == 0 || i == cells) term *= 0.5;
        acc += term;
    }
    return acc * h;
}

double sup_distance(const WaveletDensityEstimate& estimate, const DensityFn& reference,
                    const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("sup_distance needs a non-empty grid");
    double worst = 0.0;
    for (double x : grid) {
        worst = std::max(worst, std::fabs(estimate(x) - reference(x)));
    }
    return worst;
}

std::vector<double> sup_norm_grid(double lo, double hi, int level, int depth) {
    const long count = 1L << (level + depth);
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double h = (hi - lo) / static_cast<double>(count - 1);
    for (long i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = lo + h * i;
    return grid;
}

double wavelet_empirical_process(const ScalingTablePtr& table, int j, const DensityFn& h,
                                 std::pair<double, double> h_interval, const SampleSet& samples,
                                 double expected_h) {
    const auto kj_h = project(table, j, h, h_interval);
    double acc = 0.0;
    for (double x : samples.values) acc += kj_h(x);
    const double n = static_cast<double>(samples.size());
    return std::sqrt(n) * (acc / n - expected_h);
}

double sigma_hn(const ScalingTablePtr& table, int j, const DensityFn& h,
                std::pair<double, double> h_interval, const DensityFn& f, double lo, double hi,
                int points) {
    if (points < 8) throw std::invalid_argument("sigma_hn needs at least 8 panels");
    const auto kj_h = project(table, j, h, h_interval);
    const double step = (hi - lo) / points;
    double mass = 0.0, m1 = 0.0, m2 = 0.0;
    for (int i = 0; i <= points; ++i) {
        const double x = lo + step * i;
        const double w = (i == 0 || i == points) ? 0.5 : 1.0;
        const double kh = kj_h(x);
        const double fx = f(x);
        mass += w * fx;
        m1 += w * kh * fx;
        m2 += w * kh * kh * fx;
    }
    if (!(mass > 0.0)) throw std::runtime_error("sigma_hn: density has no mass on [lo,hi]");
    // normalizing by the discretized mass keeps constant h at exactly zero
    // variance even when the grid misses some density mass
    m1 /= mass;
    m2 /= mass;
    const double var = m2 - m1 * m1;
    if (var < -1e-12) {
        throw std::runtime_error("sigma_hn: negative variance, quadrature failed");
    }
    return var < 0.0 ? 0.0 : var;
}

} // namespace wavediv
