#include "wavediv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavediv/special_functions.hpp"

namespace wavediv {

double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean of empty vector");
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("sd needs at least 2 values");
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty vector");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double ks_distance_to_normal(std::vector<double> z) {
    if (z.empty()) throw std::invalid_argument("KS distance of empty sample");
    std::sort(z.begin(), z.end());
    const double n = static_cast<double>(z.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double c = normal_cdf(z[i]);
        const double hi = (static_cast<double>(i) + 1.0) / n - c;
        const double lo = c - static_cast<double>(i) / n;
        worst = std::max(worst, std::max(hi, lo));
    }
    return worst;
}

} // namespace wavediv
