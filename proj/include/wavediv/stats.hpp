#pragma once

#include <vector>

namespace wavediv {

double mean(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);
double median(std::vector<double> v);

// Kolmogorov-Smirnov distance between the empirical distribution of z and
// the standard normal.
double ks_distance_to_normal(std::vector<double> z);

} // namespace wavediv
