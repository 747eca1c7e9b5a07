#pragma once

#include <stdexcept>
#include <vector>

namespace wavediv {

// Fixed composite rule used throughout the divergence machinery.  points is
// the subinterval count: at least 64, and even for Simpson.
struct QuadratureRule {
    enum class Scheme { composite_simpson, composite_midpoint };

    Scheme scheme = Scheme::composite_simpson;
    int points = 2048;

    void validate() const {
        if (points < 64) throw std::invalid_argument("quadrature needs at least 64 subintervals");
        if (scheme == Scheme::composite_simpson && points % 2 != 0) {
            throw std::invalid_argument("composite Simpson needs an even subinterval count");
        }
    }

    // node positions and weights for [a,b]; weights sum to b-a
    void nodes(double a, double b, std::vector<double>& xs, std::vector<double>& ws) const;

    template <typename F>
    double integrate(double a, double b, F&& f) const {
        std::vector<double> xs, ws;
        nodes(a, b, xs, ws);
        double acc = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) acc += ws[i] * f(xs[i]);
        return acc;
    }
};

} // namespace wavediv
