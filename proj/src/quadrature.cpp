#include "wavediv/quadrature.hpp"

namespace wavediv {

void QuadratureRule::nodes(double a, double b, std::vector<double>& xs,
                           std::vector<double>& ws) const {
    validate();
    if (!(b > a)) throw std::invalid_argument("quadrature interval is empty");
    const double h = (b - a) / points;
    xs.clear();
    ws.clear();
    if (scheme == Scheme::composite_midpoint) {
        xs.reserve(points);
        ws.assign(static_cast<std::size_t>(points), h);
        for (int i = 0; i < points; ++i) xs.push_back(a + h * (i + 0.5));
        return;
    }
    xs.reserve(points + 1);
    ws.reserve(points + 1);
    for (int i = 0; i <= points; ++i) {
        xs.push_back(a + h * i);
        double w = h / 3.0;
        if (i != 0 && i != points) w *= (i % 2 == 1) ? 4.0 : 2.0;
        ws.push_back(w);
    }
}

} // namespace wavediv
