#include "wavediv/scaling_filter.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wavediv {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

// Newton-polishes published taps against the exact constraint system
// (tap orthonormality at every even shift plus p vanishing moments of the
// associated wavelet).  Published literals carry ~12 accurate digits; two or
// three iterations land on the nearby exact filter at machine precision
// without changing the phase choice.
std::vector<double> polish_taps(std::vector<double> h) {
    const int L = static_cast<int>(h.size());
    if (L % 2 != 0) return h;
    const int p = L / 2;
    const int dim = 2 * p;

    for (int iter = 0; iter < 6; ++iter) {
        std::vector<double> F(dim, 0.0);
        std::vector<double> J(static_cast<std::size_t>(dim) * dim, 0.0);
        int row = 0;
        for (int m = 0; m < p; ++m, ++row) {
            double dot = 0.0;
            for (int k = 0; k + 2 * m < L; ++k) dot += h[k] * h[k + 2 * m];
            F[row] = dot - (m == 0 ? 1.0 : 0.0);
            for (int j = 0; j < L; ++j) {
                double d = 0.0;
                if (j + 2 * m < L) d += h[j + 2 * m];
                if (j - 2 * m >= 0) d += h[j - 2 * m];
                J[static_cast<std::size_t>(row) * dim + j] = d;
            }
        }
        for (int m = 0; m < p; ++m, ++row) {
            double acc = 0.0;
            for (int k = 0; k < L; ++k) {
                acc += (k % 2 ? -1.0 : 1.0) * std::pow(static_cast<double>(k), m) * h[k];
            }
            F[row] = acc;
            for (int j = 0; j < L; ++j) {
                J[static_cast<std::size_t>(row) * dim + j] =
                    (j % 2 ? -1.0 : 1.0) * std::pow(static_cast<double>(j), m);
            }
        }

        // Gaussian elimination with partial pivoting on J dx = F
        std::vector<int> perm(dim);
        for (int i = 0; i < dim; ++i) perm[i] = i;
        for (int c = 0; c < dim; ++c) {
            int best = c;
            for (int r = c + 1; r < dim; ++r) {
                if (std::fabs(J[static_cast<std::size_t>(r) * dim + c]) >
                    std::fabs(J[static_cast<std::size_t>(best) * dim + c])) {
                    best = r;
                }
            }
            for (int k = 0; k < dim; ++k) {
                std::swap(J[static_cast<std::size_t>(c) * dim + k],
                          J[static_cast<std::size_t>(best) * dim + k]);
            }
            std::swap(F[c], F[best]);
            const double piv = J[static_cast<std::size_t>(c) * dim + c];
            if (std::fabs(piv) < 1e-14) return h; // singular: keep the published taps
            for (int r = c + 1; r < dim; ++r) {
                const double factor = J[static_cast<std::size_t>(r) * dim + c] / piv;
                if (factor == 0.0) continue;
                for (int k = c; k < dim; ++k) {
                    J[static_cast<std::size_t>(r) * dim + k] -=
                        factor * J[static_cast<std::size_t>(c) * dim + k];
                }
                F[r] -= factor * F[c];
            }
        }
        std::vector<double> dx(dim, 0.0);
        for (int r = dim - 1; r >= 0; --r) {
            double acc = F[r];
            for (int k = r + 1; k < dim; ++k) {
                acc -= J[static_cast<std::size_t>(r) * dim + k] * dx[k];
            }
            dx[r] = acc / J[static_cast<std::size_t>(r) * dim + r];
        }
        double step = 0.0;
        for (int i = 0; i < dim; ++i) {
            h[i] -= dx[i];
            step = std::max(step, std::fabs(dx[i]));
        }
        if (step < 1e-15) break;
    }
    return h;
}

ScalingFilter make(const std::string& id, std::vector<double> taps, int moments) {
    ScalingFilter f;
    f.family_id = id;
    f.coefficients = polish_taps(std::move(taps));
    f.vanishing_moments = moments;
    return f;
}

} // namespace

ScalingFilter builtin_filter(const std::string& family_id) {
    if (family_id == "haar" || family_id == "daubechies-2") {
        return make(family_id, {1.0 / kSqrt2, 1.0 / kSqrt2}, 1);
    }
    if (family_id == "daubechies-4") {
        return make(family_id,
                    {(1.0 + kSqrt3) / (4.0 * kSqrt2), (3.0 + kSqrt3) / (4.0 * kSqrt2),
                     (3.0 - kSqrt3) / (4.0 * kSqrt2), (1.0 - kSqrt3) / (4.0 * kSqrt2)},
                    2);
    }
    if (family_id == "daubechies-6") {
        return make(family_id,
                    {0.33267055295095688, 0.80689150931333875, 0.45987750211933132,
                     -0.13501102001039084, -0.085441273882241486, 0.035226291882100656},
                    3);
    }
    if (family_id == "daubechies-8") {
        return make(family_id,
                    {0.23037781330885523, 0.71484657055254153, 0.63088076792959036,
                     -0.027983769416983849, -0.18703481171888114, 0.030841381835986965,
                     0.032883011666982945, -0.010597401784997278},
                    4);
    }
    if (family_id == "symmlet-8") {
        return make(family_id,
                    {0.032223100604042702, -0.012603967262037833, -0.099219543576847216,
                     0.29785779560527736, 0.80373875180591614, 0.49761866763201545,
                     -0.029635527645998951, -0.075765714789273325},
                    4);
    }
    throw std::invalid_argument("unknown wavelet family: " + family_id);
}

ScalingFilter load_filter_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open filter file: " + path);
    }
    std::vector<double> taps;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        double v;
        if (!(ss >> v)) {
            throw std::runtime_error("bad filter line in " + path + ": " + line);
        }
        taps.push_back(v);
    }
    if (taps.size() < 2) {
        throw std::runtime_error("filter file " + path + " needs at least 2 taps");
    }
    ScalingFilter f = make("custom:" + path, std::move(taps), 0);
    validate_filter(f);
    return f;
}

void validate_filter(const ScalingFilter& filter) {
    const auto& h = filter.coefficients;
    const int L = static_cast<int>(h.size());
    if (L < 2) {
        throw std::invalid_argument("filter must have at least 2 taps");
    }
    double sum = 0.0;
    for (double v : h) sum += v;
    if (std::fabs(sum - kSqrt2) > 1e-12) {
        throw std::invalid_argument("filter taps must sum to sqrt(2), got sum=" +
                                    std::to_string(sum));
    }
    for (int m = 0; 2 * m < L; ++m) {
        double dot = 0.0;
        for (int k = 0; k + 2 * m < L; ++k) dot += h[k] * h[k + 2 * m];
        const double target = (m == 0) ? 1.0 : 0.0;
        if (std::fabs(dot - target) > 1e-12) {
            throw std::invalid_argument("filter taps are not orthonormal at shift " +
                                        std::to_string(2 * m));
        }
    }
}

} // namespace wavediv
