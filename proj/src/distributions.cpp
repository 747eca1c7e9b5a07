#include "wavediv/distributions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wavediv/special_functions.hpp"

namespace wavediv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gamma_draw(SplitMix64& rng, double shape);

double normal_draw(SplitMix64& rng) { return normal_quantile(rng.next_double()); }

// Marsaglia-Tsang squeeze for shape >= 1; shape < 1 via the U^{1/k} boost.
double gamma_draw(SplitMix64& rng, double shape) {
    if (shape < 1.0) {
        const double u = rng.next_double();
        return gamma_draw(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal_draw(rng);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = rng.next_double();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

} // namespace

Distribution Distribution::uniform(double a, double b) {
    if (!(b > a)) throw std::invalid_argument("uniform needs b > a");
    Distribution d;
    d.family_ = Family::uniform;
    d.p1_ = a;
    d.p2_ = b;
    return d;
}

Distribution Distribution::gaussian(double mu, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian needs sigma > 0");
    Distribution d;
    d.family_ = Family::gaussian;
    d.p1_ = mu;
    d.p2_ = sigma;
    return d;
}

Distribution Distribution::beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("beta needs a,b > 0");
    Distribution d;
    d.family_ = Family::beta;
    d.p1_ = a;
    d.p2_ = b;
    return d;
}

Distribution Distribution::gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) throw std::invalid_argument("gamma needs k,theta > 0");
    Distribution d;
    d.family_ = Family::gamma;
    d.p1_ = shape;
    d.p2_ = scale;
    return d;
}

Distribution Distribution::mixture(std::vector<double> weights,
                                   std::vector<Distribution> components) {
    if (weights.size() != components.size() || weights.empty()) {
        throw std::invalid_argument("mixture needs matching weights and components");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw std::invalid_argument("mixture weights must be positive");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("mixture weights must sum to 1");
    }
    Distribution d;
    d.family_ = Family::mixture;
    d.weights_ = std::move(weights);
    d.components_ = std::move(components);
    return d;
}

double Distribution::pdf(double x) const {
    switch (family_) {
        case Family::uniform:
            return (x >= p1_ && x <= p2_) ? 1.0 / (p2_ - p1_) : 0.0;
        case Family::gaussian: {
            const double z = (x - p1_) / p2_;
            return std::exp(-0.5 * z * z) / (p2_ * 2.5066282746310005024);
        }
        case Family::beta: {
            if (x <= 0.0 || x >= 1.0) return 0.0;
            const double ln = (p1_ - 1.0) * std::log(x) + (p2_ - 1.0) * std::log1p(-x) +
                              lgamma_lanczos(p1_ + p2_) - lgamma_lanczos(p1_) -
                              lgamma_lanczos(p2_);
            return std::exp(ln);
        }
        case Family::gamma: {
            if (x <= 0.0) return 0.0;
            const double ln = (p1_ - 1.0) * std::log(x) - x / p2_ - lgamma_lanczos(p1_) -
                              p1_ * std::log(p2_);
            return std::exp(ln);
        }
        case Family::mixture: {
            double acc = 0.0;
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                acc += weights_[i] * components_[i].pdf(x);
            }
            return acc;
        }
    }
    return 0.0;
}

double Distribution::cdf(double x) const {
    switch (family_) {
        case Family::uniform:
            if (x <= p1_) return 0.0;
            if (x >= p2_) return 1.0;
            return (x - p1_) / (p2_ - p1_);
        case Family::gaussian:
            return normal_cdf((x - p1_) / p2_);
        case Family::beta:
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            return incomplete_beta(p1_, p2_, x);
        case Family::gamma:
            if (x <= 0.0) return 0.0;
            return incomplete_gamma_p(p1_, x / p2_);
        case Family::mixture: {
            double acc = 0.0;
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                acc += weights_[i] * components_[i].cdf(x);
            }
            return acc;
        }
    }
    return 0.0;
}

double Distribution::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("quantile: p must lie in (0,1)");
    }
    switch (family_) {
        case Family::uniform:
            return p1_ + p * (p2_ - p1_);
        case Family::gaussian:
            return p1_ + p2_ * normal_quantile(p);
        default:
            break;
    }
    // bisection on the cdf for beta/gamma/mixture
    double lo, hi;
    if (family_ == Family::beta) {
        lo = 0.0;
        hi = 1.0;
    } else if (family_ == Family::gamma) {
        lo = 0.0;
        hi = p2_ * (p1_ + 10.0);
        while (cdf(hi) < p) hi *= 2.0;
    } else {
        lo = kInf;
        hi = -kInf;
        for (const auto& c : components_) {
            lo = std::min(lo, c.quantile(1e-15));
            hi = std::max(hi, c.quantile(1.0 - 1e-15));
        }
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-15 * (1.0 + std::fabs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

double Distribution::support_lo() const {
    switch (family_) {
        case Family::uniform: return p1_;
        case Family::gaussian: return -kInf;
        case Family::beta: return 0.0;
        case Family::gamma: return 0.0;
        case Family::mixture: {
            double lo = kInf;
            for (const auto& c : components_) lo = std::min(lo, c.support_lo());
            return lo;
        }
    }
    return -kInf;
}

double Distribution::support_hi() const {
    switch (family_) {
        case Family::uniform: return p2_;
        case Family::gaussian: return kInf;
        case Family::beta: return 1.0;
        case Family::gamma: return kInf;
        case Family::mixture: {
            double hi = -kInf;
            for (const auto& c : components_) hi = std::max(hi, c.support_hi());
            return hi;
        }
    }
    return kInf;
}

double Distribution::draw(SplitMix64& rng) const {
    switch (family_) {
        case Family::uniform:
            return p1_ + (p2_ - p1_) * rng.next_double();
        case Family::gaussian:
            return p1_ + p2_ * normal_draw(rng);
        case Family::beta: {
            const double g1 = gamma_draw(rng, p1_);
            const double g2 = gamma_draw(rng, p2_);
            return g1 / (g1 + g2);
        }
        case Family::gamma:
            return p2_ * gamma_draw(rng, p1_);
        case Family::mixture: {
            const double u = rng.next_double();
            double acc = 0.0;
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                acc += weights_[i];
                if (u <= acc || i + 1 == weights_.size()) return components_[i].draw(rng);
            }
            return components_.back().draw(rng);
        }
    }
    return 0.0;
}

std::string Distribution::to_string() const {
    std::ostringstream os;
    switch (family_) {
        case Family::uniform: os << "uniform(" << p1_ << "," << p2_ << ")"; break;
        case Family::gaussian: os << "gaussian(" << p1_ << "," << p2_ << ")"; break;
        case Family::beta: os << "beta(" << p1_ << "," << p2_ << ")"; break;
        case Family::gamma: os << "gamma(" << p1_ << "," << p2_ << ")"; break;
        case Family::mixture: {
            os << "mixture(";
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                if (i) os << "+";
                os << weights_[i] << "*" << components_[i].to_string();
            }
            os << ")";
            break;
        }
    }
    return os.str();
}

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }

    bool consume(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!consume(c)) {
            throw std::invalid_argument("distribution parse error near position " +
                                        std::to_string(pos) + " in: " + s);
        }
    }

    double number() {
        skip_ws();
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(s.substr(pos), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("expected a number in distribution spec: " + s);
        }
        pos += used;
        return v;
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
            ++pos;
        }
        if (start == pos) {
            throw std::invalid_argument("expected a distribution name in: " + s);
        }
        std::string out = s.substr(start, pos - start);
        for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return out;
    }

    Distribution distribution() {
        const std::string name = ident();
        expect('(');
        if (name == "mixture") {
            std::vector<double> weights;
            std::vector<Distribution> comps;
            for (;;) {
                weights.push_back(number());
                expect('*');
                comps.push_back(distribution());
                if (!consume('+')) break;
            }
            expect(')');
            return Distribution::mixture(std::move(weights), std::move(comps));
        }
        const double a = number();
        expect(',');
        const double b = number();
        expect(')');
        if (name == "uniform") return Distribution::uniform(a, b);
        if (name == "gaussian" || name == "normal") return Distribution::gaussian(a, b);
        if (name == "beta") return Distribution::beta(a, b);
        if (name == "gamma") return Distribution::gamma(a, b);
        throw std::invalid_argument("unknown distribution family: " + name);
    }
};

} // namespace

Distribution parse_distribution(const std::string& spec) {
    Parser p{spec};
    Distribution d = p.distribution();
    p.skip_ws();
    if (p.pos != spec.size()) {
        throw std::invalid_argument("trailing characters in distribution spec: " + spec);
    }
    return d;
}

bool looks_like_distribution(const std::string& spec) {
    try {
        parse_distribution(spec);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

SampleSet sample(const Distribution& dist, long n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample size must be >= 1");
    SplitMix64 rng(seed);
    SampleSet s;
    s.values.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) s.values.push_back(dist.draw(rng));
    s.label = dist.to_string();
    s.generator = dist.to_string();
    s.seed = seed;
    return s;
}

} // namespace wavediv
