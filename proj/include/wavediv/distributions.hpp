#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wavediv/rng.hpp"
#include "wavediv/sample_set.hpp"

namespace wavediv {

// Analytic reference distributions: pdf, cdf, quantile and a deterministic
// seeded sampler per family.  Samplers draw from a SplitMix64 stream:
// uniform and gaussian by inverse CDF, gamma by Marsaglia-Tsang rejection,
// beta as a ratio of gammas, mixtures by component pick then component draw.
class Distribution {
public:
    enum class Family { uniform, gaussian, beta, gamma, mixture };

    static Distribution uniform(double a, double b);
    static Distribution gaussian(double mu, double sigma);
    static Distribution beta(double a, double b);
    static Distribution gamma(double shape, double scale);
    static Distribution mixture(std::vector<double> weights, std::vector<Distribution> components);

    Family family() const { return family_; }
    double param1() const { return p1_; }
    double param2() const { return p2_; }

    double pdf(double x) const;
    double cdf(double x) const;
    double quantile(double p) const;
    // support endpoints (+-inf for unbounded families)
    double support_lo() const;
    double support_hi() const;

    double draw(SplitMix64& rng) const;

    std::string to_string() const;

private:
    Distribution() = default;
    Family family_ = Family::uniform;
    double p1_ = 0.0, p2_ = 1.0;
    std::vector<double> weights_;
    std::vector<Distribution> components_;
};

// Grammar: "uniform(a,b)", "gaussian(mu,sigma)", "beta(a,b)",
// "gamma(shape,scale)", "mixture(w1*comp1+w2*comp2+...)".
// Throws std::invalid_argument on malformed input.
Distribution parse_distribution(const std::string& spec);

// True when the string parses under the distribution grammar (used to tell
// distribution specs from CSV paths in configs).
bool looks_like_distribution(const std::string& spec);

// n i.i.d. draws, deterministic in (dist, n, seed); records provenance.
SampleSet sample(const Distribution& dist, long n, std::uint64_t seed);

} // namespace wavediv
