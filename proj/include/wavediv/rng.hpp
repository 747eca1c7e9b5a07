#pragma once

#include <cstdint>

namespace wavediv {

// splitmix64: small, fast, passes BigCrush-scale batteries, and trivially
// seedable.  One instance per replication keeps Monte Carlo runs
// reproducible regardless of thread scheduling.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in (0,1), never returns an exact endpoint
    double next_double() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Derives the seed for replication r from the master seed.  Injective in r
// for fixed master (finalizer is a bijection, r * odd is injective mod 2^64),
// so replication streams never collide.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t replication) {
    std::uint64_t z = master + replication * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace wavediv
