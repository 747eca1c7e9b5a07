#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wavediv {

// An i.i.d. sample with provenance.  Values keep insertion order so that
// fits are bit-reproducible.
struct SampleSet {
    std::vector<double> values;
    std::string label;
    std::optional<std::string> generator;
    std::optional<std::uint64_t> seed;

    long size() const { return static_cast<long>(values.size()); }
    double min() const;
    double max() const;
};

// Reads a single numeric column; an optional leading "value" header line is
// skipped.  Throws std::runtime_error naming the path on open/parse failure.
SampleSet read_sample_csv(const std::string& path);

void write_sample_csv(const std::string& path, const SampleSet& samples);

} // namespace wavediv
