#pragma once

#include <string>
#include <vector>

namespace wavediv {

// Low-pass filter taps of a compactly supported orthonormal scaling function.
// Taps follow the sum(h) = sqrt(2) convention; the scaling function they
// generate is supported on [0, size-1].
struct ScalingFilter {
    std::string family_id;
    std::vector<double> coefficients;

    int support_begin() const { return 0; }
    int support_end() const { return static_cast<int>(coefficients.size()) - 1; }
    // Number of vanishing moments of the associated mother wavelet
    // (reported as metadata; nothing downstream enforces a minimum).
    int vanishing_moments = 0;
};

// Embedded families: "haar" (alias "daubechies-2"), "daubechies-4",
// "daubechies-6", "daubechies-8", "symmlet-8".  Throws std::invalid_argument
// for unknown names.
ScalingFilter builtin_filter(const std::string& family_id);

// Loads a custom filter from a text file, one real tap per line.
// Blank lines and lines starting with '#' are skipped.
ScalingFilter load_filter_file(const std::string& path);

// Enforces sum(h) = sqrt(2) and tap orthonormality
// sum_k h_k h_{k+2m} = delta_{0m}, both within 1e-12.  Throws on violation.
void validate_filter(const ScalingFilter& filter);

} // namespace wavediv
