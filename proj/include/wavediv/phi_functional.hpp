#pragma once

#include <functional>
#include <optional>
#include <string>

namespace wavediv {

enum class DivergenceKind { renyi, tsallis, kl, l2, custom };

std::string kind_name(DivergenceKind kind);
DivergenceKind kind_from_name(const std::string& name);

// Bivariate phi with its first and second partial derivatives.  For the
// Renyi/Tsallis families phi is the shared core x^alpha y^(1-alpha); the
// family finalization (log or affine) is applied to the integrated core.
struct PhiFunctional {
    DivergenceKind kind = DivergenceKind::kl;
    double alpha = 0.0;

    double phi(double x, double y) const;
    double d1(double x, double y) const;  // d phi / dx
    double d2(double x, double y) const;  // d phi / dy
    double d11(double x, double y) const;
    double d22(double x, double y) const;
    double d12(double x, double y) const;

    // finalization of the integrated core: Renyi log(I)/(alpha-1),
    // Tsallis (I-1)/(alpha-1), KL/L2 identity
    double finalize(double core) const;

    bool is_alpha_family() const {
        return kind == DivergenceKind::renyi || kind == DivergenceKind::tsallis;
    }

    // custom functionals supply their own callables; finalization is identity
    struct Custom {
        std::function<double(double, double)> phi, d1, d2, d11, d22, d12;
    };
    std::optional<Custom> custom;
};

// Builds the closed-form functional for a kind; alpha-families refuse
// alpha <= 0 and alpha = 1.
PhiFunctional phi_functional(DivergenceKind kind, double alpha = 0.0);

PhiFunctional custom_phi_functional(PhiFunctional::Custom fns);

} // namespace wavediv
