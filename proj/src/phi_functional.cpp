#include "wavediv/phi_functional.hpp"

#include <cmath>
#include <stdexcept>

namespace wavediv {

std::string kind_name(DivergenceKind kind) {
    switch (kind) {
        case DivergenceKind::renyi: return "renyi";
        case DivergenceKind::tsallis: return "tsallis";
        case DivergenceKind::kl: return "kl";
        case DivergenceKind::l2: return "l2";
        case DivergenceKind::custom: return "custom";
    }
    return "?";
}

DivergenceKind kind_from_name(const std::string& name) {
    if (name == "renyi") return DivergenceKind::renyi;
    if (name == "tsallis") return DivergenceKind::tsallis;
    if (name == "kl" || name == "kullback-leibler") return DivergenceKind::kl;
    if (name == "l2") return DivergenceKind::l2;
    throw std::invalid_argument("unknown divergence kind: " + name);
}

double PhiFunctional::phi(double x, double y) const {
    if (custom) return custom->phi(x, y);
    switch (kind) {
        case DivergenceKind::renyi:
        case DivergenceKind::tsallis:
            return std::pow(x, alpha) * std::pow(y, 1.0 - alpha);
        case DivergenceKind::kl:
            return x * std::log(x / y);
        case DivergenceKind::l2:
            return (x - y) * (x - y);
        default:
            break;
    }
    throw std::logic_error("custom functional without callables");
}

double PhiFunctional::d1(double x, double y) const {
    if (custom) return custom->d1(x, y);
    switch (kind) {
        case DivergenceKind::renyi:
        case DivergenceKind::tsallis:
            return alpha * std::pow(x / y, alpha - 1.0);
        case DivergenceKind::kl:
            return 1.0 + std::log(x / y);
        case DivergenceKind::l2:
            return 2.0 * (x - y);
        default:
            break;
    }
    throw std::logic_error("custom functional without callables");
}

double PhiFunctional::d2(double x, double y) const {
    if (custom) return custom->d2(x, y);
    switch (kind) {
        case DivergenceKind::renyi:
        case DivergenceKind::tsallis:
            return (1.0 - alpha) * std::pow(x / y, alpha);
        case DivergenceKind::kl:
            return -x / y;
        case DivergenceKind::l2:
            return -2.0 * (x - y);
        default:
            break;
    }
    throw std::logic_error("custom functional without callables");
}

double PhiFunctional::d11(double x, double y) const {
    if (custom) return custom->d11(x, y);
    switch (kind) {
        case DivergenceKind::renyi:
        case DivergenceKind::tsallis:
            return alpha * (alpha - 1.0) * std::pow(x, alpha - 2.0) * std::pow(y, 1.0 - alpha);
        case DivergenceKind::kl:
            return 1.0 / x;
        case DivergenceKind::l2:
            return 2.0;
        default:
            break;
    }
    throw std::logic_error("custom functional without callables");
}

double PhiFunctional::d22(double x, double y) const {
    if (custom) return custom->d22(x, y);
    switch (kind) {
        case DivergenceKind::renyi:
        case DivergenceKind::tsallis:
            return alpha * (alpha - 1.0) * std::pow(x, alpha) * std::pow(y, -alpha - 1.0);
        case DivergenceKind::kl:
            return x / (y * y);
        case DivergenceKind::l2:
            return 2.0;
        default:
            break;
    }
    throw std::logic_error("custom functional without callables");
}

double PhiFunctional::d12(double x, double y) const {
    if (custom) return custom->d12(x, y);
    switch (kind) {
        case DivergenceKind::renyi:
        case DivergenceKind::tsallis:
            return alpha * (1.0 - alpha) * std::pow(x, alpha - 1.0) * std::pow(y, -alpha);
        case DivergenceKind::kl:
            return -1.0 / y;
        case DivergenceKind::l2:
            return -2.0;
        default:
            break;
    }
    throw std::logic_error("custom functional without callables");
}

double PhiFunctional::finalize(double core) const {
    switch (kind) {
        case DivergenceKind::renyi:
            return std::log(core) / (alpha - 1.0);
        case DivergenceKind::tsallis:
            return (core - 1.0) / (alpha - 1.0);
        default:
            return core;
    }
}

PhiFunctional phi_functional(DivergenceKind kind, double alpha) {
    PhiFunctional p;
    p.kind = kind;
    if (kind == DivergenceKind::renyi || kind == DivergenceKind::tsallis) {
        if (!(alpha > 0.0) || alpha == 1.0) {
            throw std::invalid_argument("alpha-family needs alpha > 0, alpha != 1");
        }
        p.alpha = alpha;
    } else if (kind == DivergenceKind::custom) {
        throw std::invalid_argument("use custom_phi_functional for custom kinds");
    }
    return p;
}

PhiFunctional custom_phi_functional(PhiFunctional::Custom fns) {
    PhiFunctional p;
    p.kind = DivergenceKind::custom;
    p.custom = std::move(fns);
    return p;
}

} // namespace wavediv
