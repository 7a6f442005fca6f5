#pragma once

#include <cmath>
#include <string>
#include <type_traits>
#include <variant>

#include "radv/errors.hpp"

namespace radv {

/// Nonlinearity applied to a nonnegative difference. g(0) = 0, continuous,
/// with a declared Lipschitz constant on any bounded domain [0, B].
///
/// Evaluating at a negative argument uses the odd extension
/// g(z) = -g(-z), which only matters for the change term.
class ShapeFn {
public:
    struct Identity {};
    struct Power {
        double exponent = 1.0;
    };
    /// z -> s (1 - exp(-z / s))
    struct Saturating {
        double scale = 1.0;
    };

    using Kind = std::variant<Identity, Power, Saturating>;

    ShapeFn() = default;
    ShapeFn(Kind kind) : kind_(kind) { // NOLINT(google-explicit-constructor)
        if (const auto* p = std::get_if<Power>(&kind_))
            detail::require(p->exponent >= 1.0 && std::isfinite(p->exponent), "shape: power exponent >= 1");
        if (const auto* s = std::get_if<Saturating>(&kind_))
            detail::require(s->scale > 0.0 && std::isfinite(s->scale), "shape: saturating scale > 0");
    }

    static ShapeFn identity() { return ShapeFn(Identity{}); }
    static ShapeFn power(double exponent) { return ShapeFn(Power{exponent}); }
    static ShapeFn saturating(double scale) { return ShapeFn(Saturating{scale}); }

    const Kind& kind() const noexcept { return kind_; }

    std::string name() const {
        switch (kind_.index()) {
        case 0: return "identity";
        case 1: return "power";
        default: return "saturating";
        }
    }

    double operator()(double z) const {
        if (z < 0.0) return -(*this)(-z);
        return std::visit(
            [z](const auto& k) -> double {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Identity>) return z;
                else if constexpr (std::is_same_v<K, Power>) return std::pow(z, k.exponent);
                else return -k.scale * std::expm1(-z / k.scale);
            },
            kind_);
    }

    /// Right derivative at z >= 0.
    double derivative(double z) const {
        return std::visit(
            [z](const auto& k) -> double {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Identity>) return 1.0;
                else if constexpr (std::is_same_v<K, Power>)
                    return k.exponent == 1.0 ? 1.0 : k.exponent * std::pow(z, k.exponent - 1.0);
                else return std::exp(-z / k.scale);
            },
            kind_);
    }

    /// Lipschitz constant on [0, bound].
    double lipschitz(double bound) const {
        if (const auto* p = std::get_if<Power>(&kind_))
            return p->exponent == 1.0 ? 1.0 : p->exponent * std::pow(std::abs(bound), p->exponent - 1.0);
        return 1.0;
    }

    bool operator==(const ShapeFn& other) const {
        if (kind_.index() != other.kind_.index()) return false;
        if (const auto* p = std::get_if<Power>(&kind_)) return p->exponent == std::get<Power>(other.kind_).exponent;
        if (const auto* s = std::get_if<Saturating>(&kind_))
            return s->scale == std::get<Saturating>(other.kind_).scale;
        return true;
    }

private:
    Kind kind_ = Identity{};
};

} // namespace radv
