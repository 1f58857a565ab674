#pragma once

#include <cmath>
#include <string>
#include <string_view>

namespace pinnlab {

/// Element-wise nonlinearity of the surrogate network. "silu" is
/// z / (1 + exp(-z)); "logistic" is 1 / (1 + exp(-z)); "identity" turns a
/// layer into a plain affine map.
enum class Activation { identity, logistic, silu };

Activation parse_activation(std::string_view name);
std::string_view to_string(Activation a);

/// sigma and its first three derivatives at one pre-activation value.
/// The derivative-jet forward pass consumes s1 and s2; reverse-mode
/// parameter gradients of second-derivative losses additionally need s3.
struct ActDerivs {
    double s0, s1, s2, s3;
};

namespace detail {

// Overflow-safe logistic: never evaluates exp of a positive argument.
inline double logistic(double z) {
    if (z >= 0.0) {
        double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace detail

inline double activation_value(Activation a, double z) {
    switch (a) {
        case Activation::identity: return z;
        case Activation::logistic: return detail::logistic(z);
        case Activation::silu: return z * detail::logistic(z);
    }
    return 0.0;
}

inline ActDerivs activation_derivs(Activation a, double z) {
    if (a == Activation::identity) return {z, 1.0, 0.0, 0.0};

    double s = detail::logistic(z);
    double s1 = s * (1.0 - s);
    double s2 = s1 * (1.0 - 2.0 * s);
    double s3 = s2 * (1.0 - 2.0 * s) - 2.0 * s1 * s1;
    if (a == Activation::logistic) return {s, s1, s2, s3};

    // silu(z) = z * s(z); derivatives follow from the product rule.
    return {z * s, s + z * s1, 2.0 * s1 + z * s2, 3.0 * s2 + z * s3};
}

} // namespace pinnlab
