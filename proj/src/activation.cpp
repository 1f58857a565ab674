#include "pinnlab/activation.hpp"

#include "pinnlab/common.hpp"

namespace pinnlab {

Activation parse_activation(std::string_view name) {
    if (name == "identity") return Activation::identity;
    if (name == "logistic") return Activation::logistic;
    if (name == "silu") return Activation::silu;
    throw contract_error("unknown activation tag: " + std::string(name));
}

std::string_view to_string(Activation a) {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::logistic: return "logistic";
        case Activation::silu: return "silu";
    }
    return "?";
}

} // namespace pinnlab
