#pragma once

#include "pinnlab/physics.hpp"

namespace pinnlab {

/// Which loss terms a group of training points feeds. Each subgroup is
/// responsible only for its own terms: interior points feed the PDE
/// residuals, initial/data points the misfit terms, boundary points the
/// boundary terms.
enum class Role { interior, initial, data, dirichlet, neumann, convective, pressure_pin };

struct RoleSlice {
    Role role = Role::interior;
    std::vector<SpaceTime> points;
    ConditionSpec spec;                            // unused for interior
    std::vector<std::array<double, 3>> targets;    // data role: tabulated (u,v,p)
};

struct ResidualBatch {
    std::vector<RoleSlice> slices;
    FluidProps fluid;
    bool steady = false;
};

struct LossGradient {
    LossBreakdown loss;
    ParamGradient grad;
};

/// Aggregated loss over the batch without the parameter gradient. Shares
/// the evaluation path of loss_gradient, so the two scalars agree.
LossBreakdown evaluate_loss(const Mlp& net, const ResidualBatch& batch,
                            const TermArray& weights, int threads = 1);

/// Aggregated loss and its exact gradient with respect to every parameter
/// entry, by reverse accumulation through the derivative-jet forward pass.
/// Points are processed in fixed-size blocks whose partial sums are
/// combined in block order, so results are bit-identical for any thread
/// count and across repeated calls.
LossGradient loss_gradient(const Mlp& net, const ResidualBatch& batch,
                           const TermArray& weights, int threads = 1);

} // namespace pinnlab
