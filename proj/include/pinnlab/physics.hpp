#pragma once

#include "pinnlab/jet.hpp"

#include <array>
#include <optional>
#include <vector>

namespace pinnlab {

struct FluidProps {
    double nu = 0.01;
    double rho = 1.0;
};

/// Per-term loss slots. Continuity and the two momentum components are fed
/// by interior points; the ic slots by the initial slice (or the data slice
/// in data-driven runs); dirichlet and flux (Neumann/convective) slots by
/// their boundary segments.
enum LossTerm : int {
    term_continuity = 0,
    term_momentum_x = 1,
    term_momentum_y = 2,
    term_ic_u = 3,
    term_ic_v = 4,
    term_ic_p = 5,
    term_dirichlet_u = 6,
    term_dirichlet_v = 7,
    term_flux_u = 8,
    term_flux_v = 9,
};
inline constexpr int loss_term_count = 10;

using TermArray = std::array<double, loss_term_count>;

inline TermArray unit_weights() {
    TermArray w;
    w.fill(1.0);
    return w;
}

/// Mean-square residual per term, applied weights, and the weighted total.
struct LossBreakdown {
    TermArray terms{};
    TermArray weights{};
    double total = 0.0;
};

/// A boundary/initial target that can be spelled in a config file: either a
/// constant or one component of the analytic decaying-vortex solution.
struct TargetField {
    enum class Kind { none, constant, tgv_u, tgv_v, tgv_p };
    Kind kind = Kind::none;
    double value = 0.0;

    static TargetField constant(double v) { return {Kind::constant, v}; }
    static TargetField none() { return {}; }
    bool present() const { return kind != Kind::none; }
};

double eval_target(const TargetField& target, const SpaceTime& point, const FluidProps& fluid);

enum class ConditionKind { dirichlet, neumann, convective, initial, data };

struct ConditionSpec {
    ConditionKind kind = ConditionKind::dirichlet;
    TargetField u, v, p;              // u_D/v_D, u_N/v_N, or u0/v0/p0 by kind
    std::array<double, 2> normal{1.0, 0.0}; // outward normal (neumann/convective)
    double convection_speed = 1.0;    // convective kind only
};

// ---------------------------------------------------------------------------
// Residual operators
// ---------------------------------------------------------------------------

/// (continuity, momentum-x, momentum-y) residuals of the incompressible
/// equations at one jet. The steady flag zeroes the time-derivative
/// contributions.
std::array<double, 3> ns_residual(const OutputJet& jet, const FluidProps& props, bool steady);

/// Analytic decaying-vortex field and its closed-form jet:
///   u =  cos x sin y exp(-2 nu t)
///   v = -sin x cos y exp(-2 nu t)
///   p = -(rho/4)(cos 2x + cos 2y) exp(-4 nu t)
OutputJet tgv_solution(const SpaceTime& point, const FluidProps& props);

/// Boundary residual vector (2 entries, u then v) for the given condition.
std::array<double, 2> bc_residual(const OutputJet& jet, const ConditionSpec& spec,
                                  const SpaceTime& point, const FluidProps& fluid);

/// Component-wise prediction-minus-data misfit (L4, L5, L6).
std::array<double, 3> data_residual(const std::array<double, 3>& pred,
                                    const std::array<double, 3>& data);

/// Mean of squared residuals per term and the weighted total. Every group
/// may be empty except that at least one group must carry points.
LossBreakdown aggregate_loss(const std::array<std::vector<double>, loss_term_count>& residuals,
                             const TermArray& weights);

} // namespace pinnlab
