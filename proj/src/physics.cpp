#include "pinnlab/physics.hpp"

#include <cmath>

namespace pinnlab {

double eval_target(const TargetField& target, const SpaceTime& point, const FluidProps& fluid) {
    switch (target.kind) {
        case TargetField::Kind::none: return 0.0;
        case TargetField::Kind::constant: return target.value;
        case TargetField::Kind::tgv_u: return tgv_solution(point, fluid).u;
        case TargetField::Kind::tgv_v: return tgv_solution(point, fluid).v;
        case TargetField::Kind::tgv_p: return tgv_solution(point, fluid).p;
    }
    return 0.0;
}

std::array<double, 3> ns_residual(const OutputJet& jet, const FluidProps& props, bool steady) {
    double ut = steady ? 0.0 : jet.du[2];
    double vt = steady ? 0.0 : jet.dv[2];

    double r_cont = jet.du[0] + jet.dv[1];
    double r_mx = ut + jet.u * jet.du[0] + jet.v * jet.du[1] + jet.dp[0] / props.rho -
                  props.nu * (jet.d2u[0] + jet.d2u[1]);
    double r_my = vt + jet.u * jet.dv[0] + jet.v * jet.dv[1] + jet.dp[1] / props.rho -
                  props.nu * (jet.d2v[0] + jet.d2v[1]);
    return {r_cont, r_mx, r_my};
}

OutputJet tgv_solution(const SpaceTime& point, const FluidProps& props) {
    double t = point.t.value_or(0.0);
    double e2 = std::exp(-2.0 * props.nu * t);
    double e4 = e2 * e2;
    double sx = std::sin(point.x), cx = std::cos(point.x);
    double sy = std::sin(point.y), cy = std::cos(point.y);

    OutputJet jet;
    jet.u = cx * sy * e2;
    jet.v = -sx * cy * e2;
    jet.p = -0.25 * props.rho * (std::cos(2.0 * point.x) + std::cos(2.0 * point.y)) * e4;

    jet.du = {-sx * sy * e2, cx * cy * e2, -2.0 * props.nu * jet.u};
    jet.dv = {-cx * cy * e2, sx * sy * e2, -2.0 * props.nu * jet.v};
    jet.dp = {0.5 * props.rho * std::sin(2.0 * point.x) * e4,
              0.5 * props.rho * std::sin(2.0 * point.y) * e4, -4.0 * props.nu * jet.p};
    jet.d2u = {-jet.u, -jet.u};
    jet.d2v = {-jet.v, -jet.v};
    return jet;
}

std::array<double, 2> bc_residual(const OutputJet& jet, const ConditionSpec& spec,
                                  const SpaceTime& point, const FluidProps& fluid) {
    switch (spec.kind) {
        case ConditionKind::dirichlet:
            return {jet.u - eval_target(spec.u, point, fluid),
                    jet.v - eval_target(spec.v, point, fluid)};
        case ConditionKind::neumann: {
            double dun = spec.normal[0] * jet.du[0] + spec.normal[1] * jet.du[1];
            double dvn = spec.normal[0] * jet.dv[0] + spec.normal[1] * jet.dv[1];
            return {dun - eval_target(spec.u, point, fluid),
                    dvn - eval_target(spec.v, point, fluid)};
        }
        case ConditionKind::convective: {
            double dun = spec.normal[0] * jet.du[0] + spec.normal[1] * jet.du[1];
            double dvn = spec.normal[0] * jet.dv[0] + spec.normal[1] * jet.dv[1];
            return {jet.du[2] + spec.convection_speed * dun,
                    jet.dv[2] + spec.convection_speed * dvn};
        }
        default:
            throw contract_error("bc_residual: condition kind is not a boundary kind");
    }
}

std::array<double, 3> data_residual(const std::array<double, 3>& pred,
                                    const std::array<double, 3>& data) {
    return {pred[0] - data[0], pred[1] - data[1], pred[2] - data[2]};
}

LossBreakdown aggregate_loss(const std::array<std::vector<double>, loss_term_count>& residuals,
                             const TermArray& weights) {
    bool any = false;
    for (const auto& group : residuals) any = any || !group.empty();
    require(any, "aggregate_loss: all residual groups are empty");

    LossBreakdown out;
    out.weights = weights;
    for (int t = 0; t < loss_term_count; ++t) {
        const auto& group = residuals[t];
        if (group.empty()) continue;
        double sum = 0.0;
        for (double r : group) sum += r * r;
        out.terms[t] = sum / static_cast<double>(group.size());
        out.total += weights[t] * out.terms[t];
    }
    return out;
}

} // namespace pinnlab
