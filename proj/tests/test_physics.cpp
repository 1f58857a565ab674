#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include "pinnlab/diagnostics.hpp"

using namespace pinnlab;

namespace {

OutputJet uniform_stream() {
    OutputJet jet;
    jet.u = 1.0;
    jet.v = 0.0;
    jet.p = 0.7; // constant pressure, all derivatives zero
    return jet;
}

} // namespace

TEST_CASE("quiescent and uniform fields satisfy the equations exactly") {
    FluidProps props{0.01, 1.0};
    OutputJet quiescent;
    auto r0 = ns_residual(quiescent, props, false);
    CHECK(r0 == std::array<double, 3>{0.0, 0.0, 0.0});

    auto r1 = ns_residual(uniform_stream(), props, false);
    CHECK(r1 == std::array<double, 3>{0.0, 0.0, 0.0});
    auto r2 = ns_residual(uniform_stream(), props, true);
    CHECK(r2 == std::array<double, 3>{0.0, 0.0, 0.0});
}

TEST_CASE("analytic vortex jet solves the equations to round-off") {
    FluidProps props{0.01, 1.0};
    OutputJet jet = tgv_solution({0.3, -0.7, 1.2}, props);
    auto r = ns_residual(jet, props, false);
    CHECK(std::abs(r[0]) < 1e-12);
    CHECK(std::abs(r[1]) < 1e-12);
    CHECK(std::abs(r[2]) < 1e-12);
}

TEST_CASE("vortex residual identity over 1e4 random points") {
    FluidProps props{0.01, 1.0};
    Rng rng(2718);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        SpaceTime pt{rng.uniform(-M_PI, M_PI), rng.uniform(-M_PI, M_PI), rng.uniform(0.0, 100.0)};
        auto r = ns_residual(tgv_solution(pt, props), props, false);
        for (double c : r) worst = std::max(worst, std::abs(c));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("analytic vortex point values") {
    FluidProps props{0.01, 1.0};
    OutputJet origin = tgv_solution({0.0, 0.0, 0.0}, props);
    CHECK(origin.u == 0.0);
    CHECK(origin.v == 0.0);
    CHECK(origin.p == doctest::Approx(-0.5).epsilon(1e-15));

    OutputJet quarter = tgv_solution({M_PI / 2.0, 0.0, 0.0}, props);
    CHECK(std::abs(quarter.u) < 1e-15);
    CHECK(quarter.v == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(quarter.p) < 1e-15);

    // Hand-differentiated vorticity at the origin: -2 cos x cos y e^{-2 nu t}.
    CHECK(vorticity(origin) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("analytic vortex jet entries match finite differences of themselves") {
    FluidProps props{0.013, 1.2};
    const double h = 1e-6;
    SpaceTime pt{0.4, -1.1, 2.3};
    OutputJet jet = tgv_solution(pt, props);
    auto u_at = [&](double dx, double dy, double dt) {
        return tgv_solution({pt.x + dx, pt.y + dy, *pt.t + dt}, props);
    };
    CHECK(jet.du[0] ==
          doctest::Approx((u_at(h, 0, 0).u - u_at(-h, 0, 0).u) / (2 * h)).epsilon(1e-8));
    CHECK(jet.dv[1] ==
          doctest::Approx((u_at(0, h, 0).v - u_at(0, -h, 0).v) / (2 * h)).epsilon(1e-8));
    CHECK(jet.dp[2] ==
          doctest::Approx((u_at(0, 0, h).p - u_at(0, 0, -h).p) / (2 * h)).epsilon(1e-8));
    CHECK(jet.d2u[0] ==
          doctest::Approx((u_at(h, 0, 0).du[0] - u_at(-h, 0, 0).du[0]) / (2 * h)).epsilon(1e-8));
}

TEST_CASE("dirichlet residual on a matching uniform stream") {
    ConditionSpec spec;
    spec.kind = ConditionKind::dirichlet;
    spec.u = TargetField::constant(1.0);
    spec.v = TargetField::constant(0.0);
    auto r = bc_residual(uniform_stream(), spec, {0, 0, 0.0}, {});
    CHECK(r == std::array<double, 2>{0.0, 0.0});
}

TEST_CASE("steady uniform stream satisfies the convective outlet") {
    ConditionSpec spec;
    spec.kind = ConditionKind::convective;
    spec.normal = {1.0, 0.0};
    spec.convection_speed = 1.0;
    auto r = bc_residual(uniform_stream(), spec, {30.0, 0.0, 1.0}, {});
    CHECK(r == std::array<double, 2>{0.0, 0.0});
}

TEST_CASE("traveling wave satisfies the convective outlet exactly") {
    // u = sin(x - c t): du/dt + c du/dx = -c cos + c cos = 0.
    const double c = 1.7, x = 2.0, t = 0.4;
    OutputJet jet;
    jet.u = std::sin(x - c * t);
    jet.du = {std::cos(x - c * t), 0.0, -c * std::cos(x - c * t)};
    ConditionSpec spec;
    spec.kind = ConditionKind::convective;
    spec.normal = {1.0, 0.0};
    spec.convection_speed = c;
    auto r = bc_residual(jet, spec, {x, 0.0, t}, {});
    CHECK(std::abs(r[0]) < 1e-15);
    CHECK(r[1] == 0.0);
}

TEST_CASE("neumann residual against the outward normal") {
    OutputJet jet;
    jet.du = {2.0, 3.0, 0.0};
    jet.dv = {-1.0, 4.0, 0.0};
    ConditionSpec spec;
    spec.kind = ConditionKind::neumann;
    spec.normal = {0.0, -1.0};
    spec.u = TargetField::constant(-3.0);
    spec.v = TargetField::constant(0.0);
    auto r = bc_residual(jet, spec, {0, 0, 0.0}, {});
    CHECK(r[0] == 0.0); // du/dn = -3 matches the target
    CHECK(r[1] == -4.0);
}

TEST_CASE("initial/data misfit is a component-wise difference") {
    CHECK(data_residual({1, 2, 3}, {1, 2, 3}) == std::array<double, 3>{0, 0, 0});
    CHECK(data_residual({1.5, 2, 3}, {1, 2, 3}) == std::array<double, 3>{0.5, 0, 0});

    Rng rng(52);
    for (int i = 0; i < 50; ++i) {
        std::array<double, 3> a{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        std::array<double, 3> b{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        auto r = data_residual(a, b);
        for (int c = 0; c < 3; ++c) CHECK(r[c] == a[c] - b[c]);
    }
}

TEST_CASE("aggregate_loss examples") {
    std::array<std::vector<double>, loss_term_count> groups;
    groups[term_dirichlet_u] = {2.0};
    LossBreakdown single = aggregate_loss(groups, unit_weights());
    CHECK(single.terms[term_dirichlet_u] == 4.0);
    CHECK(single.total == 4.0);

    std::array<std::vector<double>, loss_term_count> pde;
    pde[term_continuity] = {1.0, -1.0};
    LossBreakdown two = aggregate_loss(pde, unit_weights());
    CHECK(two.terms[term_continuity] == 1.0);
    CHECK(two.total == 1.0);
}

TEST_CASE("aggregate_loss equals a naive loop over a random batch") {
    Rng rng(9001);
    std::array<std::vector<double>, loss_term_count> groups;
    for (int t = 0; t < loss_term_count; ++t) {
        int n = static_cast<int>(rng.integer(20));
        for (int i = 0; i < n; ++i) groups[t].push_back(rng.uniform(-3, 3));
    }
    groups[0].push_back(0.5); // guarantee at least one nonempty group
    TermArray weights;
    for (int t = 0; t < loss_term_count; ++t) weights[t] = rng.uniform(0.1, 2.0);

    LossBreakdown got = aggregate_loss(groups, weights);
    double total = 0.0;
    for (int t = 0; t < loss_term_count; ++t) {
        if (groups[t].empty()) {
            CHECK(got.terms[t] == 0.0);
            continue;
        }
        double sum = 0.0;
        for (double r : groups[t]) sum += r * r;
        double mean = sum / static_cast<double>(groups[t].size());
        CHECK(got.terms[t] == doctest::Approx(mean).epsilon(1e-15));
        CHECK(got.terms[t] >= 0.0);
        total += weights[t] * mean;
    }
    CHECK(got.total == doctest::Approx(total).epsilon(1e-14));
}

TEST_CASE("aggregate_loss rejects an all-empty batch") {
    std::array<std::vector<double>, loss_term_count> groups;
    CHECK_THROWS_AS(aggregate_loss(groups, unit_weights()), contract_error);
}

TEST_CASE("total vanishes only when every residual vanishes") {
    std::array<std::vector<double>, loss_term_count> zeros;
    zeros[term_continuity] = {0.0, 0.0};
    zeros[term_ic_u] = {0.0};
    CHECK(aggregate_loss(zeros, unit_weights()).total == 0.0);

    zeros[term_ic_u][0] = 1e-8;
    CHECK(aggregate_loss(zeros, unit_weights()).total > 0.0);
}

TEST_CASE("time-independent network: steady and unsteady residuals agree exactly") {
    Mlp net = oracle::random_net(2, 10, 321, true);
    // Sever the time input so the represented field is time-independent.
    net.mutable_layers()[0].W.col(2).setZero();
    FluidProps props{0.02, 1.3};
    Rng rng(7);
    for (int i = 0; i < 25; ++i) {
        SpaceTime pt{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0, 2)};
        OutputJet jet = jet_eval(net, pt);
        CHECK(ns_residual(jet, props, true) == ns_residual(jet, props, false));
    }
}
