#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"

#include "pinnlab/diagnostics.hpp"

#include <filesystem>

using namespace pinnlab;
namespace fs = std::filesystem;

namespace {

OutputJet rigid_rotation(const SpaceTime& pt) {
    // u = (-y, x): solid-body rotation.
    OutputJet jet;
    jet.u = -pt.y;
    jet.v = pt.x;
    jet.du = {0.0, -1.0, 0.0};
    jet.dv = {1.0, 0.0, 0.0};
    return jet;
}

OutputJet pure_shear(const SpaceTime& pt) {
    OutputJet jet;
    jet.u = pt.y;
    jet.du = {0.0, 1.0, 0.0};
    return jet;
}

DomainSpec cylinder_domain() {
    DomainSpec domain;
    domain.x_min = -10.0;
    domain.x_max = 30.0;
    domain.y_min = -10.0;
    domain.y_max = 10.0;
    domain.hole = Cylinder{0.0, 0.0, 0.5};
    return domain;
}

} // namespace

TEST_CASE("vorticity and Q-criterion reference fields") {
    OutputJet rot = rigid_rotation({0.2, 0.3, std::nullopt});
    CHECK(vorticity(rot) == 2.0);
    CHECK(q_criterion(rot) == 1.0);

    OutputJet shear = pure_shear({0.1, 0.5, std::nullopt});
    CHECK(vorticity(shear) == -1.0);
    CHECK(q_criterion(shear) == 0.0);

    OutputJet uniform;
    uniform.u = 1.0;
    CHECK(vorticity(uniform) == 0.0);
    CHECK(q_criterion(uniform) == 0.0);
}

TEST_CASE("constant pressure and zero gradients give zero force coefficients") {
    DomainSpec domain = cylinder_domain();
    FieldJet field = [](const SpaceTime&) {
        OutputJet jet;
        jet.p = 2.5;
        return jet;
    };
    ForceCoefficients f = force_coefficients(field, domain, std::nullopt, {0.025, 1.0}, 128);
    CHECK(std::abs(f.cd) < 1e-14);
    CHECK(std::abs(f.cd_pressure) < 1e-14);
    CHECK(std::abs(f.cd_friction) < 1e-14);
    CHECK(std::abs(f.cl) < 1e-14);
}

TEST_CASE("manufactured cos(theta) surface pressure matches the analytic integral") {
    // p = (x - cx)/r equals cos(theta) on the surface; no viscous stress.
    // oint p n_x ds = integral cos^2(theta) r dtheta = pi r, so the pressure
    // drag coefficient is -pi r / (1/2 rho U^2 2r) = -pi.
    DomainSpec domain = cylinder_domain();
    const double r = domain.hole->radius;
    FieldJet field = [r](const SpaceTime& pt) {
        OutputJet jet;
        jet.p = pt.x / r;
        jet.dp = {1.0 / r, 0.0, 0.0};
        return jet;
    };
    FluidProps props{0.025, 1.0};
    ForceCoefficients f = force_coefficients(field, domain, std::nullopt, props, 256);
    const double dyn = 0.5 * props.rho * 1.0 * (2.0 * r);
    double integral = -f.cd_pressure * dyn; // recover oint p n_x ds
    CHECK(std::abs(integral - M_PI * r) < 1e-10);
    CHECK(f.cd_pressure == doctest::Approx(-M_PI).epsilon(1e-10));
    CHECK(std::abs(f.cl) < 1e-12);
    CHECK(std::abs(f.cd_friction) < 1e-14);
}

TEST_CASE("cd equals cd_pressure plus cd_friction exactly") {
    DomainSpec domain = cylinder_domain();
    Mlp net = oracle::random_net(2, 12, 31, false);
    FieldJet field = field_from_net(net);
    ForceCoefficients f = force_coefficients(field, domain, std::nullopt, {0.025, 1.0}, 64);
    CHECK(f.cd == f.cd_pressure + f.cd_friction);
    CHECK(std::abs(f.cd - (f.cd_pressure + f.cd_friction)) < 1e-12);
}

TEST_CASE("quadrature converges fast on a smooth manufactured field") {
    DomainSpec domain = cylinder_domain();
    FieldJet field = [](const SpaceTime& pt) {
        OutputJet jet;
        jet.u = std::sin(pt.x) * std::cos(pt.y);
        jet.v = pt.x * pt.y;
        jet.p = std::cos(2.0 * pt.x) + pt.y;
        jet.du = {std::cos(pt.x) * std::cos(pt.y), -std::sin(pt.x) * std::sin(pt.y), 0.0};
        jet.dv = {pt.y, pt.x, 0.0};
        return jet;
    };
    FluidProps props{0.025, 1.0};
    ForceCoefficients coarse = force_coefficients(field, domain, std::nullopt, props, 64);
    ForceCoefficients fine = force_coefficients(field, domain, std::nullopt, props, 128);
    ForceCoefficients finest = force_coefficients(field, domain, std::nullopt, props, 256);
    // Periodic trapezoid on a smooth closed-curve integrand: differences
    // collapse at least as fast as O(n^-2).
    double d1 = std::abs(coarse.cd - fine.cd);
    double d2 = std::abs(fine.cd - finest.cd);
    CHECK(d2 <= d1 / 4.0 + 1e-13);
}

TEST_CASE("mirror symmetry negates lift and vorticity, preserves drag and Q") {
    DomainSpec domain = cylinder_domain();
    Mlp net = oracle::random_net(2, 10, 77, false);
    FieldJet field = field_from_net(net);
    // Reflected field: u'(x, y) = u(x, -y), v'(x, y) = -v(x, -y).
    FieldJet mirrored = [field](const SpaceTime& pt) {
        OutputJet src = field({pt.x, -pt.y, pt.t});
        OutputJet jet;
        jet.u = src.u;
        jet.v = -src.v;
        jet.p = src.p;
        jet.du = {src.du[0], -src.du[1], src.du[2]};
        jet.dv = {-src.dv[0], src.dv[1], -src.dv[2]};
        jet.dp = {src.dp[0], -src.dp[1], src.dp[2]};
        jet.d2u = src.d2u;
        jet.d2v = {-src.d2v[0], -src.d2v[1]};
        return jet;
    };
    FluidProps props{0.025, 1.0};
    ForceCoefficients f = force_coefficients(field, domain, std::nullopt, props, 128);
    ForceCoefficients m = force_coefficients(mirrored, domain, std::nullopt, props, 128);
    CHECK(m.cd == doctest::Approx(f.cd).epsilon(1e-12));
    CHECK(m.cl == doctest::Approx(-f.cl).epsilon(1e-12));

    SpaceTime pt{0.4, 0.7, std::nullopt};
    OutputJet a = field(pt);
    OutputJet b = mirrored({pt.x, -pt.y, std::nullopt});
    CHECK(vorticity(b) == doctest::Approx(-vorticity(a)).epsilon(1e-12));
    CHECK(q_criterion(b) == doctest::Approx(q_criterion(a)).epsilon(1e-12));
}

TEST_CASE("surface pressure sampling conventions") {
    DomainSpec domain = cylinder_domain();
    // Symmetric manufactured field p(theta) = p(-theta).
    FieldJet field = [](const SpaceTime& pt) {
        OutputJet jet;
        jet.p = pt.x * pt.x + std::cos(pt.y * pt.y);
        return jet;
    };
    auto samples = surface_pressure(field, domain, std::nullopt, 64);
    REQUIRE(samples.size() == 64);
    CHECK(samples[0][0] == 0.0); // theta starts at the downstream (+x) point
    for (std::size_t i = 1; i < 32; ++i) {
        double top = samples[i][1];
        double bottom = samples[64 - i][1];
        CHECK(std::abs(top - bottom) < 1e-12);
    }

    // Matches direct evaluation at the same points.
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double theta = samples[i][0];
        SpaceTime pt{0.5 * std::cos(theta), 0.5 * std::sin(theta), std::nullopt};
        CHECK(samples[i][1] == field(pt).p);
    }
}

TEST_CASE("constant-pressure field gives a flat distribution") {
    DomainSpec domain = cylinder_domain();
    FieldJet field = [](const SpaceTime&) {
        OutputJet jet;
        jet.p = -0.125;
        return jet;
    };
    for (const auto& [theta, p] : surface_pressure(field, domain, std::nullopt, 32))
        CHECK(p == -0.125);
}

TEST_CASE("l2 space-time error basics and loop oracle") {
    GridSpec grid{8, 6, -1.0, 1.0, -1.0, 1.0};
    std::vector<double> times{0.0, 0.5, 1.0};

    ScalarField f = [](const SpaceTime& pt) { return std::sin(pt.x) + pt.y * *pt.t; };
    CHECK(l2_spacetime_error(f, f, grid, times) == 0.0);

    const double delta = 0.37;
    ScalarField shifted = [&](const SpaceTime& pt) { return f(pt) + delta; };
    CHECK(l2_spacetime_error(shifted, f, grid, times) == doctest::Approx(delta).epsilon(1e-14));

    // Random fields against a naive triple loop.
    ScalarField a = [](const SpaceTime& pt) { return std::cos(3 * pt.x) * pt.y + *pt.t; };
    ScalarField b = [](const SpaceTime& pt) { return pt.x * pt.y * *pt.t; };
    double sum = 0.0;
    for (double t : times)
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) {
                SpaceTime pt{grid.cell_x(i), grid.cell_y(j), t};
                double d = a(pt) - b(pt);
                sum += d * d;
            }
    double want = std::sqrt(sum / (grid.nx * grid.ny * static_cast<double>(times.size())));
    CHECK(l2_spacetime_error(a, b, grid, times) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("snapshot evaluation matches forward at cell centers") {
    Mlp net = oracle::random_net(2, 8, 404, true);
    GridSpec grid{5, 4, 0.0, 1.0, 0.0, 2.0};
    FieldSnapshot snap = evaluate_snapshot(field_from_net(net), grid, 0.75, true);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            SpaceTime pt{grid.cell_x(i), grid.cell_y(j), 0.75};
            auto fwd = net.forward(pt);
            std::size_t idx = static_cast<std::size_t>(j) * grid.nx + i;
            CHECK(snap.u[idx] == fwd[0]);
            CHECK(snap.v[idx] == fwd[1]);
            CHECK(snap.p[idx] == fwd[2]);
            OutputJet jet = jet_eval(net, pt);
            CHECK(snap.omega[idx] == vorticity(jet));
            CHECK(snap.q[idx] == q_criterion(jet));
        }
    }
}

TEST_CASE("snapshot files round-trip through the text format") {
    fs::path dir = fs::temp_directory_path() / "pinnlab_snap_test";
    fs::create_directories(dir);
    Mlp net = oracle::random_net(2, 8, 11, true);
    GridSpec grid{7, 5, -2.0, 3.0, -1.0, 1.5};
    FieldSnapshot snap = evaluate_snapshot(field_from_net(net), grid, 1.25, true);
    write_snapshot(snap, dir / "snap.csv");

    FieldSnapshot back = read_snapshot(dir / "snap.csv");
    CHECK(back.t == snap.t);
    CHECK(back.nx == snap.nx);
    CHECK(back.ny == snap.ny);
    CHECK(back.x_min == snap.x_min);
    CHECK(back.y_max == snap.y_max);
    CHECK(back.u == snap.u);
    CHECK(back.v == snap.v);
    CHECK(back.p == snap.p);
    CHECK(back.omega == snap.omega);
    CHECK(back.q == snap.q);
}

TEST_CASE("snapshot reader rejects inconsistent files") {
    fs::path dir = fs::temp_directory_path() / "pinnlab_snap_test";
    fs::create_directories(dir);
    write_file_atomic(dir / "bad.csv", "no header here\n");
    CHECK_THROWS_AS(read_snapshot(dir / "bad.csv"), format_error);

    write_file_atomic(dir / "short.csv",
                      "# t=0 nx=2 ny=2 xmin=0 xmax=1 ymin=0 ymax=1\n0,0,1,2,3\n");
    CHECK_THROWS_AS(read_snapshot(dir / "short.csv"), format_error);
}

TEST_CASE("force computation requires a cylinder and enough nodes") {
    DomainSpec no_hole = cylinder_domain();
    no_hole.hole.reset();
    FieldJet field = [](const SpaceTime&) { return OutputJet{}; };
    CHECK_THROWS_AS(force_coefficients(field, no_hole, std::nullopt, {0.01, 1.0}, 64),
                    contract_error);
    CHECK_THROWS_AS(force_coefficients(field, cylinder_domain(), std::nullopt, {0.01, 1.0}, 8),
                    contract_error);
}
