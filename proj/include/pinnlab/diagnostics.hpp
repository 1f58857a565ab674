#pragma once

#include "pinnlab/physics.hpp"
#include "pinnlab/sampling.hpp"

#include <filesystem>
#include <functional>
#include <memory>

namespace pinnlab {

/// A flow field with exact derivatives, abstracted over its source so the
/// same diagnostics run on trained networks, the analytic vortex solution,
/// and manufactured test fields.
using FieldJet = std::function<OutputJet(const SpaceTime&)>;

/// Adapts a network to FieldJet. Steady networks ignore the incoming time
/// coordinate (their fields are time-independent). The reference overload
/// requires the network to outlive the closure; the shared_ptr overload
/// keeps it alive.
FieldJet field_from_net(const Mlp& net);
FieldJet field_from_net(std::shared_ptr<const Mlp> net);

/// Uniform evaluation grid; fields are sampled at cell centers, row-major
/// with y as the outer index, so emitted files are byte-stable.
struct GridSpec {
    int nx = 0, ny = 0;
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;

    double cell_x(int i) const { return x_min + (i + 0.5) * (x_max - x_min) / nx; }
    double cell_y(int j) const { return y_min + (j + 0.5) * (y_max - y_min) / ny; }
};

struct FieldSnapshot {
    double t = 0.0;
    int nx = 0, ny = 0;
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    std::vector<double> u, v, p;      // length nx*ny, index j*nx + i
    std::vector<double> omega, q;     // optional derived fields (empty if absent)

    GridSpec grid() const { return {nx, ny, x_min, x_max, y_min, y_max}; }
};

double vorticity(const OutputJet& jet);
double q_criterion(const OutputJet& jet);

FieldSnapshot evaluate_snapshot(const FieldJet& field, const GridSpec& grid,
                                std::optional<double> t, bool with_derived);

/// Snapshot file: `# t=<f> nx=<d> ny=<d> xmin=<f> xmax=<f> ymin=<f> ymax=<f>`
/// then one `x,y,u,v,p[,omega,q]` line per cell. Extra leading comment
/// lines are permitted (mode exports add one) and skipped on read.
void write_snapshot(const FieldSnapshot& snap, const std::filesystem::path& path,
                    const std::string& extra_comment = {});
FieldSnapshot read_snapshot(const std::filesystem::path& path);

struct ForceCoefficients {
    double cd = 0.0;          // total drag
    double cd_pressure = 0.0; // pressure component
    double cd_friction = 0.0; // viscous component
    double cl = 0.0;          // total lift
    double t = 0.0;
};

/// Surface integrals over the cylinder with uniform-angle trapezoid
/// quadrature (equal weights on the closed curve): pressure force
/// -oint p n ds and viscous force oint mu (grad u + grad u^T) n ds,
/// normalized by 1/2 rho U^2 D with U = 1, D = 2r. cd equals
/// cd_pressure + cd_friction exactly (both integrals share nodes).
ForceCoefficients force_coefficients(const FieldJet& field, const DomainSpec& domain,
                                     std::optional<double> t, const FluidProps& props,
                                     int n_surface);

/// Pressure sampled at uniform angles on the cylinder. Theta is measured
/// from the downstream (+x) stagnation point, counterclockwise, radians;
/// output writers record this convention in their headers.
std::vector<std::array<double, 2>> surface_pressure(const FieldJet& field,
                                                    const DomainSpec& domain,
                                                    std::optional<double> t, int n);

using ScalarField = std::function<double(const SpaceTime&)>;

/// Discrete L2 spatial-temporal error:
///   sqrt( (1/(Nx Ny Nt)) sum (f - f_ref)^2 )
/// over grid cell centers and the listed times.
double l2_spacetime_error(const ScalarField& f, const ScalarField& ref, const GridSpec& grid,
                          const std::vector<double>& times);

} // namespace pinnlab
