#include "pinnlab/diagnostics.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace pinnlab {

namespace {

OutputJet net_jet(const Mlp& net, const SpaceTime& point) {
    SpaceTime q = point;
    if (!net.unsteady()) q.t.reset();
    else require(q.t.has_value(), "field_from_net: unsteady network requires a time");
    return jet_eval(net, q);
}

} // namespace

FieldJet field_from_net(const Mlp& net) {
    return [&net](const SpaceTime& point) { return net_jet(net, point); };
}

FieldJet field_from_net(std::shared_ptr<const Mlp> net) {
    return [net = std::move(net)](const SpaceTime& point) { return net_jet(*net, point); };
}

double vorticity(const OutputJet& jet) {
    return jet.dv[0] - jet.du[1];
}

double q_criterion(const OutputJet& jet) {
    double ux = jet.du[0], uy = jet.du[1];
    double vx = jet.dv[0], vy = jet.dv[1];
    double omega_sq = 0.5 * (uy - vx) * (uy - vx);
    double strain_sq = ux * ux + vy * vy + 0.5 * (uy + vx) * (uy + vx);
    return 0.5 * (omega_sq - strain_sq);
}

FieldSnapshot evaluate_snapshot(const FieldJet& field, const GridSpec& grid,
                                std::optional<double> t, bool with_derived) {
    require(grid.nx >= 1 && grid.ny >= 1, "evaluate_snapshot: grid must be non-empty");
    FieldSnapshot snap;
    snap.t = t.value_or(0.0);
    snap.nx = grid.nx;
    snap.ny = grid.ny;
    snap.x_min = grid.x_min;
    snap.x_max = grid.x_max;
    snap.y_min = grid.y_min;
    snap.y_max = grid.y_max;
    std::size_t n = static_cast<std::size_t>(grid.nx) * grid.ny;
    snap.u.resize(n);
    snap.v.resize(n);
    snap.p.resize(n);
    if (with_derived) {
        snap.omega.resize(n);
        snap.q.resize(n);
    }
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            SpaceTime pt{grid.cell_x(i), grid.cell_y(j), t};
            OutputJet jet = field(pt);
            std::size_t idx = static_cast<std::size_t>(j) * grid.nx + i;
            snap.u[idx] = jet.u;
            snap.v[idx] = jet.v;
            snap.p[idx] = jet.p;
            if (with_derived) {
                snap.omega[idx] = vorticity(jet);
                snap.q[idx] = q_criterion(jet);
            }
        }
    }
    return snap;
}

void write_snapshot(const FieldSnapshot& snap, const std::filesystem::path& path,
                    const std::string& extra_comment) {
    bool derived = !snap.omega.empty();
    std::ostringstream out;
    out << "# t=" << format_double(snap.t) << " nx=" << snap.nx << " ny=" << snap.ny
        << " xmin=" << format_double(snap.x_min) << " xmax=" << format_double(snap.x_max)
        << " ymin=" << format_double(snap.y_min) << " ymax=" << format_double(snap.y_max)
        << "\n";
    if (!extra_comment.empty()) out << "# " << extra_comment << "\n";
    GridSpec grid = snap.grid();
    for (int j = 0; j < snap.ny; ++j) {
        for (int i = 0; i < snap.nx; ++i) {
            std::size_t idx = static_cast<std::size_t>(j) * snap.nx + i;
            out << format_double(grid.cell_x(i)) << ',' << format_double(grid.cell_y(j)) << ','
                << format_double(snap.u[idx]) << ',' << format_double(snap.v[idx]) << ','
                << format_double(snap.p[idx]);
            if (derived)
                out << ',' << format_double(snap.omega[idx]) << ',' << format_double(snap.q[idx]);
            out << '\n';
        }
    }
    write_file_atomic(path, out.str());
}

namespace {

double parse_header_field(const std::string& header, const std::string& key,
                          const std::filesystem::path& path) {
    std::string tag = key + "=";
    std::size_t pos = header.find(tag);
    if (pos == std::string::npos)
        throw format_error("snapshot header missing " + key + " in " + path.string());
    return std::stod(header.substr(pos + tag.size()));
}

} // namespace

FieldSnapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw format_error("cannot open snapshot " + path.string());
    std::string header;
    if (!std::getline(in, header) || header.empty() || header[0] != '#')
        throw format_error("snapshot " + path.string() + " missing header line");

    FieldSnapshot snap;
    snap.t = parse_header_field(header, "t", path);
    snap.nx = static_cast<int>(parse_header_field(header, "nx", path));
    snap.ny = static_cast<int>(parse_header_field(header, "ny", path));
    snap.x_min = parse_header_field(header, "xmin", path);
    snap.x_max = parse_header_field(header, "xmax", path);
    snap.y_min = parse_header_field(header, "ymin", path);
    snap.y_max = parse_header_field(header, "ymax", path);
    if (snap.nx < 1 || snap.ny < 1)
        throw format_error("snapshot " + path.string() + " has a degenerate grid");

    std::size_t expected = static_cast<std::size_t>(snap.nx) * snap.ny;
    std::string line;
    std::size_t count = 0;
    bool derived = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') continue;
        std::array<double, 7> cols{};
        std::size_t ncols = 0;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',') && ncols < cols.size()) cols[ncols++] = std::stod(cell);
        if (ncols != 5 && ncols != 7)
            throw format_error("snapshot " + path.string() + " line has " +
                               std::to_string(ncols) + " columns");
        if (count == 0) {
            derived = (ncols == 7);
            if (derived) {
                snap.omega.resize(expected);
                snap.q.resize(expected);
            }
            snap.u.resize(expected);
            snap.v.resize(expected);
            snap.p.resize(expected);
        }
        if (count >= expected)
            throw format_error("snapshot " + path.string() + " has more rows than nx*ny");
        snap.u[count] = cols[2];
        snap.v[count] = cols[3];
        snap.p[count] = cols[4];
        if (derived) {
            snap.omega[count] = cols[5];
            snap.q[count] = cols[6];
        }
        ++count;
    }
    if (count != expected)
        throw format_error("snapshot " + path.string() + " has " + std::to_string(count) +
                           " rows, expected " + std::to_string(expected));
    return snap;
}

ForceCoefficients force_coefficients(const FieldJet& field, const DomainSpec& domain,
                                     std::optional<double> t, const FluidProps& props,
                                     int n_surface) {
    require(domain.hole.has_value(), "force_coefficients: domain has no cylinder");
    require(n_surface >= 16, "force_coefficients: need at least 16 surface points");

    const Cylinder& cyl = *domain.hole;
    const double mu = props.rho * props.nu;
    const double dtheta = 2.0 * std::numbers::pi / n_surface;
    const double ds = cyl.radius * dtheta;

    double fpx = 0.0, fpy = 0.0, fvx = 0.0, fvy = 0.0;
    for (int i = 0; i < n_surface; ++i) {
        double theta = i * dtheta;
        double nx = std::cos(theta), ny = std::sin(theta);
        SpaceTime pt{cyl.cx + cyl.radius * nx, cyl.cy + cyl.radius * ny, t};
        OutputJet jet = field(pt);

        fpx += -jet.p * nx * ds;
        fpy += -jet.p * ny * ds;

        // tau = mu (grad u + grad u^T)
        double txx = 2.0 * jet.du[0], txy = jet.du[1] + jet.dv[0], tyy = 2.0 * jet.dv[1];
        fvx += mu * (txx * nx + txy * ny) * ds;
        fvy += mu * (txy * nx + tyy * ny) * ds;
    }

    const double u_ref = 1.0;
    const double dyn = 0.5 * props.rho * u_ref * u_ref * (2.0 * cyl.radius);
    ForceCoefficients f;
    f.cd_pressure = fpx / dyn;
    f.cd_friction = fvx / dyn;
    f.cd = f.cd_pressure + f.cd_friction;
    f.cl = (fpy + fvy) / dyn;
    f.t = t.value_or(0.0);
    return f;
}

std::vector<std::array<double, 2>> surface_pressure(const FieldJet& field,
                                                    const DomainSpec& domain,
                                                    std::optional<double> t, int n) {
    require(domain.hole.has_value(), "surface_pressure: domain has no cylinder");
    require(n >= 1, "surface_pressure: need at least one sample");
    const Cylinder& cyl = *domain.hole;
    std::vector<std::array<double, 2>> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double theta = i * 2.0 * std::numbers::pi / n;
        SpaceTime pt{cyl.cx + cyl.radius * std::cos(theta), cyl.cy + cyl.radius * std::sin(theta),
                     t};
        out.push_back({theta, field(pt).p});
    }
    return out;
}

double l2_spacetime_error(const ScalarField& f, const ScalarField& ref, const GridSpec& grid,
                          const std::vector<double>& times) {
    require(grid.nx >= 1 && grid.ny >= 1, "l2_spacetime_error: grid must be non-empty");
    require(!times.empty(), "l2_spacetime_error: time list must be non-empty");
    double sum = 0.0;
    for (double t : times) {
        for (int j = 0; j < grid.ny; ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                SpaceTime pt{grid.cell_x(i), grid.cell_y(j), t};
                double d = f(pt) - ref(pt);
                sum += d * d;
            }
        }
    }
    double n = static_cast<double>(grid.nx) * grid.ny * times.size();
    return std::sqrt(sum / n);
}

} // namespace pinnlab
