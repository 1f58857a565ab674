#include "pinnlab/koopman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace pinnlab {

FieldMask parse_field_mask(std::string_view spec) {
    FieldMask mask{false, false, false};
    for (char c : spec) {
        if (c == 'u') mask.u = true;
        else if (c == 'v') mask.v = true;
        else if (c == 'p') mask.p = true;
        else throw contract_error("field mask may only contain u, v, p");
    }
    require(mask.count() > 0, "field mask selects no fields");
    return mask;
}

std::string to_string(const FieldMask& mask) {
    std::string s;
    if (mask.u) s += 'u';
    if (mask.v) s += 'v';
    if (mask.p) s += 'p';
    return s;
}

SnapshotSeries make_series(std::vector<FieldSnapshot> snaps, FieldMask mask) {
    require(snaps.size() >= 2, "snapshot series needs at least two snapshots");
    std::stable_sort(snaps.begin(), snaps.end(),
                     [](const FieldSnapshot& a, const FieldSnapshot& b) { return a.t < b.t; });
    const FieldSnapshot& first = snaps.front();
    double dt = snaps[1].t - snaps[0].t;
    require(dt > 0.0, "snapshot series times must be strictly increasing");
    for (std::size_t k = 0; k < snaps.size(); ++k) {
        const FieldSnapshot& s = snaps[k];
        require(s.nx == first.nx && s.ny == first.ny && s.x_min == first.x_min &&
                    s.x_max == first.x_max && s.y_min == first.y_min && s.y_max == first.y_max,
                "snapshot series grids do not match");
        if (k > 0)
            require(std::abs(snaps[k].t - snaps[k - 1].t - dt) < 1e-9,
                    "snapshot series spacing is not uniform");
    }
    return {std::move(snaps), dt, mask};
}

SnapshotSeries load_snapshot_series(const std::filesystem::path& dir, FieldMask mask) {
    std::vector<FieldSnapshot> snaps;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) snaps.push_back(read_snapshot(f));
    require(!snaps.empty(), "no snapshot files (*.csv) in " + dir.string());
    return make_series(std::move(snaps), mask);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> build_state_matrix(const SnapshotSeries& series) {
    const std::size_t m = series.snaps.size();
    require(m >= 2, "build_state_matrix: need at least two snapshots");
    const FieldSnapshot& first = series.snaps.front();
    const Eigen::Index cells = static_cast<Eigen::Index>(first.nx) * first.ny;
    const Eigen::Index height = cells * series.mask.count();

    Eigen::MatrixXd x(height, static_cast<Eigen::Index>(m - 1));
    Eigen::MatrixXd y(height, static_cast<Eigen::Index>(m - 1));
    auto fill_column = [&](Eigen::MatrixXd& mat, Eigen::Index col, const FieldSnapshot& s) {
        Eigen::Index row = 0;
        auto put = [&](const std::vector<double>& f) {
            for (Eigen::Index i = 0; i < cells; ++i) mat(row + i, col) = f[static_cast<std::size_t>(i)];
            row += cells;
        };
        if (series.mask.u) put(s.u);
        if (series.mask.v) put(s.v);
        if (series.mask.p) put(s.p);
    };
    for (std::size_t k = 0; k + 1 < m; ++k) {
        fill_column(x, static_cast<Eigen::Index>(k), series.snaps[k]);
        fill_column(y, static_cast<Eigen::Index>(k), series.snaps[k + 1]);
    }
    return {std::move(x), std::move(y)};
}

std::vector<DmdMode> dmd(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double dt,
                         const DmdOptions& options) {
    require(x.rows() == y.rows() && x.cols() == y.cols(), "dmd: X and Y must be congruent");
    require(x.cols() >= 1, "dmd: need at least one snapshot pair");
    require(options.energy_cutoff > 0.0 && options.energy_cutoff <= 1.0,
            "dmd: energy cutoff must lie in (0, 1]");
    require(dt > 0.0, "dmd: dt must be positive");

    Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    require(sigma.size() > 0 && sigma(0) > 0.0, "dmd: snapshot matrix has rank 0");

    // Relative floor first, then the cumulative-energy cutoff.
    Eigen::Index well = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > options.sv_floor * sigma(0)) ++well;
        else break;
    double total_energy = sigma.head(well).squaredNorm();
    Eigen::Index rank = 0;
    double cumulative = 0.0;
    for (Eigen::Index i = 0; i < well; ++i) {
        cumulative += sigma(i) * sigma(i);
        rank = i + 1;
        if (cumulative >= options.energy_cutoff * total_energy) break;
    }
    require(rank >= 1, "dmd: rank 0 after truncation");

    Eigen::MatrixXd u_r = svd.matrixU().leftCols(rank);
    Eigen::MatrixXd v_r = svd.matrixV().leftCols(rank);
    Eigen::VectorXd s_inv = sigma.head(rank).cwiseInverse();

    // Reduced operator and its eigenpairs.
    Eigen::MatrixXd yvs = y * (v_r * s_inv.asDiagonal());
    Eigen::MatrixXd a_tilde = u_r.transpose() * yvs;
    Eigen::EigenSolver<Eigen::MatrixXd> eig(a_tilde);
    if (eig.info() != Eigen::Success) throw numeric_error("dmd: eigensolve did not converge");

    Eigen::VectorXcd lambda = eig.eigenvalues();
    Eigen::MatrixXcd w = eig.eigenvectors();

    // Exact-DMD mode fields, with U w as the fallback for vanishing lambda.
    Eigen::MatrixXcd yvs_c = yvs.cast<std::complex<double>>();
    Eigen::MatrixXcd u_c = u_r.cast<std::complex<double>>();
    Eigen::MatrixXcd phi(x.rows(), rank);
    for (Eigen::Index j = 0; j < rank; ++j) {
        if (std::abs(lambda(j)) > 1e-14)
            phi.col(j) = (yvs_c * w.col(j)) / lambda(j);
        else
            phi.col(j) = u_c * w.col(j);
    }

    // Amplitudes: least-squares fit of the first snapshot onto the modes.
    Eigen::VectorXcd x0 = x.col(0).cast<std::complex<double>>();
    Eigen::VectorXcd b = phi.colPivHouseholderQr().solve(x0);

    std::vector<DmdMode> modes(static_cast<std::size_t>(rank));
    double strength_norm_sq = 0.0;
    for (Eigen::Index j = 0; j < rank; ++j) {
        DmdMode& mode = modes[static_cast<std::size_t>(j)];
        mode.lambda = lambda(j);
        mode.amplitude = b(j);
        mode.field = phi.col(j);
        double mag = std::abs(mode.lambda);
        mode.growth_rate = mag > 0.0 ? std::log(mag) / dt : -std::numeric_limits<double>::infinity();
        mode.frequency = std::arg(mode.lambda) / (2.0 * std::numbers::pi * dt);
        mode.strouhal = mode.frequency * options.diameter / options.velocity;
        mode.strength = std::abs(b(j)) * mode.field.norm();
        strength_norm_sq += mode.strength * mode.strength;
    }
    if (strength_norm_sq > 0.0) {
        double inv = 1.0 / std::sqrt(strength_norm_sq);
        for (DmdMode& mode : modes) mode.strength *= inv;
    }

    std::stable_sort(modes.begin(), modes.end(), [](const DmdMode& a, const DmdMode& b) {
        if (a.strength != b.strength) return a.strength > b.strength;
        double fa = std::abs(a.frequency), fb = std::abs(b.frequency);
        if (fa != fb) return fa < fb;
        return a.frequency > b.frequency;
    });
    return modes;
}

std::string_view to_string(ModeClass c) {
    switch (c) {
        case ModeClass::neutral: return "neutral";
        case ModeClass::damped: return "damped";
        case ModeClass::growing: return "growing";
    }
    return "?";
}

std::vector<LabeledMode> classify_modes(const std::vector<DmdMode>& modes, double radius_tol) {
    require(radius_tol > 0.0, "classify_modes: radius_tol must be positive");
    std::vector<LabeledMode> out;
    out.reserve(modes.size());
    for (const DmdMode& mode : modes) {
        double mag = std::abs(mode.lambda);
        ModeClass label = ModeClass::neutral;
        if (mag < 1.0 - radius_tol) label = ModeClass::damped;
        else if (mag > 1.0 + radius_tol) label = ModeClass::growing;
        out.push_back({mode, label});
    }
    std::stable_sort(out.begin(), out.end(), [](const LabeledMode& a, const LabeledMode& b) {
        if (a.label != b.label) return static_cast<int>(a.label) < static_cast<int>(b.label);
        return a.mode.strength > b.mode.strength;
    });
    return out;
}

void export_mode(const DmdMode& mode, const FieldMask& mask, const GridSpec& grid,
                 const std::filesystem::path& stem) {
    const Eigen::Index cells = static_cast<Eigen::Index>(grid.nx) * grid.ny;
    require(mode.field.size() == cells * mask.count(),
            "export_mode: mode length does not match grid and mask");

    auto unstack = [&](auto select) {
        FieldSnapshot snap;
        snap.t = 0.0;
        snap.nx = grid.nx;
        snap.ny = grid.ny;
        snap.x_min = grid.x_min;
        snap.x_max = grid.x_max;
        snap.y_min = grid.y_min;
        snap.y_max = grid.y_max;
        std::size_t n = static_cast<std::size_t>(cells);
        snap.u.assign(n, 0.0);
        snap.v.assign(n, 0.0);
        snap.p.assign(n, 0.0);
        Eigen::Index row = 0;
        auto take = [&](std::vector<double>& f) {
            for (Eigen::Index i = 0; i < cells; ++i)
                f[static_cast<std::size_t>(i)] = select(mode.field(row + i));
            row += cells;
        };
        if (mask.u) take(snap.u);
        if (mask.v) take(snap.v);
        if (mask.p) take(snap.p);
        return snap;
    };

    std::ostringstream tag;
    tag << "st=" << format_double(mode.strouhal) << " growth_rate=" << format_double(mode.growth_rate)
        << " strength=" << format_double(mode.strength);

    std::filesystem::path re_path = stem;
    re_path += "_re.csv";
    std::filesystem::path im_path = stem;
    im_path += "_im.csv";
    write_snapshot(unstack([](std::complex<double> z) { return z.real(); }), re_path,
                   tag.str() + " part=re");
    write_snapshot(unstack([](std::complex<double> z) { return z.imag(); }), im_path,
                   tag.str() + " part=im");
}

void write_mode_table(const std::vector<LabeledMode>& modes, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "index,re_lambda,im_lambda,growth_rate,frequency,strouhal,strength,class\n";
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const DmdMode& m = modes[i].mode;
        out << i << ',' << format_double(m.lambda.real()) << ',' << format_double(m.lambda.imag())
            << ',' << format_double(m.growth_rate) << ',' << format_double(m.frequency) << ','
            << format_double(m.strouhal) << ',' << format_double(m.strength) << ','
            << to_string(modes[i].label) << '\n';
    }
    write_file_atomic(path, out.str());
}

} // namespace pinnlab
