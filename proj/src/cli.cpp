#include "pinnlab/cli.hpp"

#include "pinnlab/config.hpp"
#include "pinnlab/synth.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

namespace pinnlab {

namespace {

std::string index_name(const std::string& stem, std::size_t idx, const std::string& ext) {
    std::ostringstream ss;
    ss << stem << std::setw(4) << std::setfill('0') << idx << ext;
    return ss.str();
}

struct CommonOpts {
    std::string config_path;
    std::string preset;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double scale = 0.0;
    bool scale_set = false;
    int precision = 0;
    int threads = 0;
    long iterations = -1;
    bool timing = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Run configuration JSON file");
    cmd->add_option("--preset", opts.preset, "Bundled case preset name");
    cmd->add_option("--out", opts.out, "Output directory (overrides the config)");
    cmd->add_option("--seed", opts.seed, "Master seed: network=seed, sampler=seed+1, shuffle=seed+2")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--scale", opts.scale, "Pool-size scale factor for desk runs")
        ->each([&](const std::string&) { opts.scale_set = true; });
    cmd->add_option("--precision", opts.precision, "Parameter precision (32 or 64)");
    cmd->add_option("--threads", opts.threads, "Worker threads for batch evaluation");
    cmd->add_option("--iterations", opts.iterations, "Override the configured iteration count");
    cmd->add_flag("--timing", opts.timing, "Record wall-clock seconds in the loss history");
}

RunConfig resolve_config(const CommonOpts& opts, const std::string& default_preset = {}) {
    RunConfig config;
    if (!opts.config_path.empty() && !opts.preset.empty())
        throw contract_error("pass either --config or --preset, not both");
    if (!opts.config_path.empty()) config = load_run_config(opts.config_path);
    else if (!opts.preset.empty()) config = preset_run_config(opts.preset);
    else if (!default_preset.empty()) config = preset_run_config(default_preset);
    else throw contract_error("a --config file or --preset name is required");

    if (opts.seed_set) {
        config.train.network.seed = opts.seed;
        config.train.sampler.seed = opts.seed + 1;
        config.train.shuffle_seed = opts.seed + 2;
    }
    if (opts.scale_set) config.train.sampler.scale = opts.scale;
    if (opts.precision) config.train.precision = parse_precision(opts.precision);
    if (opts.threads) config.train.threads = opts.threads;
    if (opts.iterations >= 0) config.train.iterations = opts.iterations;
    if (opts.timing) config.train.timing = true;
    if (!opts.out.empty()) config.output = opts.out;
    return config;
}

void echo_config(const RunConfig& config) {
    write_file_atomic(config.output / "config.json", config.raw);
}

std::vector<double> default_times(const DomainSpec& domain, int count) {
    std::vector<double> times;
    double span = domain.time_span.value_or(0.0);
    for (int i = 0; i < count; ++i)
        times.push_back(count > 1 ? span * i / (count - 1) : 0.0);
    return times;
}

// -------------------------------------------------------------------------
// train
// -------------------------------------------------------------------------

int cmd_train(const CommonOpts& opts, const std::string& resume) {
    RunConfig config = resolve_config(opts);
    config.train.out_dir = config.output;

    if (!resume.empty()) {
        LoadedCheckpoint ckpt = load_checkpoint(resume, config.train.precision);
        require(ckpt.meta.variant == std::string(to_string(config.train.variant)),
                "resume checkpoint variant does not match the configuration");
        config.train.start_iteration = ckpt.meta.iteration;
        config.train.initial_net = std::move(ckpt.net);
    }

    echo_config(config);
    TrainResult result = train(config.train, &std::cout);
    result.history.write_csv(config.output / "history.csv");
    std::cout << "trained to iteration " << result.final_iteration << ", final total loss "
              << result.final_loss << "\n";
    return 0;
}

// -------------------------------------------------------------------------
// verify-tgv
// -------------------------------------------------------------------------

int cmd_verify_tgv(const CommonOpts& opts, const std::string& checkpoint, bool analytic,
                   int grid_n, int n_times) {
    RunConfig config = resolve_config(opts, "tgv-desk");
    config.train.out_dir = config.output;
    echo_config(config);

    const DomainSpec& domain = config.train.domain;
    const FluidProps fluid = config.train.fluid;

    FieldJet field;
    if (analytic) {
        field = [fluid](const SpaceTime& pt) { return tgv_solution(pt, fluid); };
    } else if (!checkpoint.empty()) {
        field = field_from_net(
            std::make_shared<Mlp>(load_checkpoint(checkpoint, config.train.precision).net));
    } else {
        TrainResult result = train(config.train, &std::cout);
        result.history.write_csv(config.output / "history.csv");
        field = field_from_net(std::make_shared<Mlp>(std::move(result.net)));
    }

    GridSpec grid{grid_n, grid_n, domain.x_min, domain.x_max, domain.y_min, domain.y_max};
    std::vector<double> times = default_times(domain, n_times);

    auto component = [&](int c) {
        return ScalarField([field, c](const SpaceTime& pt) {
            OutputJet jet = field(pt);
            return c == 0 ? jet.u : (c == 1 ? jet.v : jet.p);
        });
    };
    auto reference = [&](int c) {
        return ScalarField([fluid, c](const SpaceTime& pt) {
            OutputJet jet = tgv_solution(pt, fluid);
            return c == 0 ? jet.u : (c == 1 ? jet.v : jet.p);
        });
    };

    std::ostringstream report;
    report << "field,l2_spacetime_error\n";
    const char* names[3] = {"u", "v", "p"};
    double errors[3];
    for (int c = 0; c < 3; ++c) {
        errors[c] = l2_spacetime_error(component(c), reference(c), grid, times);
        report << names[c] << ',' << format_double(errors[c]) << '\n';
    }
    write_file_atomic(config.output / "report.csv", report.str());
    for (int c = 0; c < 3; ++c)
        std::cout << names[c] << " L2 spatial-temporal error: " << errors[c] << "\n";
    return 0;
}

// -------------------------------------------------------------------------
// snapshots
// -------------------------------------------------------------------------

int cmd_snapshots(const CommonOpts& opts, const std::string& checkpoint,
                  std::vector<double> times, int nx, int ny, std::vector<double> bounds,
                  bool derived) {
    RunConfig config = resolve_config(opts);
    LoadedCheckpoint ckpt = load_checkpoint(checkpoint, config.train.precision);
    const DomainSpec& domain = config.train.domain;

    GridSpec grid;
    grid.nx = nx;
    grid.ny = ny;
    if (!bounds.empty()) {
        require(bounds.size() == 4, "--bounds takes xmin xmax ymin ymax");
        grid.x_min = bounds[0];
        grid.x_max = bounds[1];
        grid.y_min = bounds[2];
        grid.y_max = bounds[3];
    } else {
        grid.x_min = domain.x_min;
        grid.x_max = domain.x_max;
        grid.y_min = domain.y_min;
        grid.y_max = domain.y_max;
    }

    if (times.empty()) {
        require(!ckpt.net.unsteady(), "--times is required for unsteady checkpoints");
        times.push_back(0.0);
    }

    echo_config(config);
    FieldJet field = field_from_net(ckpt.net);
    for (std::size_t i = 0; i < times.size(); ++i) {
        FieldSnapshot snap = evaluate_snapshot(field, grid, times[i], derived);
        snap.t = times[i];
        write_snapshot(snap, config.output / index_name("snap_", i, ".csv"));
    }
    std::cout << "wrote " << times.size() << " snapshot(s) on a " << nx << "x" << ny
              << " grid\n";
    return 0;
}

// -------------------------------------------------------------------------
// diag
// -------------------------------------------------------------------------

int cmd_diag(const CommonOpts& opts, const std::string& checkpoint, std::vector<double> times,
             int n_surface) {
    RunConfig config = resolve_config(opts);
    LoadedCheckpoint ckpt = load_checkpoint(checkpoint, config.train.precision);
    const DomainSpec& domain = config.train.domain;
    require(domain.hole.has_value(), "diag: the configured domain has no cylinder");
    if (times.empty()) {
        require(!ckpt.net.unsteady(), "--times is required for unsteady checkpoints");
        times.push_back(0.0);
    }

    echo_config(config);
    FieldJet field = field_from_net(ckpt.net);

    std::ostringstream forces;
    forces << "t,cd,cd_pressure,cd_friction,cl\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        ForceCoefficients f =
            force_coefficients(field, domain, times[i], config.train.fluid, n_surface);
        forces << format_double(times[i]) << ',' << format_double(f.cd) << ','
               << format_double(f.cd_pressure) << ',' << format_double(f.cd_friction) << ','
               << format_double(f.cl) << '\n';

        auto sp = surface_pressure(field, domain, times[i], n_surface);
        std::ostringstream out;
        out << "# t=" << format_double(times[i])
            << " theta measured from the downstream (+x) stagnation point, counterclockwise,"
               " radians\n";
        out << "theta,p\n";
        for (const auto& [theta, p] : sp)
            out << format_double(theta) << ',' << format_double(p) << '\n';
        write_file_atomic(config.output / index_name("surface_pressure_", i, ".csv"), out.str());
    }
    write_file_atomic(config.output / "forces.csv", forces.str());
    std::cout << "wrote force table for " << times.size() << " time(s), " << n_surface
              << " surface points\n";
    return 0;
}

// -------------------------------------------------------------------------
// dmd
// -------------------------------------------------------------------------

int cmd_dmd(const std::string& snapshot_dir, const std::string& out, const std::string& mask_str,
            double cutoff, double radius_tol, int export_top, double diameter, double velocity) {
    FieldMask mask = parse_field_mask(mask_str);
    SnapshotSeries series = load_snapshot_series(snapshot_dir, mask);
    auto [x, y] = build_state_matrix(series);

    DmdOptions options;
    options.energy_cutoff = cutoff;
    options.diameter = diameter;
    options.velocity = velocity;
    std::vector<DmdMode> modes = dmd(x, y, series.dt, options);
    std::vector<LabeledMode> labeled = classify_modes(modes, radius_tol);
    write_mode_table(labeled, std::filesystem::path(out) / "modes.csv");

    GridSpec grid = series.snaps.front().grid();
    int exported = std::min<int>(export_top, static_cast<int>(labeled.size()));
    for (int i = 0; i < exported; ++i)
        export_mode(labeled[static_cast<std::size_t>(i)].mode, mask, grid,
                    std::filesystem::path(out) / index_name("mode_", static_cast<std::size_t>(i), ""));

    std::cout << series.snaps.size() << " snapshots -> " << modes.size() << " modes (dt "
              << series.dt << ", mask " << to_string(mask) << ")\n";
    std::size_t shown = std::min<std::size_t>(4, labeled.size());
    for (std::size_t i = 0; i < shown; ++i) {
        const DmdMode& m = labeled[i].mode;
        std::cout << "  St " << std::setw(8) << m.strouhal << "  strength " << std::setw(8)
                  << m.strength << "  growth " << m.growth_rate << "  "
                  << to_string(labeled[i].label) << "\n";
    }
    return 0;
}

// -------------------------------------------------------------------------
// synth
// -------------------------------------------------------------------------

int cmd_synth(const std::string& out, const SynthSpec& spec) {
    std::vector<FieldSnapshot> snaps = synth_snapshots(spec);
    for (std::size_t i = 0; i < snaps.size(); ++i)
        write_snapshot(snaps[i], std::filesystem::path(out) / index_name("snap_", i, ".csv"));
    std::cout << "wrote " << snaps.size() << " synthetic snapshots (St " << spec.strouhal << ", "
              << spec.harmonics << " harmonics)\n";
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> storage = args;
    std::vector<char*> argv;
    argv.reserve(storage.size());
    for (std::string& s : storage) argv.push_back(s.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Physics-informed Navier-Stokes surrogate laboratory"};
    app.require_subcommand(1);

    CommonOpts train_opts;
    std::string resume;
    CLI::App* train_cmd = app.add_subcommand("train", "Optimize a surrogate per configuration");
    add_common(train_cmd, train_opts);
    train_cmd->add_option("--resume", resume, "Continue from a checkpoint file");

    CommonOpts verify_opts;
    std::string verify_checkpoint;
    bool verify_analytic = false;
    int verify_grid = 64;
    int verify_ntimes = 11;
    CLI::App* verify_cmd =
        app.add_subcommand("verify-tgv", "Train (or load) and report analytic-solution errors");
    add_common(verify_cmd, verify_opts);
    verify_cmd->add_option("--checkpoint", verify_checkpoint, "Evaluate this checkpoint instead");
    verify_cmd->add_flag("--analytic", verify_analytic,
                         "Bypass the network and evaluate the analytic solution");
    verify_cmd->add_option("--grid", verify_grid, "Evaluation grid size per side");
    verify_cmd->add_option("--ntimes", verify_ntimes, "Number of evaluation times over [0, T]");

    CommonOpts snap_opts;
    std::string snap_checkpoint;
    std::vector<double> snap_times, snap_bounds;
    int snap_nx = 64, snap_ny = 64;
    bool snap_derived = false;
    CLI::App* snap_cmd = app.add_subcommand("snapshots", "Evaluate checkpoint fields on a grid");
    add_common(snap_cmd, snap_opts);
    snap_cmd->add_option("--checkpoint", snap_checkpoint, "Checkpoint to evaluate")->required();
    snap_cmd->add_option("--times", snap_times, "Snapshot times");
    snap_cmd->add_option("--nx", snap_nx, "Grid cells in x");
    snap_cmd->add_option("--ny", snap_ny, "Grid cells in y");
    snap_cmd->add_option("--bounds", snap_bounds, "xmin xmax ymin ymax (default: domain)");
    snap_cmd->add_flag("--derived", snap_derived, "Also write vorticity and Q-criterion");

    CommonOpts diag_opts;
    std::string diag_checkpoint;
    std::vector<double> diag_times;
    int diag_surface = 512;
    CLI::App* diag_cmd =
        app.add_subcommand("diag", "Force coefficients and surface pressure tables");
    add_common(diag_cmd, diag_opts);
    diag_cmd->add_option("--checkpoint", diag_checkpoint, "Checkpoint to evaluate")->required();
    diag_cmd->add_option("--times", diag_times, "Evaluation times");
    diag_cmd->add_option("--surface-n", diag_surface, "Cylinder-surface quadrature points");

    std::string dmd_dir, dmd_out = "out", dmd_mask = "uv";
    double dmd_cutoff = 1.0, dmd_radius_tol = 1e-3, dmd_diameter = 1.0, dmd_velocity = 1.0;
    int dmd_top = 4;
    CLI::App* dmd_cmd =
        app.add_subcommand("dmd", "Dynamic mode decomposition of a snapshot directory");
    dmd_cmd->add_option("--snapshots", dmd_dir, "Directory of snapshot CSV files")->required();
    dmd_cmd->add_option("--out", dmd_out, "Output directory");
    dmd_cmd->add_option("--mask", dmd_mask, "Fields stacked into state vectors (subset of uvp)");
    dmd_cmd->add_option("--cutoff", dmd_cutoff, "Cumulative singular-value energy kept, (0, 1]");
    dmd_cmd->add_option("--radius-tol", dmd_radius_tol, "Neutral band around the unit circle");
    dmd_cmd->add_option("--export-top", dmd_top, "Export fields of the strongest N modes");
    dmd_cmd->add_option("--diameter", dmd_diameter, "Reference length for Strouhal numbers");
    dmd_cmd->add_option("--velocity", dmd_velocity, "Reference speed for Strouhal numbers");

    std::string synth_out = "out";
    SynthSpec synth_spec;
    std::vector<double> synth_bounds;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Generate synthetic limit-cycle snapshots");
    synth_cmd->add_option("--out", synth_out, "Output directory");
    synth_cmd->add_option("--nx", synth_spec.grid.nx, "Grid cells in x");
    synth_cmd->add_option("--ny", synth_spec.grid.ny, "Grid cells in y");
    synth_cmd->add_option("--bounds", synth_bounds, "xmin xmax ymin ymax");
    synth_cmd->add_option("--dt", synth_spec.dt, "Snapshot spacing");
    synth_cmd->add_option("--count", synth_spec.count, "Number of snapshots");
    synth_cmd->add_option("--t0", synth_spec.t0, "Time of the first snapshot");
    synth_cmd->add_option("--st", synth_spec.strouhal, "Fundamental Strouhal number");
    synth_cmd->add_option("--harmonics", synth_spec.harmonics, "Number of harmonics");
    synth_cmd->add_option("--amplitude", synth_spec.amplitude, "Fundamental amplitude");
    synth_cmd->add_option("--decay", synth_spec.decay, "Amplitude ratio between harmonics");
    synth_cmd->add_option("--mean", synth_spec.mean_u, "Uniform mean streamwise velocity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (train_cmd->parsed()) return cmd_train(train_opts, resume);
        if (verify_cmd->parsed())
            return cmd_verify_tgv(verify_opts, verify_checkpoint, verify_analytic, verify_grid,
                                  verify_ntimes);
        if (snap_cmd->parsed())
            return cmd_snapshots(snap_opts, snap_checkpoint, snap_times, snap_nx, snap_ny,
                                 snap_bounds, snap_derived);
        if (diag_cmd->parsed())
            return cmd_diag(diag_opts, diag_checkpoint, diag_times, diag_surface);
        if (dmd_cmd->parsed())
            return cmd_dmd(dmd_dir, dmd_out, dmd_mask, dmd_cutoff, dmd_radius_tol, dmd_top,
                           dmd_diameter, dmd_velocity);
        if (synth_cmd->parsed()) {
            if (!synth_bounds.empty()) {
                require(synth_bounds.size() == 4, "--bounds takes xmin xmax ymin ymax");
                synth_spec.grid.x_min = synth_bounds[0];
                synth_spec.grid.x_max = synth_bounds[1];
                synth_spec.grid.y_min = synth_bounds[2];
                synth_spec.grid.y_max = synth_bounds[3];
            }
            return cmd_synth(synth_out, synth_spec);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace pinnlab
