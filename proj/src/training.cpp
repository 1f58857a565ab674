#include "pinnlab/training.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

namespace pinnlab {

// ---------------------------------------------------------------------------
// Adam
// ---------------------------------------------------------------------------

AdamState AdamState::fresh(const Mlp& net, const AdamParams& params) {
    AdamState state;
    state.params = params;
    state.m = zero_gradient(net);
    state.v = zero_gradient(net);
    return state;
}

void adam_step(AdamState& state, std::vector<Layer>& theta, const ParamGradient& grad,
               double eta) {
    require(theta.size() == grad.size() && theta.size() == state.m.size(),
            "adam_step: parameter/gradient shapes are not congruent");
    for (std::size_t k = 0; k < theta.size(); ++k) {
        require(theta[k].W.rows() == grad[k].W.rows() && theta[k].W.cols() == grad[k].W.cols() &&
                    theta[k].b.size() == grad[k].b.size(),
                "adam_step: layer " + std::to_string(k) + " shape mismatch");
        if (!grad[k].W.allFinite() || !grad[k].b.allFinite())
            throw numeric_error("adam_step: non-finite gradient at iteration " +
                                std::to_string(state.iteration + 1));
    }

    state.iteration += 1;
    const double b1 = state.params.beta1;
    const double b2 = state.params.beta2;
    const double eps = state.params.eps;
    const double bias1 = 1.0 - std::pow(b1, static_cast<double>(state.iteration));
    const double bias2 = 1.0 - std::pow(b2, static_cast<double>(state.iteration));

    auto update = [&](auto& th, const auto& g, auto& m, auto& v) {
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
        th.array() -= eta * (m.array() / bias1) / ((v.array() / bias2).sqrt() + eps);
    };
    for (std::size_t k = 0; k < theta.size(); ++k) {
        update(theta[k].W, grad[k].W, state.m[k].W, state.v[k].W);
        update(theta[k].b, grad[k].b, state.m[k].b, state.v[k].b);
    }
}

// ---------------------------------------------------------------------------
// Learning-rate schedules
// ---------------------------------------------------------------------------

double lr_exponential(long i, double gamma, double eta0) {
    require(i >= 0, "lr_exponential: iteration must be non-negative");
    return eta0 * std::pow(gamma, static_cast<double>(i));
}

double lr_exponential(long i, double base, double period, double eta0) {
    require(i >= 0, "lr_exponential: iteration must be non-negative");
    require(period > 0.0, "lr_exponential: period must be positive");
    return eta0 * std::pow(base, static_cast<double>(i) / period);
}

double lr_cyclical(long i, double eta_low, double eta_high, long n_c, double gamma) {
    require(i >= 0, "lr_cyclical: iteration must be non-negative");
    require(n_c >= 1, "lr_cyclical: n_c must be >= 1");
    double x = static_cast<double>(i) / static_cast<double>(n_c);
    double cycle = std::floor(static_cast<double>(i) / (2.0 * static_cast<double>(n_c)));
    double tri = std::max(0.0, 1.0 - std::abs(x - 2.0 * cycle - 1.0));
    return eta_low + (eta_high - eta_low) * tri * std::pow(gamma, static_cast<double>(i));
}

LrSchedule LrSchedule::exponential(double eta0, double gamma) {
    LrSchedule s;
    s.kind = Kind::exponential;
    s.eta0 = eta0;
    s.gamma = gamma;
    s.validate();
    return s;
}

LrSchedule LrSchedule::exponential_base(double eta0, double base, double period) {
    LrSchedule s;
    s.kind = Kind::exponential;
    s.eta0 = eta0;
    s.gamma = base; // evaluated through the (base, period) form
    s.gamma_base_period = {base, period};
    s.validate();
    return s;
}

LrSchedule LrSchedule::cyclical(double eta_low, double eta_high, long n_c, double gamma) {
    LrSchedule s;
    s.kind = Kind::cyclical;
    s.eta_low = eta_low;
    s.eta_high = eta_high;
    s.n_c = n_c;
    s.gamma = gamma;
    s.validate();
    return s;
}

void LrSchedule::validate() const {
    require(gamma > 0.0 && gamma <= 1.0, "schedule: gamma must lie in (0, 1]");
    if (kind == Kind::exponential) {
        require(eta0 > 0.0, "schedule: eta0 must be positive");
        if (gamma_base_period) require(gamma_base_period->second >= 1.0,
                                       "schedule: gamma period must be >= 1");
    } else {
        require(eta_low > 0.0 && eta_high > 0.0, "schedule: rates must be positive");
        require(eta_low <= eta_high, "schedule: eta_low must not exceed eta_high");
        require(n_c >= 1, "schedule: n_c must be >= 1");
    }
}

double LrSchedule::at(long iteration) const {
    if (kind == Kind::exponential) {
        if (gamma_base_period)
            return lr_exponential(iteration, gamma_base_period->first, gamma_base_period->second,
                                  eta0);
        return lr_exponential(iteration, gamma, eta0);
    }
    return lr_cyclical(iteration, eta_low, eta_high, n_c, gamma);
}

// ---------------------------------------------------------------------------
// Variants and batch assembly
// ---------------------------------------------------------------------------

Variant parse_variant(std::string_view name) {
    if (name == "steady") return Variant::steady;
    if (name == "unsteady") return Variant::unsteady;
    if (name == "data-driven") return Variant::data_driven;
    throw contract_error("unknown variant: " + std::string(name));
}

std::string_view to_string(Variant v) {
    switch (v) {
        case Variant::steady: return "steady";
        case Variant::unsteady: return "unsteady";
        case Variant::data_driven: return "data-driven";
    }
    return "?";
}

std::size_t SamplerSpec::scaled(std::size_t pool) const {
    require(scale > 0.0, "sampler: scale must be positive");
    auto n = static_cast<std::size_t>(std::llround(static_cast<double>(pool) * scale));
    return std::max<std::size_t>(1, n);
}

namespace {

Role role_for_kind(ConditionKind kind) {
    switch (kind) {
        case ConditionKind::dirichlet: return Role::dirichlet;
        case ConditionKind::neumann: return Role::neumann;
        case ConditionKind::convective: return Role::convective;
        default: throw contract_error("boundary condition must be dirichlet/neumann/convective");
    }
}

std::uint64_t role_seed(std::uint64_t base, std::uint64_t salt) {
    return base * 0x9e3779b97f4a7c15ull + salt;
}

} // namespace

BatchAssembler::BatchAssembler(const TrainConfig& config, const Mlp& net)
    : config_(config), steady_(config.variant == Variant::steady) {
    config.domain.validate();
    require(net.unsteady() == (config.variant != Variant::steady),
            "train: network dimensionality does not match the variant");
    if (config.variant == Variant::steady)
        require(config.domain.steady(), "train: steady variant requires a domain without time");
    else
        require(!config.domain.steady(), "train: unsteady variant requires a time span");

    const SamplerSpec& sampler = config.sampler;
    std::optional<std::pair<double, double>> pde_window;
    if (config.variant == Variant::data_driven) {
        require(config.data.has_value(), "train: data-driven variant requires a data source");
        require(config.data->t_begin >= 0.0 && config.data->t_end <= *config.domain.time_span &&
                    config.data->t_begin < config.data->t_end,
                "train: data window must lie inside the domain time span");
        // PDE/BC points are drawn only at and after the data window start.
        pde_window = {{config.data->t_begin, *config.domain.time_span}};
    }

    std::size_t interior_n = sampler.scaled(sampler.interior_pool);
    require(sampler.interior_batch >= 1 && sampler.interior_batch <= interior_n,
            "sampler: interior batch must fit in the scaled pool");
    pool_.seed = sampler.seed;
    pool_.interior = sample_interior(config.domain, interior_n, role_seed(sampler.seed, 1),
                                     pde_window);
    interior_stream_ =
        EpochShuffler(interior_n, sampler.interior_batch, role_seed(config.shuffle_seed, 1));

    std::uint64_t salt = 10;
    for (const auto& [segment, spec] : config.conditions.boundary) {
        (void)spec;
        std::size_t n = sampler.scaled(sampler.boundary_pool);
        require(sampler.boundary_batch >= 1 && sampler.boundary_batch <= n,
                "sampler: boundary batch must fit in the scaled pool");
        pool_.boundary[segment] =
            sample_boundary(config.domain, segment, n, role_seed(sampler.seed, salt), pde_window);
        boundary_streams_.emplace(
            segment, EpochShuffler(n, sampler.boundary_batch, role_seed(config.shuffle_seed, salt)));
        ++salt;
    }

    has_initial_ = config.variant == Variant::unsteady && config.conditions.initial.has_value();
    if (has_initial_) {
        std::size_t n = sampler.scaled(sampler.initial_pool);
        require(sampler.initial_batch >= 1 && sampler.initial_batch <= n,
                "sampler: initial batch must fit in the scaled pool");
        pool_.initial =
            sample_boundary(config.domain, Segment::initial, n, role_seed(sampler.seed, 2));
        initial_stream_ =
            EpochShuffler(n, sampler.initial_batch, role_seed(config.shuffle_seed, 2));
    }

    has_data_ = config.variant == Variant::data_driven;
    if (has_data_) {
        SnapshotSeries series =
            load_snapshot_series(config.data->snapshot_dir, FieldMask{true, true, true});
        for (const FieldSnapshot& snap : series.snaps) {
            if (snap.t < config.data->t_begin - 1e-9 || snap.t > config.data->t_end + 1e-9)
                continue;
            GridSpec grid = snap.grid();
            for (int j = 0; j < snap.ny; ++j) {
                for (int i = 0; i < snap.nx; ++i) {
                    std::size_t idx = static_cast<std::size_t>(j) * snap.nx + i;
                    data_points_.push_back({grid.cell_x(i), grid.cell_y(j), snap.t});
                    data_targets_.push_back({snap.u[idx], snap.v[idx], snap.p[idx]});
                }
            }
        }
        require(!data_points_.empty(), "train: no snapshots inside the data window");
        if (sampler.scale < 1.0) {
            // Deterministic subsample: shuffled prefix of the full data pool.
            std::size_t keep = std::max<std::size_t>(
                sampler.data_batch,
                static_cast<std::size_t>(std::llround(
                    static_cast<double>(data_points_.size()) * sampler.scale)));
            keep = std::min(keep, data_points_.size());
            std::vector<std::size_t> order(data_points_.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            Rng rng(role_seed(sampler.seed, 3));
            rng.shuffle(order);
            std::vector<SpaceTime> pts;
            std::vector<std::array<double, 3>> tgt;
            pts.reserve(keep);
            tgt.reserve(keep);
            for (std::size_t i = 0; i < keep; ++i) {
                pts.push_back(data_points_[order[i]]);
                tgt.push_back(data_targets_[order[i]]);
            }
            data_points_ = std::move(pts);
            data_targets_ = std::move(tgt);
        }
        require(sampler.data_batch >= 1 && sampler.data_batch <= data_points_.size(),
                "sampler: data batch must fit in the data pool");
        data_stream_ =
            EpochShuffler(data_points_.size(), sampler.data_batch, role_seed(config.shuffle_seed, 3));
    }
}

ResidualBatch BatchAssembler::next() {
    ResidualBatch batch;
    batch.fluid = config_.fluid;
    batch.steady = steady_;

    RoleSlice interior;
    interior.role = Role::interior;
    for (std::size_t idx : interior_stream_.next()) interior.points.push_back(pool_.interior[idx]);
    batch.slices.push_back(std::move(interior));

    if (has_initial_) {
        RoleSlice ic;
        ic.role = Role::initial;
        ic.spec = *config_.conditions.initial;
        for (std::size_t idx : initial_stream_.next()) ic.points.push_back(pool_.initial[idx]);
        batch.slices.push_back(std::move(ic));
    }

    if (has_data_) {
        RoleSlice data;
        data.role = Role::data;
        for (std::size_t idx : data_stream_.next()) {
            data.points.push_back(data_points_[idx]);
            data.targets.push_back(data_targets_[idx]);
        }
        batch.slices.push_back(std::move(data));
    }

    for (auto& [segment, stream] : boundary_streams_) {
        const ConditionSpec& spec = config_.conditions.boundary.at(segment);
        RoleSlice slice;
        slice.role = role_for_kind(spec.kind);
        slice.spec = spec;
        const auto& points = pool_.boundary.at(segment);
        for (std::size_t idx : stream.next()) slice.points.push_back(points[idx]);
        batch.slices.push_back(std::move(slice));
    }

    if (config_.conditions.pressure_pin) {
        RoleSlice pin;
        pin.role = Role::pressure_pin;
        pin.spec.kind = ConditionKind::initial;
        pin.spec.p = TargetField::constant(config_.conditions.pressure_pin->pressure);
        pin.points.push_back(config_.conditions.pressure_pin->point);
        batch.slices.push_back(std::move(pin));
    }
    return batch;
}

// ---------------------------------------------------------------------------
// Train loop
// ---------------------------------------------------------------------------

void LossHistory::write_csv(const std::filesystem::path& path) const {
    std::ostringstream out;
    out << "iter";
    for (int t = 1; t <= loss_term_count; ++t) out << ",L" << t;
    out << ",total,lr,elapsed_s\n";
    for (const HistoryRow& row : rows) {
        out << row.iteration;
        for (double term : row.terms) out << ',' << format_double(term);
        out << ',' << format_double(row.total) << ',' << format_double(row.lr) << ','
            << format_double(row.elapsed_s) << '\n';
    }
    write_file_atomic(path, out.str());
}

namespace {

void save_train_checkpoint(const TrainConfig& config, const Mlp& net, long iteration,
                           double loss, const std::string& name = {}) {
    if (!config.out_dir) return;
    CheckpointMeta meta;
    meta.variant = std::string(to_string(config.variant));
    meta.iteration = iteration;
    meta.loss = loss;
    std::string file = name.empty() ? "ckpt_" + std::to_string(iteration) + ".json" : name;
    save_checkpoint(net, meta, *config.out_dir / file);
}

} // namespace

TrainResult train(const TrainConfig& config, std::ostream* progress) {
    require(config.iterations >= 0, "train: iterations must be non-negative");
    config.schedule.validate();

    Mlp net = config.initial_net
                  ? *config.initial_net
                  : make_mlp(config.network.hidden_layers, config.network.neurons,
                             config.network.activation, config.network.seed,
                             config.variant != Variant::steady, config.precision,
                             config.network.literal_output_activation);

    TrainResult result{net, {}, config.start_iteration, 0.0};
    if (config.iterations <= config.start_iteration) {
        save_train_checkpoint(config, net, config.start_iteration, 0.0);
        result.net = std::move(net);
        return result;
    }

    BatchAssembler assembler(config, net);
    AdamState adam = AdamState::fresh(net, config.adam);
    adam.iteration = config.start_iteration;

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        if (!config.timing) return 0.0;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    const long progress_every =
        std::max<long>(1, (config.iterations - config.start_iteration) / 20);
    double last_loss = 0.0;

    for (long iter = config.start_iteration + 1; iter <= config.iterations; ++iter) {
        ResidualBatch batch = assembler.next();
        double eta = config.schedule.at(iter - 1);

        LossGradient lg;
        try {
            lg = loss_gradient(net, batch, config.weights, config.threads);
            if (!std::isfinite(lg.loss.total))
                throw numeric_error("non-finite loss");
            adam_step(adam, net.mutable_layers(), lg.grad, eta);
        } catch (const numeric_error& e) {
            // theta is still the last-good state: adam_step validates the
            // gradient before touching the parameters.
            save_train_checkpoint(config, net, iter - 1, last_loss, "ckpt_lastgood.json");
            throw numeric_error("training blew up at iteration " + std::to_string(iter) + ": " +
                                e.what());
        }
        net.enforce_precision();
        last_loss = lg.loss.total;

        if ((iter - config.start_iteration) % config.log_every == 0 ||
            iter == config.iterations) {
            HistoryRow row;
            row.iteration = iter;
            row.terms = lg.loss.terms;
            row.total = lg.loss.total;
            row.lr = eta;
            row.elapsed_s = elapsed();
            result.history.rows.push_back(row);
        }
        if (config.checkpoint_every > 0 &&
            (iter - config.start_iteration) % config.checkpoint_every == 0 &&
            iter != config.iterations)
            save_train_checkpoint(config, net, iter, lg.loss.total);

        if (progress && (iter - config.start_iteration) % progress_every == 0)
            (*progress) << "iter " << iter << "  total " << lg.loss.total << "  lr " << eta
                        << "\n";
    }

    save_train_checkpoint(config, net, config.iterations, last_loss);
    result.net = std::move(net);
    result.final_iteration = config.iterations;
    result.final_loss = last_loss;
    return result;
}

} // namespace pinnlab
