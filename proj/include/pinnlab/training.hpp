#pragma once

#include "pinnlab/koopman.hpp"
#include "pinnlab/loss.hpp"
#include "pinnlab/sampling.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <optional>

namespace pinnlab {

// ---------------------------------------------------------------------------
// Optimizer
// ---------------------------------------------------------------------------

struct AdamParams {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// First/second-moment accumulators, shape-congruent with the parameters.
struct AdamState {
    std::vector<Layer> m, v;
    long iteration = 0;
    AdamParams params;

    static AdamState fresh(const Mlp& net, const AdamParams& params);
};

/// Standard Adam update with bias correction:
///   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2
///   theta <- theta - eta (m / (1-b1^i)) / (sqrt(v / (1-b2^i)) + eps)
void adam_step(AdamState& state, std::vector<Layer>& theta, const ParamGradient& grad,
               double eta);

// ---------------------------------------------------------------------------
// Learning-rate schedules
// ---------------------------------------------------------------------------

/// eta0 * gamma^i.
double lr_exponential(long i, double gamma, double eta0);

/// eta0 * base^(i/period) -- the "decay to `base` every `period` steps"
/// parameterization; lr_exponential(period, base, period, eta0) is exactly
/// base * eta0.
double lr_exponential(long i, double base, double period, double eta0);

/// Triangular wave of half-period n_c between eta_low and a geometrically
/// decaying peak:
///   eta = eta_low + (eta_high - eta_low) * tri(i) * gamma^i
///   tri(i) = max(0, 1 - |i/n_c - 2 floor(i/(2 n_c)) - 1|)
double lr_cyclical(long i, double eta_low, double eta_high, long n_c, double gamma);

struct LrSchedule {
    enum class Kind { exponential, cyclical };
    Kind kind = Kind::exponential;

    double eta0 = 1.5e-3;
    double gamma = 1.0;
    // Optional (base, period) form of the exponential decay, evaluated as
    // base^(i/period) so that whole periods are exact powers of base.
    std::optional<std::pair<double, double>> gamma_base_period;

    double eta_low = 1.5e-5;
    double eta_high = 1.5e-3;
    long n_c = 5000;

    static LrSchedule exponential(double eta0, double gamma);
    static LrSchedule exponential_base(double eta0, double base, double period);
    static LrSchedule cyclical(double eta_low, double eta_high, long n_c, double gamma);

    void validate() const;
    double at(long iteration) const;
};

// ---------------------------------------------------------------------------
// Train loop
// ---------------------------------------------------------------------------

enum class Variant { steady, unsteady, data_driven };

Variant parse_variant(std::string_view name);
std::string_view to_string(Variant v);

struct NetworkSpec {
    int hidden_layers = 3;
    int neurons = 64;
    Activation activation = Activation::silu;
    std::uint64_t seed = 42;
    bool literal_output_activation = false;
};

/// Per-role pool and batch sizes. Pool sizes are the nominal (full-scale)
/// values; `scale` shrinks them for desk runs.
struct SamplerSpec {
    std::size_t interior_pool = 81920;
    std::size_t boundary_pool = 8192;  // per segment
    std::size_t initial_pool = 8192;
    std::size_t interior_batch = 2048;
    std::size_t boundary_batch = 512;  // per segment
    std::size_t initial_batch = 512;
    std::size_t data_batch = 0;
    double scale = 1.0;
    std::uint64_t seed = 7;

    std::size_t scaled(std::size_t pool) const;
};

struct GaugePin {
    SpaceTime point;
    double pressure = 0.0;
};

struct Conditions {
    std::map<Segment, ConditionSpec> boundary;
    std::optional<ConditionSpec> initial;   // kind = initial
    std::optional<GaugePin> pressure_pin;   // off by default
};

struct DataSpec {
    std::filesystem::path snapshot_dir;
    double t_begin = 0.0;
    double t_end = 0.0;
};

struct TrainConfig {
    Variant variant = Variant::unsteady;
    DomainSpec domain;
    FluidProps fluid;
    NetworkSpec network;
    SamplerSpec sampler;
    AdamParams adam;
    LrSchedule schedule;
    Conditions conditions;
    std::optional<DataSpec> data;
    TermArray weights = unit_weights();
    Precision precision = Precision::f64;

    long iterations = 0;
    long log_every = 100;
    long checkpoint_every = 0;            // 0 = only the final checkpoint
    std::uint64_t shuffle_seed = 3;
    int threads = 1;
    bool timing = false;                  // wall-clock column is opt-in so
                                          // output bytes stay reproducible
    std::optional<std::filesystem::path> out_dir; // checkpoints, if set

    /// Resume support: continue from this network/iteration instead of a
    /// fresh initialization.
    std::optional<Mlp> initial_net;
    long start_iteration = 0;
};

struct HistoryRow {
    long iteration = 0;
    TermArray terms{};
    double total = 0.0;
    double lr = 0.0;
    double elapsed_s = 0.0;
};

struct LossHistory {
    std::vector<HistoryRow> rows;

    /// CSV with header iter,L1,...,L10,total,lr,elapsed_s.
    void write_csv(const std::filesystem::path& path) const;
};

struct TrainResult {
    Mlp net;
    LossHistory history;
    long final_iteration = 0;
    double final_loss = 0.0;
};

/// Runs sample -> jet -> residual -> aggregate -> gradient -> adam for the
/// configured number of iterations; fully reproducible per seeds. On
/// numeric blow-up the last-good checkpoint is saved (when out_dir is set)
/// and a numeric_error reporting the iteration is thrown.
TrainResult train(const TrainConfig& config, std::ostream* progress = nullptr);

/// The training batches (roles, specs, targets) for one iteration, exposed
/// for tests that need to recompute the loss the loop saw.
class BatchAssembler {
public:
    BatchAssembler(const TrainConfig& config, const Mlp& net);

    ResidualBatch next();
    const PointPool& pool() const { return pool_; }
    bool steady_residuals() const { return steady_; }

private:
    const TrainConfig& config_;
    bool steady_;
    PointPool pool_;
    std::vector<std::array<double, 3>> data_targets_;
    std::vector<SpaceTime> data_points_;
    EpochShuffler interior_stream_;
    std::map<Segment, EpochShuffler> boundary_streams_;
    EpochShuffler initial_stream_;
    EpochShuffler data_stream_;
    bool has_initial_ = false;
    bool has_data_ = false;
};

} // namespace pinnlab
