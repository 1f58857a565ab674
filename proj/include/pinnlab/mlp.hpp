#pragma once

#include "pinnlab/activation.hpp"
#include "pinnlab/common.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace pinnlab {

enum class Precision { f32, f64 };

Precision parse_precision(int bits);
int precision_bits(Precision p);

/// One affine map of the network: z = W h + b, with W of shape
/// (output width x input width).
struct Layer {
    Eigen::MatrixXd W;
    Eigen::VectorXd b;
};

/// A point in the computational domain. Steady problems carry no time
/// coordinate; the optional makes the dimensionality explicit at the API
/// boundary instead of smuggling a dummy t through.
struct SpaceTime {
    double x = 0.0;
    double y = 0.0;
    std::optional<double> t;
};

/// The MLP surrogate mapping (x, y[, t]) to (u, v, p). Parameters are held
/// in 64-bit storage; with Precision::f32 every parameter is kept on the
/// float32 grid (quantized at construction and after each optimizer step)
/// so checkpoints round-trip exactly at the declared precision.
class Mlp {
public:
    Mlp(std::vector<Layer> layers, Activation activation, bool unsteady,
        Precision precision = Precision::f64, bool literal_output_activation = false,
        std::uint64_t seed = 0);

    int input_width() const { return static_cast<int>(layers_.front().W.cols()); }
    int output_width() const { return static_cast<int>(layers_.back().W.rows()); }
    int hidden_layer_count() const { return static_cast<int>(layers_.size()) - 1; }
    bool unsteady() const { return unsteady_; }
    Activation activation() const { return activation_; }
    Precision precision() const { return precision_; }
    bool literal_output_activation() const { return literal_output_activation_; }
    std::uint64_t seed() const { return seed_; }

    const std::vector<Layer>& layers() const { return layers_; }
    /// Optimizer access; callers must re-quantize via enforce_precision()
    /// after mutating when precision is f32.
    std::vector<Layer>& mutable_layers() { return layers_; }

    std::size_t parameter_count() const;
    void enforce_precision();

    /// Plain evaluation, (u, v, p) at one point. Bit-identical to the value
    /// entries of jet_eval by construction (same arithmetic path).
    std::array<double, 3> forward(const SpaceTime& point) const;

private:
    std::vector<Layer> layers_;
    Activation activation_;
    bool unsteady_;
    Precision precision_;
    bool literal_output_activation_;
    std::uint64_t seed_;
};

/// Build a surrogate with `hidden_layers` hidden layers of `neurons` units,
/// Glorot-uniform weights (entries in [-s, s], s = sqrt(6/(fan_in+fan_out)))
/// and zero biases, reproducible from the seed.
Mlp make_mlp(int hidden_layers, int neurons, Activation activation, std::uint64_t seed,
             bool unsteady, Precision precision = Precision::f64,
             bool literal_output_activation = false);

struct CheckpointMeta {
    std::string variant = "unsteady";
    long iteration = 0;
    double loss = 0.0;
};

void save_checkpoint(const Mlp& net, const CheckpointMeta& meta,
                     const std::filesystem::path& path);

struct LoadedCheckpoint {
    Mlp net;
    CheckpointMeta meta;
};

/// Round-trips the parameters losslessly at the stored precision. A 32-bit
/// checkpoint loaded with precision_override f64 widens every value exactly.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path,
                                 std::optional<Precision> precision_override = {});

} // namespace pinnlab
