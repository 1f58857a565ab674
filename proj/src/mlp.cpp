#include "pinnlab/mlp.hpp"

#include "pinnlab/jet.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace pinnlab {

using nlohmann::json;

Precision parse_precision(int bits) {
    if (bits == 32) return Precision::f32;
    if (bits == 64) return Precision::f64;
    throw contract_error("precision must be 32 or 64");
}

int precision_bits(Precision p) {
    return p == Precision::f32 ? 32 : 64;
}

Mlp::Mlp(std::vector<Layer> layers, Activation activation, bool unsteady,
         Precision precision, bool literal_output_activation, std::uint64_t seed)
    : layers_(std::move(layers)),
      activation_(activation),
      unsteady_(unsteady),
      precision_(precision),
      literal_output_activation_(literal_output_activation),
      seed_(seed) {
    require(!layers_.empty(), "Mlp: at least one affine layer required");
    int expected_in = unsteady_ ? 3 : 2;
    require(layers_.front().W.cols() == expected_in,
            "Mlp: input width must be " + std::to_string(expected_in));
    require(layers_.back().W.rows() == 3, "Mlp: output width must be 3 (u, v, p)");
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        const Layer& l = layers_[k];
        require(l.b.size() == l.W.rows(), "Mlp: bias size mismatch in layer " + std::to_string(k));
        if (k > 0) {
            require(l.W.cols() == layers_[k - 1].W.rows(),
                    "Mlp: layer " + std::to_string(k) + " width does not chain");
        }
        require(l.W.allFinite() && l.b.allFinite(),
                "Mlp: non-finite parameter in layer " + std::to_string(k));
    }
    enforce_precision();
}

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const Layer& l : layers_) n += static_cast<std::size_t>(l.W.size() + l.b.size());
    return n;
}

void Mlp::enforce_precision() {
    if (precision_ != Precision::f32) return;
    for (Layer& l : layers_) {
        l.W = l.W.unaryExpr([](double x) { return static_cast<double>(static_cast<float>(x)); });
        l.b = l.b.unaryExpr([](double x) { return static_cast<double>(static_cast<float>(x)); });
    }
}

std::array<double, 3> Mlp::forward(const SpaceTime& point) const {
    OutputJet jet = jet_eval_parts(*this, point, JetParts{});
    return {jet.u, jet.v, jet.p};
}

Mlp make_mlp(int hidden_layers, int neurons, Activation activation, std::uint64_t seed,
             bool unsteady, Precision precision, bool literal_output_activation) {
    require(hidden_layers >= 1, "make_mlp: hidden_layers must be >= 1");
    require(neurons >= 1, "make_mlp: neurons must be >= 1");

    Rng rng(seed);
    int in_width = unsteady ? 3 : 2;
    std::vector<int> widths;
    widths.push_back(in_width);
    for (int k = 0; k < hidden_layers; ++k) widths.push_back(neurons);
    widths.push_back(3);

    std::vector<Layer> layers;
    layers.reserve(widths.size() - 1);
    for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
        int fan_in = widths[k];
        int fan_out = widths[k + 1];
        double s = std::sqrt(6.0 / (fan_in + fan_out));
        Layer l;
        l.W.resize(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r)
            for (int c = 0; c < fan_in; ++c) l.W(r, c) = rng.uniform(-s, s);
        l.b = Eigen::VectorXd::Zero(fan_out);
        layers.push_back(std::move(l));
    }
    return Mlp(std::move(layers), activation, unsteady, precision, literal_output_activation, seed);
}

// ---------------------------------------------------------------------------
// Checkpoint I/O
// ---------------------------------------------------------------------------
// JSON document:
//   {version, variant, activation, precision, iteration, loss,
//    layers: [{rows, cols, A: row-major array, b: array}]}
// plus "output_activation" so the literal-output variant round-trips.

namespace {
constexpr int checkpoint_version = 1;
}

void save_checkpoint(const Mlp& net, const CheckpointMeta& meta,
                     const std::filesystem::path& path) {
    json doc;
    doc["version"] = checkpoint_version;
    doc["variant"] = meta.variant;
    doc["activation"] = std::string(to_string(net.activation()));
    doc["precision"] = precision_bits(net.precision());
    doc["iteration"] = meta.iteration;
    doc["loss"] = meta.loss;
    doc["output_activation"] = net.literal_output_activation();
    json layers = json::array();
    for (const Layer& l : net.layers()) {
        json jl;
        jl["rows"] = l.W.rows();
        jl["cols"] = l.W.cols();
        std::vector<double> a;
        a.reserve(static_cast<std::size_t>(l.W.size()));
        for (Eigen::Index r = 0; r < l.W.rows(); ++r)
            for (Eigen::Index c = 0; c < l.W.cols(); ++c) a.push_back(l.W(r, c));
        jl["A"] = a;
        jl["b"] = std::vector<double>(l.b.data(), l.b.data() + l.b.size());
        layers.push_back(std::move(jl));
    }
    doc["layers"] = std::move(layers);
    write_file_atomic(path, doc.dump());
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path,
                                 std::optional<Precision> precision_override) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        // nlohmann reports the byte offset of the failure in e.byte.
        throw format_error("checkpoint parse error at byte " + std::to_string(e.byte) + " in " +
                           path.string() + ": " + e.what());
    }

    try {
        int version = doc.at("version").get<int>();
        if (version != checkpoint_version)
            throw format_error("unsupported checkpoint version " + std::to_string(version));

        CheckpointMeta meta;
        meta.variant = doc.at("variant").get<std::string>();
        meta.iteration = doc.at("iteration").get<long>();
        meta.loss = doc.at("loss").get<double>();
        Activation act = parse_activation(doc.at("activation").get<std::string>());
        Precision stored = parse_precision(doc.at("precision").get<int>());
        bool literal_out = doc.value("output_activation", false);

        std::vector<Layer> layers;
        for (const json& jl : doc.at("layers")) {
            Eigen::Index rows = jl.at("rows").get<Eigen::Index>();
            Eigen::Index cols = jl.at("cols").get<Eigen::Index>();
            const auto& a = jl.at("A");
            const auto& b = jl.at("b");
            if (static_cast<Eigen::Index>(a.size()) != rows * cols)
                throw format_error("layer matrix length " + std::to_string(a.size()) +
                                   " does not match header " + std::to_string(rows) + "x" +
                                   std::to_string(cols));
            if (static_cast<Eigen::Index>(b.size()) != rows)
                throw format_error("layer bias length does not match header rows");
            Layer l;
            l.W.resize(rows, cols);
            std::size_t idx = 0;
            for (Eigen::Index r = 0; r < rows; ++r)
                for (Eigen::Index c = 0; c < cols; ++c) l.W(r, c) = a[idx++].get<double>();
            l.b.resize(rows);
            for (Eigen::Index r = 0; r < rows; ++r) l.b(r) = b[r].get<double>();
            layers.push_back(std::move(l));
        }
        if (layers.empty()) throw format_error("checkpoint contains no layers");

        bool unsteady = layers.front().W.cols() == 3;
        Precision prec = precision_override.value_or(stored);
        Mlp net(std::move(layers), act, unsteady, prec, literal_out);
        return {std::move(net), std::move(meta)};
    } catch (const json::exception& e) {
        throw format_error("malformed checkpoint " + path.string() + ": " + e.what());
    }
}

} // namespace pinnlab
