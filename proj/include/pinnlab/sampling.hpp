#pragma once

#include "pinnlab/mlp.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace pinnlab {

enum class Segment { inlet, outlet, top, bottom, cylinder, initial };

Segment parse_segment(std::string_view name);
std::string_view to_string(Segment s);

struct Cylinder {
    double cx = 0.0, cy = 0.0, radius = 0.5;
};

/// Rectangle x time-span with an optional circular hole. A missing time
/// span marks a steady problem: sampled points then carry no t.
struct DomainSpec {
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
    std::optional<double> time_span; // [0, T]; nullopt for steady problems
    std::optional<Cylinder> hole;

    void validate() const;
    bool steady() const { return !time_span.has_value(); }
    bool inside_hole(double x, double y) const;
};

/// Uniform samples over (rectangle minus hole) x (0, T], by rejection on
/// the spatial part; deterministic per seed. `time_range` restricts the
/// sampled times (data-driven runs train only inside the data window).
std::vector<SpaceTime> sample_interior(const DomainSpec& domain, std::size_t n,
                                       std::uint64_t seed,
                                       std::optional<std::pair<double, double>> time_range = {});

/// Uniform samples on one boundary segment x (0, T]. Cylinder-surface
/// points are parameterized by uniform angle; Segment::initial samples the
/// spatial domain (minus hole) at exactly t = 0.
std::vector<SpaceTime> sample_boundary(const DomainSpec& domain, Segment segment, std::size_t n,
                                       std::uint64_t seed,
                                       std::optional<std::pair<double, double>> time_range = {});

/// Per-role training pools plus the generation seed.
struct PointPool {
    std::vector<SpaceTime> interior;
    std::map<Segment, std::vector<SpaceTime>> boundary;
    std::vector<SpaceTime> initial;
    std::uint64_t seed = 0;
};

/// Epoch-shuffled traversal of one pool: every entry is consumed exactly
/// once per epoch, so over k*(pool/batch) iterations each point is seen
/// exactly k times. The stream is fully determined by (pool size, batch
/// size, seed).
class EpochShuffler {
public:
    EpochShuffler() = default;
    EpochShuffler(std::size_t pool_size, std::size_t batch_size, std::uint64_t seed);

    /// Indices of the next batch.
    std::vector<std::size_t> next();

    std::size_t pool_size() const { return order_.size(); }
    std::size_t batch_size() const { return batch_; }

private:
    void reshuffle();
    std::vector<std::size_t> order_;
    std::size_t batch_ = 0;
    std::size_t cursor_ = 0;
    Rng rng_{0};
};

} // namespace pinnlab
