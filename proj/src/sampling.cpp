#include "pinnlab/sampling.hpp"

#include <cmath>
#include <numbers>

namespace pinnlab {

Segment parse_segment(std::string_view name) {
    if (name == "inlet") return Segment::inlet;
    if (name == "outlet") return Segment::outlet;
    if (name == "top") return Segment::top;
    if (name == "bottom") return Segment::bottom;
    if (name == "cylinder") return Segment::cylinder;
    if (name == "initial") return Segment::initial;
    throw contract_error("unknown boundary segment: " + std::string(name));
}

std::string_view to_string(Segment s) {
    switch (s) {
        case Segment::inlet: return "inlet";
        case Segment::outlet: return "outlet";
        case Segment::top: return "top";
        case Segment::bottom: return "bottom";
        case Segment::cylinder: return "cylinder";
        case Segment::initial: return "initial";
    }
    return "?";
}

void DomainSpec::validate() const {
    require(x_min < x_max && y_min < y_max, "domain: rectangle bounds must be ordered");
    if (time_span) require(*time_span >= 0.0, "domain: time span must be non-negative");
    if (hole) {
        require(hole->radius > 0.0, "domain: hole radius must be positive");
        require(hole->cx - hole->radius > x_min && hole->cx + hole->radius < x_max &&
                    hole->cy - hole->radius > y_min && hole->cy + hole->radius < y_max,
                "domain: hole must lie strictly inside the rectangle");
    }
}

bool DomainSpec::inside_hole(double x, double y) const {
    if (!hole) return false;
    double dx = x - hole->cx;
    double dy = y - hole->cy;
    return dx * dx + dy * dy < hole->radius * hole->radius;
}

namespace {

// t in (0, T] when a time span is present, clipped to the requested range.
std::optional<double> draw_time(const DomainSpec& domain,
                                const std::optional<std::pair<double, double>>& range, Rng& rng) {
    if (domain.steady()) return std::nullopt;
    double lo = 0.0, hi = *domain.time_span;
    if (range) {
        lo = std::max(lo, range->first);
        hi = std::min(hi, range->second);
        require(lo < hi, "sampling: empty time range");
    }
    return hi - (hi - lo) * rng.uniform();
}

} // namespace

std::vector<SpaceTime> sample_interior(const DomainSpec& domain, std::size_t n,
                                       std::uint64_t seed,
                                       std::optional<std::pair<double, double>> time_range) {
    domain.validate();
    require(n >= 1, "sample_interior: n must be >= 1");
    if (domain.hole) {
        double rect = (domain.x_max - domain.x_min) * (domain.y_max - domain.y_min);
        double hole = std::numbers::pi * domain.hole->radius * domain.hole->radius;
        require(hole < rect, "sample_interior: hole covers the rectangle");
    }

    Rng rng(seed);
    std::vector<SpaceTime> points;
    points.reserve(n);
    while (points.size() < n) {
        double x = rng.uniform(domain.x_min, domain.x_max);
        double y = rng.uniform(domain.y_min, domain.y_max);
        if (domain.inside_hole(x, y)) continue;
        points.push_back({x, y, draw_time(domain, time_range, rng)});
    }
    return points;
}

std::vector<SpaceTime> sample_boundary(const DomainSpec& domain, Segment segment, std::size_t n,
                                       std::uint64_t seed,
                                       std::optional<std::pair<double, double>> time_range) {
    domain.validate();
    require(n >= 1, "sample_boundary: n must be >= 1");
    if (segment == Segment::cylinder)
        require(domain.hole.has_value(), "sample_boundary: domain has no cylinder");

    Rng rng(seed);
    std::vector<SpaceTime> points;
    points.reserve(n);
    while (points.size() < n) {
        SpaceTime pt;
        switch (segment) {
            case Segment::inlet:
                pt.x = domain.x_min;
                pt.y = rng.uniform(domain.y_min, domain.y_max);
                break;
            case Segment::outlet:
                pt.x = domain.x_max;
                pt.y = rng.uniform(domain.y_min, domain.y_max);
                break;
            case Segment::top:
                pt.x = rng.uniform(domain.x_min, domain.x_max);
                pt.y = domain.y_max;
                break;
            case Segment::bottom:
                pt.x = rng.uniform(domain.x_min, domain.x_max);
                pt.y = domain.y_min;
                break;
            case Segment::cylinder: {
                double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
                pt.x = domain.hole->cx + domain.hole->radius * std::cos(theta);
                pt.y = domain.hole->cy + domain.hole->radius * std::sin(theta);
                break;
            }
            case Segment::initial: {
                pt.x = rng.uniform(domain.x_min, domain.x_max);
                pt.y = rng.uniform(domain.y_min, domain.y_max);
                if (domain.inside_hole(pt.x, pt.y)) continue;
                if (!domain.steady()) pt.t = 0.0;
                points.push_back(pt);
                continue;
            }
        }
        pt.t = draw_time(domain, time_range, rng);
        points.push_back(pt);
    }
    return points;
}

EpochShuffler::EpochShuffler(std::size_t pool_size, std::size_t batch_size, std::uint64_t seed)
    : batch_(batch_size), rng_(seed) {
    require(batch_size >= 1, "batches: batch size must be >= 1");
    require(batch_size <= pool_size, "batches: batch size exceeds pool size");
    order_.resize(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) order_[i] = i;
    reshuffle();
}

void EpochShuffler::reshuffle() {
    rng_.shuffle(order_);
    cursor_ = 0;
}

std::vector<std::size_t> EpochShuffler::next() {
    std::vector<std::size_t> batch;
    batch.reserve(batch_);
    while (batch.size() < batch_) {
        if (cursor_ == order_.size()) reshuffle();
        batch.push_back(order_[cursor_++]);
    }
    return batch;
}

} // namespace pinnlab
