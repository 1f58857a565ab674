#include "pinnlab/synth.hpp"

#include <cmath>
#include <numbers>

namespace pinnlab {

namespace {

// Smooth spatial patterns with harmonic-dependent wavenumbers, so each
// harmonic occupies its own subspace and the decomposition is clean.
struct Patterns {
    double au, bu, av, bv; // cos/sin carriers for u and v
};

Patterns pattern_at(const SynthSpec& spec, int harmonic, double x, double y) {
    const double pi = std::numbers::pi;
    double xi = (x - spec.grid.x_min) / (spec.grid.x_max - spec.grid.x_min);
    double eta = (y - spec.grid.y_min) / (spec.grid.y_max - spec.grid.y_min);
    double k = static_cast<double>(harmonic);
    Patterns p;
    p.au = std::cos(2.0 * pi * k * xi) * std::cos(pi * k * eta);
    p.bu = std::sin(2.0 * pi * k * xi) * std::cos(pi * k * eta);
    p.av = std::sin(pi * k * xi) * std::sin(2.0 * pi * k * eta);
    p.bv = std::cos(pi * k * xi) * std::sin(2.0 * pi * k * eta);
    return p;
}

double harmonic_amplitude(const SynthSpec& spec, int harmonic) {
    return spec.amplitude * std::pow(spec.decay, harmonic - 1);
}

} // namespace

std::vector<FieldSnapshot> synth_snapshots(const SynthSpec& spec) {
    require(spec.count >= 2, "synth: need at least two snapshots");
    require(spec.dt > 0.0, "synth: dt must be positive");
    require(spec.harmonics >= 0, "synth: harmonics must be non-negative");
    require(spec.decay > 0.0 && spec.decay < 1.0, "synth: decay must lie in (0, 1)");
    require(spec.grid.nx >= 1 && spec.grid.ny >= 1, "synth: grid must be non-empty");

    const double pi = std::numbers::pi;
    std::vector<FieldSnapshot> snaps;
    snaps.reserve(static_cast<std::size_t>(spec.count));
    for (int s = 0; s < spec.count; ++s) {
        double t = spec.t0 + s * spec.dt;
        FieldSnapshot snap;
        snap.t = t;
        snap.nx = spec.grid.nx;
        snap.ny = spec.grid.ny;
        snap.x_min = spec.grid.x_min;
        snap.x_max = spec.grid.x_max;
        snap.y_min = spec.grid.y_min;
        snap.y_max = spec.grid.y_max;
        std::size_t n = static_cast<std::size_t>(spec.grid.nx) * spec.grid.ny;
        snap.u.assign(n, spec.mean_u);
        snap.v.assign(n, 0.0);
        snap.p.assign(n, 0.0);
        for (int k = 1; k <= spec.harmonics; ++k) {
            double a = harmonic_amplitude(spec, k);
            double omega = 2.0 * pi * k * spec.strouhal;
            double c = std::cos(omega * t), s_t = std::sin(omega * t);
            for (int j = 0; j < spec.grid.ny; ++j) {
                for (int i = 0; i < spec.grid.nx; ++i) {
                    Patterns p = pattern_at(spec, k, spec.grid.cell_x(i), spec.grid.cell_y(j));
                    std::size_t idx = static_cast<std::size_t>(j) * spec.grid.nx + i;
                    snap.u[idx] += a * (c * p.au + s_t * p.bu);
                    snap.v[idx] += a * (c * p.av + s_t * p.bv);
                    snap.p[idx] += 0.1 * a * (c * p.au - s_t * p.bv);
                }
            }
        }
        snaps.push_back(std::move(snap));
    }
    return snaps;
}

std::vector<std::pair<double, double>> synth_mode_strengths(const SynthSpec& spec) {
    // Each harmonic contributes a conjugate pair with per-mode invariant
    // |amplitude| * ||mode field|| = (a_k/2) sqrt(||P||^2 + ||Q||^2) on the
    // stacked (u, v) state, and the steady mean contributes ||mean||.
    std::vector<std::pair<double, double>> modes;
    std::size_t n = static_cast<std::size_t>(spec.grid.nx) * spec.grid.ny;
    double mean_norm = spec.mean_u * std::sqrt(static_cast<double>(n));
    modes.push_back({0.0, mean_norm});
    for (int k = 1; k <= spec.harmonics; ++k) {
        double pq_sq = 0.0;
        for (int j = 0; j < spec.grid.ny; ++j) {
            for (int i = 0; i < spec.grid.nx; ++i) {
                Patterns p = pattern_at(spec, k, spec.grid.cell_x(i), spec.grid.cell_y(j));
                pq_sq += p.au * p.au + p.bu * p.bu + p.av * p.av + p.bv * p.bv;
            }
        }
        double strength = 0.5 * harmonic_amplitude(spec, k) * std::sqrt(pq_sq);
        modes.push_back({k * spec.strouhal, strength});
        modes.push_back({-k * spec.strouhal, strength});
    }
    double norm_sq = 0.0;
    for (const auto& [st, s] : modes) norm_sq += s * s;
    double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& [st, s] : modes) s *= inv;
    return modes;
}

} // namespace pinnlab
