#pragma once

#include "pinnlab/diagnostics.hpp"

#include <utility>
#include <vector>

namespace pinnlab {

/// Synthetic limit-cycle snapshot generator: a steady mean flow plus a
/// fundamental oscillation at the given Strouhal number and harmonics with
/// geometrically decaying amplitudes. Stands in for external CFD data when
/// exercising data-driven training and spectral analysis.
struct SynthSpec {
    GridSpec grid{32, 16, -2.0, 6.0, -2.0, 2.0};
    double dt = 0.2;
    int count = 76;
    double t0 = 0.0;
    double strouhal = 0.2;   // fundamental nondimensional frequency (D = U = 1)
    int harmonics = 3;
    double amplitude = 0.25; // fundamental amplitude
    double decay = 0.35;     // amplitude ratio between consecutive harmonics
    double mean_u = 1.0;     // uniform mean streamwise velocity
};

std::vector<FieldSnapshot> synth_snapshots(const SynthSpec& spec);

/// The (strouhal, normalized strength) pairs implied by the generator
/// parameters, for the u/v-stacked state: the steady mode first, then one
/// entry per signed harmonic frequency. This is the oracle against which a
/// decomposition of the generated snapshots can be checked.
std::vector<std::pair<double, double>> synth_mode_strengths(const SynthSpec& spec);

} // namespace pinnlab
