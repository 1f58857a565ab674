#pragma once

#include "pinnlab/diagnostics.hpp"

#include <Eigen/Dense>

#include <complex>
#include <filesystem>
#include <utility>
#include <vector>

namespace pinnlab {

/// Which fields are stacked into DMD state vectors (u and v by default;
/// pressure selectable).
struct FieldMask {
    bool u = true, v = true, p = false;

    int count() const { return (u ? 1 : 0) + (v ? 1 : 0) + (p ? 1 : 0); }
};

FieldMask parse_field_mask(std::string_view spec);
std::string to_string(const FieldMask& mask);

/// Time-ordered snapshots on one grid with uniform spacing.
struct SnapshotSeries {
    std::vector<FieldSnapshot> snaps;
    double dt = 0.0;
    FieldMask mask;
};

/// Validates ordering, grid congruence, and |t_{k+1} - t_k - dt| < 1e-9.
SnapshotSeries make_series(std::vector<FieldSnapshot> snaps, FieldMask mask);

/// Reads every *.csv snapshot in the directory and assembles a series.
SnapshotSeries load_snapshot_series(const std::filesystem::path& dir, FieldMask mask);

/// One dynamic mode: per-step multiplier lambda, continuous-time growth
/// rate ln|lambda|/dt, frequency arg(lambda)/(2 pi dt), Strouhal number
/// f D / U, normalized strength (sum of squares over modes = 1), complex
/// amplitude, and the complex mode field on the stacked state.
struct DmdMode {
    std::complex<double> lambda;
    double growth_rate = 0.0;
    double frequency = 0.0;
    double strouhal = 0.0;
    double strength = 0.0;
    std::complex<double> amplitude;
    Eigen::VectorXcd field;
};

struct DmdOptions {
    double energy_cutoff = 1.0; // cumulative singular-value energy kept
    double diameter = 1.0;      // reference length for St
    double velocity = 1.0;      // reference speed for St
    double sv_floor = 1e-10;    // discard sigma below sv_floor * sigma_max
};

/// Column k of X stacks the masked fields of snapshot k (k = 0..m-2);
/// Y is the one-step-shifted companion (k = 1..m-1).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> build_state_matrix(const SnapshotSeries& series);

/// Exact DMD: thin SVD of X, cumulative-energy truncation, eigenpairs of
/// the reduced operator, mode fields Y V S^-1 w / lambda (falling back to
/// U w for vanishing lambda), amplitudes from a least-squares fit of the
/// first snapshot onto the modes. Returned modes are sorted by strength
/// descending. m snapshots with no truncation yield m-1 modes.
std::vector<DmdMode> dmd(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double dt,
                         const DmdOptions& options = {});

enum class ModeClass { neutral, damped, growing };

std::string_view to_string(ModeClass c);

struct LabeledMode {
    DmdMode mode;
    ModeClass label = ModeClass::neutral;
};

/// | |lambda|-1 | <= radius_tol is neutral; smaller magnitudes are damped,
/// larger growing. Output is grouped neutral, damped, growing, each group
/// sorted by strength descending.
std::vector<LabeledMode> classify_modes(const std::vector<DmdMode>& modes, double radius_tol);

/// Writes `<stem>_re.csv` and `<stem>_im.csv` in snapshot format (unmasked
/// fields zero), tagged with St, growth rate, and strength.
void export_mode(const DmdMode& mode, const FieldMask& mask, const GridSpec& grid,
                 const std::filesystem::path& stem);

/// CSV: index,re_lambda,im_lambda,growth_rate,frequency,strouhal,strength,class
void write_mode_table(const std::vector<LabeledMode>& modes, const std::filesystem::path& path);

} // namespace pinnlab
