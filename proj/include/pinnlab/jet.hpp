#pragma once

#include "pinnlab/mlp.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace pinnlab {

/// Which derivative channels to propagate alongside the values. `second`
/// implies `grad`; `time` is ignored for steady networks.
struct JetParts {
    bool grad = false;
    bool time = false;
    bool second = false;
};

inline JetParts full_jet_parts(bool unsteady) {
    return JetParts{true, unsteady, true};
}

/// Values and exact derivatives of the network outputs at one point.
/// Gradients are ordered (d/dx, d/dy, d/dt); second derivatives are
/// (d2/dx2, d2/dy2). Derivatives are exact for the network function, not
/// for the PDE solution it approximates. Steady evaluation leaves every
/// d/dt entry exactly zero.
struct OutputJet {
    double u = 0.0, v = 0.0, p = 0.0;
    std::array<double, 3> du{}, dv{}, dp{};
    std::array<double, 2> d2u{}, d2v{};
};

/// One (dW, db) pair per network layer, shape-congruent with the Mlp.
using ParamGradient = std::vector<Layer>;

ParamGradient zero_gradient(const Mlp& net);

// ---------------------------------------------------------------------------
// Batched jet propagation
// ---------------------------------------------------------------------------
// A Bundle holds one layer's activations for a block of points: a single
// (width x points*channels) matrix whose column groups are the value
// channel followed by the active derivative channels. Keeping the channels
// contiguous lets each affine layer run as one matrix product. The forward
// pass applies the element-wise chain rules
//   h = sigma(z),  h_g = sigma'(z) z_g,  h_s = sigma''(z) z_g^2 + sigma'(z) z_s
// through each activation; the backward pass reverse-accumulates exact
// parameter gradients through the same recurrence (which is where the third
// activation derivative enters).

struct Bundle {
    Eigen::MatrixXd data;
    Eigen::Index points = 0;
    int c_dx = -1, c_dy = -1, c_dt = -1, c_dxx = -1, c_dyy = -1; // channel slots

    static Bundle zeros_like(const Bundle& other, Eigen::Index rows);
    /// Same layout, uninitialized storage (for results that are fully
    /// overwritten).
    static Bundle uninit_like(const Bundle& other, Eigen::Index rows);

    int channels() const {
        return points == 0 ? 0 : static_cast<int>(data.cols() / points);
    }

    auto val() { return data.middleCols(0, points); }
    auto val() const { return data.middleCols(0, points); }
    auto channel(int c) { return data.middleCols(c * points, points); }
    auto channel(int c) const { return data.middleCols(c * points, points); }

    auto dx() { return channel(c_dx); }
    auto dx() const { return channel(c_dx); }
    auto dy() { return channel(c_dy); }
    auto dy() const { return channel(c_dy); }
    auto dt() { return channel(c_dt); }
    auto dt() const { return channel(c_dt); }
    auto dxx() { return channel(c_dxx); }
    auto dxx() const { return channel(c_dxx); }
    auto dyy() { return channel(c_dyy); }
    auto dyy() const { return channel(c_dyy); }
};

/// Forward state plus reusable scratch. A worker keeps one instance and
/// feeds it block after block: with stable block shapes the steady state
/// allocates nothing.
struct ForwardTrace {
    JetParts parts;
    std::vector<Bundle> layer_in; // h^k entering affine layer k (layer_in[0] = coords)
    std::vector<Bundle> pre;      // z^k where an activation follows; empty otherwise
    Bundle out;                   // network output bundle

    // scratch reused across calls
    Eigen::MatrixXd s0, s1, s2, s3; // activation-derivative tables
    Bundle adj_a, adj_b;            // backward ping-pong buffers
};

/// Forward pass over a block of points given as columns of `coords`
/// (2 x B steady, 3 x B unsteady). Throws numeric_error naming the layer if
/// a pre-activation overflows.
void batch_forward(const Mlp& net, const Eigen::MatrixXd& coords, const JetParts& parts,
                   ForwardTrace& trace);

/// Adds this block's parameter-gradient contribution into `grad`.
/// `out_adjoint` carries dL/d(out bundle) with the same channel layout.
void batch_backward(const Mlp& net, ForwardTrace& trace, const Bundle& out_adjoint,
                    ParamGradient& grad);

// ---------------------------------------------------------------------------
// Point-wise interface
// ---------------------------------------------------------------------------

/// Full jet at one point: values plus first spatial/temporal and second
/// spatial derivatives. Deterministic: identical (net, point) give
/// bit-identical results.
OutputJet jet_eval(const Mlp& net, const SpaceTime& point);

/// Jet restricted to the requested channels; unrequested entries are zero.
OutputJet jet_eval_parts(const Mlp& net, const SpaceTime& point, const JetParts& parts);

/// Worst discrepancy between jet_eval and central finite differences over
/// all derivative entries, as |jet - fd| / max(|fd|, 1e-2). The 1e-2 floor
/// makes "rel err < 1e-6" equivalent to "abs err < 1e-8" near zero. First
/// derivatives are differenced from plain forward values; second derivatives
/// are differenced from the (independently checked) first-derivative
/// entries, which keeps the estimate clear of the 3-point-stencil
/// cancellation floor.
double fd_check(const Mlp& net, const SpaceTime& point, double step);

} // namespace pinnlab
