#include "pinnlab/jet.hpp"

#include "pinnlab/activation.hpp"

#include <cmath>
#include <string>

namespace pinnlab {

ParamGradient zero_gradient(const Mlp& net) {
    ParamGradient g;
    g.reserve(net.layers().size());
    for (const Layer& l : net.layers()) {
        g.push_back({Eigen::MatrixXd::Zero(l.W.rows(), l.W.cols()),
                     Eigen::VectorXd::Zero(l.b.size())});
    }
    return g;
}

namespace {

// Copies the channel layout and resizes storage; Eigen's resize is a no-op
// when the shape is unchanged, so reused bundles stop allocating once block
// shapes stabilize.
void shape_like(Bundle& b, const Bundle& like, Eigen::Index rows) {
    b.points = like.points;
    b.c_dx = like.c_dx;
    b.c_dy = like.c_dy;
    b.c_dt = like.c_dt;
    b.c_dxx = like.c_dxx;
    b.c_dyy = like.c_dyy;
    b.data.resize(rows, like.data.cols());
}

} // namespace

Bundle Bundle::zeros_like(const Bundle& other, Eigen::Index rows) {
    Bundle b = uninit_like(other, rows);
    b.data.setZero();
    return b;
}

Bundle Bundle::uninit_like(const Bundle& other, Eigen::Index rows) {
    Bundle b;
    shape_like(b, other, rows);
    return b;
}

namespace {

JetParts normalize_parts(const Mlp& net, JetParts parts) {
    if (parts.second) parts.grad = true;
    if (!net.unsteady()) parts.time = false;
    return parts;
}

// sigma .. sigma''' tables over the value block, one exp per entry; the
// activation switch sits outside the loops so the inner math inlines.
void fill_tables(Activation a, const Eigen::Ref<const Eigen::MatrixXd>& z, ForwardTrace& ws,
                 bool need_s0, bool need_s3) {
    const Eigen::Index n = z.size();
    if (need_s0) ws.s0.resize(z.rows(), z.cols());
    ws.s1.resize(z.rows(), z.cols());
    ws.s2.resize(z.rows(), z.cols());
    if (need_s3) ws.s3.resize(z.rows(), z.cols());
    const double* zp = z.data();
    double* p0 = need_s0 ? ws.s0.data() : nullptr;
    double* p1 = ws.s1.data();
    double* p2 = ws.s2.data();
    double* p3 = need_s3 ? ws.s3.data() : nullptr;

    if (a == Activation::silu) {
        for (Eigen::Index i = 0; i < n; ++i) {
            ActDerivs d = activation_derivs(Activation::silu, zp[i]);
            if (p0) p0[i] = d.s0;
            p1[i] = d.s1;
            p2[i] = d.s2;
            if (p3) p3[i] = d.s3;
        }
    } else {
        for (Eigen::Index i = 0; i < n; ++i) {
            ActDerivs d = activation_derivs(a, zp[i]);
            if (p0) p0[i] = d.s0;
            p1[i] = d.s1;
            p2[i] = d.s2;
            if (p3) p3[i] = d.s3;
        }
    }
}

void apply_activation(Activation a, const Bundle& z, const JetParts& parts, ForwardTrace& ws,
                      Bundle& h) {
    fill_tables(a, z.val(), ws, true, false);
    shape_like(h, z, z.data.rows());
    h.val() = ws.s0;
    if (parts.grad) {
        h.dx() = ws.s1.array() * z.dx().array();
        h.dy() = ws.s1.array() * z.dy().array();
    }
    if (parts.time) h.dt() = ws.s1.array() * z.dt().array();
    if (parts.second) {
        h.dxx() = ws.s2.array() * z.dx().array().square() + ws.s1.array() * z.dxx().array();
        h.dyy() = ws.s2.array() * z.dy().array().square() + ws.s1.array() * z.dyy().array();
    }
}

// Reverse of apply_activation: maps the adjoint of h back to the adjoint
// of z, using the stored pre-activation values.
void activation_backward(Activation a, const Bundle& z, const Bundle& hbar,
                         const JetParts& parts, ForwardTrace& ws, Bundle& zbar) {
    fill_tables(a, z.val(), ws, false, parts.second);
    shape_like(zbar, z, z.data.rows());

    zbar.val() = ws.s1.array() * hbar.val().array();
    if (parts.grad) {
        zbar.val().array() +=
            ws.s2.array() *
            (z.dx().array() * hbar.dx().array() + z.dy().array() * hbar.dy().array());
        zbar.dx() = ws.s1.array() * hbar.dx().array();
        zbar.dy() = ws.s1.array() * hbar.dy().array();
    }
    if (parts.time) {
        zbar.val().array() += ws.s2.array() * z.dt().array() * hbar.dt().array();
        zbar.dt() = ws.s1.array() * hbar.dt().array();
    }
    if (parts.second) {
        zbar.val().array() +=
            (ws.s3.array() * z.dx().array().square() + ws.s2.array() * z.dxx().array()) *
                hbar.dxx().array() +
            (ws.s3.array() * z.dy().array().square() + ws.s2.array() * z.dyy().array()) *
                hbar.dyy().array();
        zbar.dx().array() += 2.0 * ws.s2.array() * z.dx().array() * hbar.dxx().array();
        zbar.dy().array() += 2.0 * ws.s2.array() * z.dy().array() * hbar.dyy().array();
        zbar.dxx() = ws.s1.array() * hbar.dxx().array();
        zbar.dyy() = ws.s1.array() * hbar.dyy().array();
    }
}

void write_input_bundle(const Eigen::MatrixXd& coords, const JetParts& parts, Bundle& b) {
    b.points = coords.cols();
    int channels = 1;
    b.c_dx = b.c_dy = b.c_dt = b.c_dxx = b.c_dyy = -1;
    if (parts.grad) {
        b.c_dx = channels++;
        b.c_dy = channels++;
    }
    if (parts.time) b.c_dt = channels++;
    if (parts.second) {
        b.c_dxx = channels++;
        b.c_dyy = channels++;
    }
    b.data.resize(coords.rows(), channels * coords.cols());
    b.data.setZero();
    b.val() = coords;
    if (parts.grad) {
        b.dx().row(0).setOnes();
        b.dy().row(1).setOnes();
    }
    if (parts.time) b.dt().row(2).setOnes();
}

void affine_into(const Layer& l, const Bundle& h, Bundle& z) {
    shape_like(z, h, l.W.rows());
    if (h.points == 1) {
        // Per-column products keep single-point evaluation bit-identical to
        // the value-only path (forward == jet_eval values).
        for (Eigen::Index c = 0; c < h.data.cols(); ++c)
            z.data.col(c).noalias() = l.W * h.data.col(c);
    } else {
        z.data.noalias() = l.W * h.data;
    }
    z.val().colwise() += l.b;
}

} // namespace

void batch_forward(const Mlp& net, const Eigen::MatrixXd& coords, const JetParts& raw_parts,
                   ForwardTrace& trace) {
    const JetParts parts = normalize_parts(net, raw_parts);
    require(coords.rows() == net.input_width(),
            "batch_forward: coordinate rows do not match input width");

    trace.parts = parts;
    const auto& layers = net.layers();
    const std::size_t layer_count = layers.size();
    trace.layer_in.resize(layer_count);
    trace.pre.resize(layer_count);

    write_input_bundle(coords, parts, trace.layer_in[0]);
    for (std::size_t k = 0; k < layer_count; ++k) {
        const Layer& l = layers[k];
        const Bundle& h = trace.layer_in[k];
        Bundle& next = (k + 1 < layer_count) ? trace.layer_in[k + 1] : trace.out;

        bool activate = ((k + 1 < layer_count) || net.literal_output_activation()) &&
                        net.activation() != Activation::identity;
        if (activate) {
            affine_into(l, h, trace.pre[k]);
            if (!trace.pre[k].data.allFinite())
                throw numeric_error("non-finite pre-activation in layer " + std::to_string(k));
            apply_activation(net.activation(), trace.pre[k], parts, trace, next);
        } else {
            trace.pre[k].points = 0; // marks "no activation stored"
            affine_into(l, h, next);
            if (!next.data.allFinite())
                throw numeric_error("non-finite pre-activation in layer " + std::to_string(k));
        }
    }
}

void batch_backward(const Mlp& net, ForwardTrace& trace, const Bundle& out_adjoint,
                    ParamGradient& grad) {
    const JetParts& parts = trace.parts;
    const auto& layers = net.layers();
    const std::size_t layer_count = layers.size();
    require(grad.size() == layer_count, "batch_backward: gradient accumulator shape mismatch");

    // Ping-pong between the two scratch bundles so reads and writes never
    // alias.
    auto other = [&](const Bundle* b) {
        return b == &trace.adj_a ? &trace.adj_b : &trace.adj_a;
    };
    const Bundle* hbar = &out_adjoint;
    for (std::size_t k = layer_count; k-- > 0;) {
        const Bundle* zbar = hbar;
        if (trace.pre[k].points > 0) {
            Bundle* slot = other(hbar);
            activation_backward(net.activation(), trace.pre[k], *hbar, parts, trace, *slot);
            zbar = slot;
        }

        const Bundle& hin = trace.layer_in[k];
        grad[k].W.noalias() += zbar->data * hin.data.transpose();
        grad[k].b.noalias() += zbar->val().rowwise().sum();

        if (k > 0) {
            Bundle* slot = other(zbar);
            shape_like(*slot, *zbar, layers[k].W.cols());
            slot->data.noalias() = layers[k].W.transpose() * zbar->data;
            hbar = slot;
        }
    }
}

namespace {

Eigen::MatrixXd point_column(const Mlp& net, const SpaceTime& point) {
    if (net.unsteady()) {
        require(point.t.has_value(),
                "dimension mismatch: unsteady network requires a time coordinate");
        Eigen::MatrixXd c(3, 1);
        c << point.x, point.y, *point.t;
        return c;
    }
    require(!point.t.has_value(),
            "dimension mismatch: steady network takes no time coordinate");
    Eigen::MatrixXd c(2, 1);
    c << point.x, point.y;
    return c;
}

} // namespace

OutputJet jet_eval_parts(const Mlp& net, const SpaceTime& point, const JetParts& raw_parts) {
    const JetParts parts = normalize_parts(net, raw_parts);
    ForwardTrace trace;
    batch_forward(net, point_column(net, point), parts, trace);
    const Bundle& o = trace.out;

    OutputJet jet;
    jet.u = o.val()(0, 0);
    jet.v = o.val()(1, 0);
    jet.p = o.val()(2, 0);
    if (parts.grad) {
        jet.du = {o.dx()(0, 0), o.dy()(0, 0), parts.time ? o.dt()(0, 0) : 0.0};
        jet.dv = {o.dx()(1, 0), o.dy()(1, 0), parts.time ? o.dt()(1, 0) : 0.0};
        jet.dp = {o.dx()(2, 0), o.dy()(2, 0), parts.time ? o.dt()(2, 0) : 0.0};
    }
    if (parts.second) {
        jet.d2u = {o.dxx()(0, 0), o.dyy()(0, 0)};
        jet.d2v = {o.dxx()(1, 0), o.dyy()(1, 0)};
    }
    return jet;
}

OutputJet jet_eval(const Mlp& net, const SpaceTime& point) {
    return jet_eval_parts(net, point, full_jet_parts(net.unsteady()));
}

namespace {

SpaceTime shifted(const SpaceTime& p, int dim, double h) {
    SpaceTime q = p;
    if (dim == 0) q.x += h;
    else if (dim == 1) q.y += h;
    else q.t = *q.t + h;
    return q;
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-2);
}

} // namespace

double fd_check(const Mlp& net, const SpaceTime& point, double step) {
    require(step > 0.0 && step <= 1e-2, "fd_check: step must lie in (0, 1e-2]");

    const int dims = net.unsteady() ? 3 : 2;
    OutputJet jet = jet_eval(net, point);
    double worst = 0.0;

    for (int d = 0; d < dims; ++d) {
        auto fp = net.forward(shifted(point, d, step));
        auto fm = net.forward(shifted(point, d, -step));
        double fd_u = (fp[0] - fm[0]) / (2.0 * step);
        double fd_v = (fp[1] - fm[1]) / (2.0 * step);
        double fd_p = (fp[2] - fm[2]) / (2.0 * step);
        worst = std::max(worst, rel_err(jet.du[d], fd_u));
        worst = std::max(worst, rel_err(jet.dv[d], fd_v));
        worst = std::max(worst, rel_err(jet.dp[d], fd_p));
    }

    // Second spatial derivatives: difference the first-derivative entries.
    for (int d = 0; d < 2; ++d) {
        OutputJet jp = jet_eval(net, shifted(point, d, step));
        OutputJet jm = jet_eval(net, shifted(point, d, -step));
        double fd_uu = (jp.du[d] - jm.du[d]) / (2.0 * step);
        double fd_vv = (jp.dv[d] - jm.dv[d]) / (2.0 * step);
        worst = std::max(worst, rel_err(jet.d2u[d], fd_uu));
        worst = std::max(worst, rel_err(jet.d2v[d], fd_vv));
    }
    return worst;
}

} // namespace pinnlab
