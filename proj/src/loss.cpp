#include "pinnlab/loss.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace pinnlab {

namespace {

constexpr std::size_t block_size = 1024;

JetParts parts_for_role(Role role, bool unsteady_residuals) {
    switch (role) {
        case Role::interior: return {true, unsteady_residuals, true};
        case Role::neumann: return {true, false, false};
        case Role::convective: return {true, unsteady_residuals, false};
        default: return {false, false, false};
    }
}

/// Terms a role feeds, in residual-component order.
std::vector<int> terms_for_slice(const RoleSlice& slice) {
    switch (slice.role) {
        case Role::interior: return {term_continuity, term_momentum_x, term_momentum_y};
        case Role::initial: {
            std::vector<int> t = {term_ic_u, term_ic_v};
            if (slice.spec.p.present()) t.push_back(term_ic_p);
            return t;
        }
        case Role::data: return {term_ic_u, term_ic_v, term_ic_p};
        case Role::dirichlet: return {term_dirichlet_u, term_dirichlet_v};
        case Role::neumann:
        case Role::convective: return {term_flux_u, term_flux_v};
        case Role::pressure_pin: return {term_ic_p};
    }
    return {};
}

struct Block {
    std::size_t slice = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct BlockResult {
    TermArray sq_sum{};
    ParamGradient grad; // empty when gradients were not requested
};

Eigen::MatrixXd block_coords(const RoleSlice& slice, std::size_t begin, std::size_t end,
                             bool unsteady_net) {
    const Eigen::Index b = static_cast<Eigen::Index>(end - begin);
    Eigen::MatrixXd coords(unsteady_net ? 3 : 2, b);
    for (Eigen::Index i = 0; i < b; ++i) {
        const SpaceTime& pt = slice.points[begin + static_cast<std::size_t>(i)];
        coords(0, i) = pt.x;
        coords(1, i) = pt.y;
        if (unsteady_net) {
            require(pt.t.has_value(), "loss: unsteady network requires time coordinates");
            coords(2, i) = *pt.t;
        } else {
            require(!pt.t.has_value(), "loss: steady network takes no time coordinate");
        }
    }
    return coords;
}

void check_finite(const Eigen::RowVectorXd& r, const RoleSlice& slice, std::size_t begin) {
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        if (!std::isfinite(r(i))) {
            const SpaceTime& pt = slice.points[begin + static_cast<std::size_t>(i)];
            std::ostringstream ss;
            ss << "non-finite residual at point (" << pt.x << ", " << pt.y;
            if (pt.t) ss << ", " << *pt.t;
            ss << ")";
            throw numeric_error(ss.str());
        }
    }
}

Eigen::RowVectorXd eval_targets(const TargetField& target, const RoleSlice& slice,
                                std::size_t begin, std::size_t end, const FluidProps& fluid) {
    Eigen::RowVectorXd out(static_cast<Eigen::Index>(end - begin));
    for (std::size_t i = begin; i < end; ++i)
        out(static_cast<Eigen::Index>(i - begin)) = eval_target(target, slice.points[i], fluid);
    return out;
}

/// Residuals of one block, the adjoint seed scaled by dTotal/dr per point,
/// and the squared sums. `scale[t]` is 2 w_t / N_t (zero when gradients are
/// not requested).
void process_block(const Mlp& net, const ResidualBatch& batch, const RoleSlice& slice,
                   std::size_t begin, std::size_t end, const TermArray& scale, bool want_grad,
                   ForwardTrace& trace, BlockResult& out) {
    const bool unsteady_residuals = net.unsteady() && !batch.steady;
    const JetParts parts = parts_for_role(slice.role, unsteady_residuals);
    const Eigen::Index b = static_cast<Eigen::Index>(end - begin);

    batch_forward(net, block_coords(slice, begin, end, net.unsteady()), parts, trace);
    const Bundle& o = trace.out;

    std::vector<int> terms = terms_for_slice(slice);
    std::vector<Eigen::RowVectorXd> residuals(terms.size());

    const double nu = batch.fluid.nu;
    const double inv_rho = 1.0 / batch.fluid.rho;

    switch (slice.role) {
        case Role::interior: {
            residuals[0] = o.dx().row(0) + o.dy().row(1);
            Eigen::RowVectorXd mx = (o.val().row(0).array() * o.dx().row(0).array() +
                                     o.val().row(1).array() * o.dy().row(0).array() +
                                     inv_rho * o.dx().row(2).array() -
                                     nu * (o.dxx().row(0).array() + o.dyy().row(0).array()))
                                        .matrix();
            Eigen::RowVectorXd my = (o.val().row(0).array() * o.dx().row(1).array() +
                                     o.val().row(1).array() * o.dy().row(1).array() +
                                     inv_rho * o.dy().row(2).array() -
                                     nu * (o.dxx().row(1).array() + o.dyy().row(1).array()))
                                        .matrix();
            if (trace.parts.time) {
                mx += o.dt().row(0);
                my += o.dt().row(1);
            }
            residuals[1] = std::move(mx);
            residuals[2] = std::move(my);
            break;
        }
        case Role::initial: {
            residuals[0] = o.val().row(0) - eval_targets(slice.spec.u, slice, begin, end, batch.fluid);
            residuals[1] = o.val().row(1) - eval_targets(slice.spec.v, slice, begin, end, batch.fluid);
            if (terms.size() == 3)
                residuals[2] =
                    o.val().row(2) - eval_targets(slice.spec.p, slice, begin, end, batch.fluid);
            break;
        }
        case Role::data: {
            Eigen::RowVectorXd tu(b), tv(b), tp(b);
            for (Eigen::Index i = 0; i < b; ++i) {
                const auto& d = slice.targets[begin + static_cast<std::size_t>(i)];
                tu(i) = d[0];
                tv(i) = d[1];
                tp(i) = d[2];
            }
            residuals[0] = o.val().row(0) - tu;
            residuals[1] = o.val().row(1) - tv;
            residuals[2] = o.val().row(2) - tp;
            break;
        }
        case Role::dirichlet: {
            residuals[0] = o.val().row(0) - eval_targets(slice.spec.u, slice, begin, end, batch.fluid);
            residuals[1] = o.val().row(1) - eval_targets(slice.spec.v, slice, begin, end, batch.fluid);
            break;
        }
        case Role::neumann: {
            const auto& n = slice.spec.normal;
            residuals[0] = n[0] * o.dx().row(0) + n[1] * o.dy().row(0) -
                           eval_targets(slice.spec.u, slice, begin, end, batch.fluid);
            residuals[1] = n[0] * o.dx().row(1) + n[1] * o.dy().row(1) -
                           eval_targets(slice.spec.v, slice, begin, end, batch.fluid);
            break;
        }
        case Role::convective: {
            const auto& n = slice.spec.normal;
            const double c = slice.spec.convection_speed;
            residuals[0] = c * (n[0] * o.dx().row(0) + n[1] * o.dy().row(0));
            residuals[1] = c * (n[0] * o.dx().row(1) + n[1] * o.dy().row(1));
            if (trace.parts.time) {
                residuals[0] += o.dt().row(0);
                residuals[1] += o.dt().row(1);
            }
            break;
        }
        case Role::pressure_pin: {
            residuals[0] = o.val().row(2) - eval_targets(slice.spec.p, slice, begin, end, batch.fluid);
            break;
        }
    }

    for (std::size_t c = 0; c < terms.size(); ++c) {
        check_finite(residuals[c], slice, begin);
        out.sq_sum[terms[c]] += residuals[c].squaredNorm();
    }
    if (!want_grad) return;

    // Adjoint seed: dTotal/d(residual_i) = scale[t] * r_i, chained through
    // each residual's dependence on the output-jet entries.
    Bundle abar = Bundle::zeros_like(trace.out, 3);

    std::vector<Eigen::RowVectorXd> coeff(terms.size());
    for (std::size_t c = 0; c < terms.size(); ++c) coeff[c] = scale[terms[c]] * residuals[c];

    switch (slice.role) {
        case Role::interior: {
            const Eigen::RowVectorXd& cc = coeff[0];
            const Eigen::RowVectorXd& cx = coeff[1];
            const Eigen::RowVectorXd& cy = coeff[2];
            abar.dx().row(0) += cc;
            abar.dy().row(1) += cc;

            abar.val().row(0) += (cx.array() * o.dx().row(0).array()).matrix();
            abar.dx().row(0) += (cx.array() * o.val().row(0).array()).matrix();
            abar.val().row(1) += (cx.array() * o.dy().row(0).array()).matrix();
            abar.dy().row(0) += (cx.array() * o.val().row(1).array()).matrix();
            abar.dx().row(2) += inv_rho * cx;
            abar.dxx().row(0) -= nu * cx;
            abar.dyy().row(0) -= nu * cx;

            abar.val().row(0) += (cy.array() * o.dx().row(1).array()).matrix();
            abar.dx().row(1) += (cy.array() * o.val().row(0).array()).matrix();
            abar.val().row(1) += (cy.array() * o.dy().row(1).array()).matrix();
            abar.dy().row(1) += (cy.array() * o.val().row(1).array()).matrix();
            abar.dy().row(2) += inv_rho * cy;
            abar.dxx().row(1) -= nu * cy;
            abar.dyy().row(1) -= nu * cy;

            if (trace.parts.time) {
                abar.dt().row(0) += cx;
                abar.dt().row(1) += cy;
            }
            break;
        }
        case Role::initial:
        case Role::data: {
            abar.val().row(0) += coeff[0];
            abar.val().row(1) += coeff[1];
            if (terms.size() == 3) abar.val().row(2) += coeff[2];
            break;
        }
        case Role::dirichlet: {
            abar.val().row(0) += coeff[0];
            abar.val().row(1) += coeff[1];
            break;
        }
        case Role::neumann: {
            const auto& n = slice.spec.normal;
            abar.dx().row(0) += n[0] * coeff[0];
            abar.dy().row(0) += n[1] * coeff[0];
            abar.dx().row(1) += n[0] * coeff[1];
            abar.dy().row(1) += n[1] * coeff[1];
            break;
        }
        case Role::convective: {
            const auto& n = slice.spec.normal;
            const double c = slice.spec.convection_speed;
            abar.dx().row(0) += c * n[0] * coeff[0];
            abar.dy().row(0) += c * n[1] * coeff[0];
            abar.dx().row(1) += c * n[0] * coeff[1];
            abar.dy().row(1) += c * n[1] * coeff[1];
            if (trace.parts.time) {
                abar.dt().row(0) += coeff[0];
                abar.dt().row(1) += coeff[1];
            }
            break;
        }
        case Role::pressure_pin: {
            abar.val().row(2) += coeff[0];
            break;
        }
    }

    batch_backward(net, trace, abar, out.grad);
}

LossGradient run_batch(const Mlp& net, const ResidualBatch& batch, const TermArray& weights,
                       int threads, bool want_grad) {
#if defined(__GLIBC__)
    // Block buffers are several MB and get reallocated as block shapes
    // alternate between roles; keep them on the heap free-list instead of
    // round-tripping through mmap (which re-zeroes pages every iteration).
    static const bool malloc_tuned = [] {
        mallopt(M_MMAP_THRESHOLD, 512 * 1024 * 1024);
        mallopt(M_TRIM_THRESHOLD, 512 * 1024 * 1024);
        return true;
    }();
    (void)malloc_tuned;
#endif
    std::size_t total_points = 0;
    for (const RoleSlice& slice : batch.slices) {
        total_points += slice.points.size();
        if (slice.role == Role::data)
            require(slice.targets.size() == slice.points.size(),
                    "loss: data slice targets must align with points");
    }
    require(total_points > 0, "loss: batch is empty");

    // Residual count per term over the whole batch (the mean denominators).
    std::array<std::size_t, loss_term_count> counts{};
    for (const RoleSlice& slice : batch.slices)
        for (int t : terms_for_slice(slice)) counts[t] += slice.points.size();

    TermArray scale{};
    if (want_grad)
        for (int t = 0; t < loss_term_count; ++t)
            scale[t] = counts[t] ? 2.0 * weights[t] / static_cast<double>(counts[t]) : 0.0;

    std::vector<Block> blocks;
    for (std::size_t s = 0; s < batch.slices.size(); ++s) {
        const std::size_t n = batch.slices[s].points.size();
        for (std::size_t begin = 0; begin < n; begin += block_size)
            blocks.push_back({s, begin, std::min(begin + block_size, n)});
    }

    std::vector<BlockResult> results(blocks.size());
    auto worker_body = [&](std::atomic<std::size_t>& next, std::exception_ptr& error,
                           std::mutex& error_mutex) {
        ForwardTrace trace; // per-worker reusable storage
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= blocks.size()) return;
            try {
                const Block& blk = blocks[i];
                if (want_grad) results[i].grad = zero_gradient(net);
                process_block(net, batch, batch.slices[blk.slice], blk.begin, blk.end, scale,
                              want_grad, trace, results[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    int nthreads = std::max(1, threads);
    if (nthreads == 1 || blocks.size() == 1) {
        worker_body(next, error, error_mutex);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] { worker_body(next, error, error_mutex); });
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    // Fixed-order reduction over blocks: results do not depend on the
    // thread count.
    LossGradient out;
    if (want_grad) out.grad = zero_gradient(net);
    TermArray sq{};
    for (std::size_t i = 0; i < results.size(); ++i) {
        for (int t = 0; t < loss_term_count; ++t) sq[t] += results[i].sq_sum[t];
        if (want_grad)
            for (std::size_t k = 0; k < out.grad.size(); ++k) {
                out.grad[k].W += results[i].grad[k].W;
                out.grad[k].b += results[i].grad[k].b;
            }
    }

    out.loss.weights = weights;
    for (int t = 0; t < loss_term_count; ++t) {
        if (!counts[t]) continue;
        out.loss.terms[t] = sq[t] / static_cast<double>(counts[t]);
        out.loss.total += weights[t] * out.loss.terms[t];
    }
    return out;
}

} // namespace

LossBreakdown evaluate_loss(const Mlp& net, const ResidualBatch& batch, const TermArray& weights,
                            int threads) {
    return run_batch(net, batch, weights, threads, false).loss;
}

LossGradient loss_gradient(const Mlp& net, const ResidualBatch& batch, const TermArray& weights,
                           int threads) {
    return run_batch(net, batch, weights, threads, true);
}

} // namespace pinnlab
