#pragma once

#include <cstddef>
#include <utility>

#include "ssn/error.hpp"
#include "ssn/model.hpp"

namespace ssn {

/// Squared error applied only outside the margin: (t - y)^2 if |t - y| > margin,
/// else 0. The boundary itself belongs to the dead zone.
double hinge_loss(double y, int y_true, double margin = 0.4);

/// dq/dy of hinge_loss; exactly 0 inside the dead zone.
double hinge_derivative(double y, int y_true, double margin = 0.4);

/// Error signals at the pre-activation of every block for one example. The
/// gradient of a block is the outer product of its signal with the block's
/// input (x1, x1, gated noun, m and d respectively).
struct SsnSignals {
    Vector gate;
    Vector map1;
    Vector map2;
    Vector hidden;
    double output = 0.0;
};

SsnSignals ssn_signals(const SsnParams& p, const ForwardTrace& t, const Vector& x2, double dq_dy);

struct FfnSignals {
    Vector hidden;
    double output = 0.0;
};

FfnSignals ffn_signals(const FfnParams& p, const FfnOutput& out, double dq_dy);

/// Upstream derivatives of the fused prediction with respect to each subnet
/// output and to alpha_logit.
struct FusionUpstream {
    double dy_a = 0.0;
    double dy_b = 0.0;
    double dlogit = 0.0;
};

FusionUpstream fusion_upstream(const FusionOutput& out, double dq_dy);

/// Gradient of hinge_loss(ssn_forward(p, x1, x2).y, y_true) with respect to
/// every block. All zeros inside the dead zone.
SsnParams ssn_backward(const SsnParams& p, const ForwardTrace& trace, const Vector& x1, const Vector& x2,
                       int y_true, double margin = 0.4);

/// Same as ssn_backward for an arbitrary upstream derivative dq/dy.
SsnParams ssn_backward_from(const SsnParams& p, const ForwardTrace& trace, const Vector& x1, const Vector& x2,
                            double dq_dy);

FfnParams ffn_backward(const FfnParams& p, const FfnOutput& out, int y_true, double margin = 0.4);

FusionParams fusion_backward(const FusionParams& p, const FusionOutput& out, const Vector& x1a,
                             const Vector& x2a, const Vector& x1b, const Vector& x2b, int y_true,
                             double margin = 0.4);

/// Per-example loss functions matching the backward passes above.
double ssn_loss(const SsnParams& p, const Vector& x1, const Vector& x2, int y_true, double margin = 0.4);
double ffn_loss(const FfnParams& p, const Vector& x1, const Vector& x2, int y_true, double margin = 0.4);
double fusion_loss(const FusionParams& p, const Vector& x1a, const Vector& x2a, const Vector& x1b,
                   const Vector& x2b, int y_true, double margin = 0.4);

// --- generic parameter arithmetic -------------------------------------------

template <typename P>
P zeros_like(const P& p) {
    P out = p;
    for (auto& b : out.blocks()) b.values.setZero();
    return out;
}

template <typename P>
void check_same_shape(const P& a, const P& b) {
    const auto ba = a.blocks();
    const auto bb = b.blocks();
    if (ba.size() != bb.size()) throw Error("parameter block count mismatch");
    for (std::size_t i = 0; i < ba.size(); ++i)
        if (ba[i].values.rows() != bb[i].values.rows() || ba[i].values.cols() != bb[i].values.cols())
            throw Error("shape mismatch in block " + std::string(ba[i].name));
}

/// dst += src, blockwise.
template <typename P>
void add_into(P& dst, const P& src) {
    check_same_shape(dst, src);
    auto bd = dst.blocks();
    const auto bs = src.blocks();
    for (std::size_t i = 0; i < bd.size(); ++i) bd[i].values += bs[i].values;
}

template <typename P>
std::size_t parameter_count(const P& p) {
    std::size_t n = 0;
    for (const auto& b : p.blocks()) n += static_cast<std::size_t>(b.values.size());
    return n;
}

template <typename P>
bool all_zero(const P& p) {
    for (const auto& b : p.blocks())
        if ((b.values.array() != 0.0).any()) return false;
    return true;
}

/// Central differences (f(w + eps) - f(w - eps)) / (2 eps) for every entry.
template <typename P, typename LossFn>
P finite_diff_grad(LossFn&& loss, const P& params, double eps) {
    if (!(eps > 0.0)) throw Error("finite-difference step must be positive");
    P work = params;
    P grad = zeros_like(params);
    auto wb = work.blocks();
    auto gb = grad.blocks();
    for (std::size_t b = 0; b < wb.size(); ++b) {
        auto& w = wb[b].values;
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            for (Eigen::Index i = 0; i < w.rows(); ++i) {
                const double saved = w(i, j);
                w(i, j) = saved + eps;
                const double up = loss(std::as_const(work));
                w(i, j) = saved - eps;
                const double down = loss(std::as_const(work));
                w(i, j) = saved;
                gb[b].values(i, j) = (up - down) / (2.0 * eps);
            }
        }
    }
    return grad;
}

}  // namespace ssn
