#pragma once

//
// AdaDelta (Zeiler, 2012): per-entry running averages of squared gradients
// and squared updates; no global learning rate.
//

#include <cmath>

#include "ssn/backprop.hpp"

namespace ssn {

template <typename P>
struct AdaDeltaState {
    P sq_grad;    // E[g^2]
    P sq_update;  // E[dx^2]
    double rho = 0.95;
    double eps = 1e-6;

    AdaDeltaState(const P& shape, double rho_, double eps_)
        : sq_grad(zeros_like(shape)), sq_update(zeros_like(shape)), rho(rho_), eps(eps_) {}
};

/// One update, elementwise:
///   E[g^2]  <- rho E[g^2] + (1 - rho) g^2
///   dx      <- -sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) * g
///   E[dx^2] <- rho E[dx^2] + (1 - rho) dx^2
///   x       <- x + dx
template <typename P>
void adadelta_step(P& params, const P& grads, AdaDeltaState<P>& st) {
    check_same_shape(params, grads);
    check_same_shape(params, st.sq_grad);
    auto xb = params.blocks();
    const auto gb = grads.blocks();
    auto eg = st.sq_grad.blocks();
    auto ex = st.sq_update.blocks();
    const double rho = st.rho, eps = st.eps;
    for (std::size_t b = 0; b < xb.size(); ++b) {
        auto& x = xb[b].values;
        const auto& g = gb[b].values;
        auto& g2 = eg[b].values;
        auto& u2 = ex[b].values;
        const Eigen::Index n = x.size();
        double* xd = x.data();
        const double* gd = g.data();
        double* g2d = g2.data();
        double* u2d = u2.data();
        for (Eigen::Index i = 0; i < n; ++i) {
            g2d[i] = rho * g2d[i] + (1.0 - rho) * gd[i] * gd[i];
            const double dx = -(std::sqrt(u2d[i] + eps) / std::sqrt(g2d[i] + eps)) * gd[i];
            u2d[i] = rho * u2d[i] + (1.0 - rho) * dx * dx;
            xd[i] += dx;
        }
    }
}

}  // namespace ssn
