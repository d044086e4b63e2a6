#include "ssn/backprop.hpp"

#include <cmath>

namespace ssn {

double hinge_loss(double y, int y_true, double margin) {
    const double diff = static_cast<double>(y_true) - y;
    return std::abs(diff) > margin ? diff * diff : 0.0;
}

double hinge_derivative(double y, int y_true, double margin) {
    const double diff = static_cast<double>(y_true) - y;
    return std::abs(diff) > margin ? -2.0 * diff : 0.0;
}

SsnSignals ssn_signals(const SsnParams& p, const ForwardTrace& t, const Vector& x2, double dq_dy) {
    SsnSignals s;
    s.output = dq_dy * t.y * (1.0 - t.y);
    const Vector dd = p.output.row(0).transpose() * s.output;
    s.hidden = dd.cwiseProduct((1.0 - t.d.array().square()).matrix());
    const Vector dm = p.hidden.transpose() * s.hidden;
    s.map1 = dm.cwiseProduct(t.z2).cwiseProduct((1.0 - t.z1.array().square()).matrix());
    s.map2 = dm.cwiseProduct(t.z1).cwiseProduct((1.0 - t.z2.array().square()).matrix());
    const Vector dgated = p.map2.transpose() * s.map2;
    s.gate = dgated.cwiseProduct(x2).cwiseProduct((t.gate.array() * (1.0 - t.gate.array())).matrix());
    return s;
}

FfnSignals ffn_signals(const FfnParams& p, const FfnOutput& out, double dq_dy) {
    FfnSignals s;
    s.output = dq_dy * out.y * (1.0 - out.y);
    const Vector dd = p.output.row(0).transpose() * s.output;
    s.hidden = dd.cwiseProduct((1.0 - out.d.array().square()).matrix());
    return s;
}

FusionUpstream fusion_upstream(const FusionOutput& out, double dq_dy) {
    return {dq_dy * out.alpha, dq_dy * (1.0 - out.alpha),
            dq_dy * (out.a.y - out.b.y) * out.alpha * (1.0 - out.alpha)};
}

SsnParams ssn_backward_from(const SsnParams& p, const ForwardTrace& trace, const Vector& x1, const Vector& x2,
                            double dq_dy) {
    if (static_cast<std::size_t>(x1.size()) != p.embed_dim() || x2.size() != x1.size() ||
        trace.gate.size() != x1.size() || static_cast<std::size_t>(trace.m.size()) != p.z_dim() ||
        static_cast<std::size_t>(trace.d.size()) != p.d_dim())
        throw Error("trace does not match parameters");
    SsnParams g = SsnParams::zeros(p.embed_dim(), p.z_dim(), p.d_dim());
    if (dq_dy == 0.0) return g;
    const auto s = ssn_signals(p, trace, x2, dq_dy);
    g.gate = s.gate * x1.transpose();
    g.map1 = s.map1 * x1.transpose();
    g.map2 = s.map2 * trace.gated_noun.transpose();
    g.hidden = s.hidden * trace.m.transpose();
    g.output = s.output * trace.d.transpose();
    return g;
}

SsnParams ssn_backward(const SsnParams& p, const ForwardTrace& trace, const Vector& x1, const Vector& x2,
                       int y_true, double margin) {
    return ssn_backward_from(p, trace, x1, x2, hinge_derivative(trace.y, y_true, margin));
}

FfnParams ffn_backward(const FfnParams& p, const FfnOutput& out, int y_true, double margin) {
    FfnParams g = FfnParams::zeros(p.embed_dim(), p.d_dim());
    const double dq_dy = hinge_derivative(out.y, y_true, margin);
    if (dq_dy == 0.0) return g;
    const auto s = ffn_signals(p, out, dq_dy);
    g.hidden = s.hidden * out.input.transpose();
    g.output = s.output * out.d.transpose();
    return g;
}

FusionParams fusion_backward(const FusionParams& p, const FusionOutput& out, const Vector& x1a,
                             const Vector& x2a, const Vector& x1b, const Vector& x2b, int y_true,
                             double margin) {
    const double dq_dy = hinge_derivative(out.y, y_true, margin);
    FusionParams g;
    if (dq_dy == 0.0) {
        g = zeros_like(p);
        return g;
    }
    const auto up = fusion_upstream(out, dq_dy);
    g.net_a = ssn_backward_from(p.net_a, out.a, x1a, x2a, up.dy_a);
    g.net_b = ssn_backward_from(p.net_b, out.b, x1b, x2b, up.dy_b);
    g.alpha_logit = Matrix::Constant(1, 1, up.dlogit);
    return g;
}

double ssn_loss(const SsnParams& p, const Vector& x1, const Vector& x2, int y_true, double margin) {
    return hinge_loss(ssn_forward(p, x1, x2).y, y_true, margin);
}

double ffn_loss(const FfnParams& p, const Vector& x1, const Vector& x2, int y_true, double margin) {
    return hinge_loss(ffn_forward(p, x1, x2).y, y_true, margin);
}

double fusion_loss(const FusionParams& p, const Vector& x1a, const Vector& x2a, const Vector& x1b,
                   const Vector& x2b, int y_true, double margin) {
    return hinge_loss(fusion_forward(p, x1a, x2a, x1b, x2b).y, y_true, margin);
}

}  // namespace ssn
