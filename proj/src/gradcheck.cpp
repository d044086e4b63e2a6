#include "ssn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "ssn/backprop.hpp"
#include "ssn/error.hpp"
#include "ssn/random.hpp"

namespace ssn {

double relative_error(double analytic, double numeric, double floor) {
    const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
    return std::abs(analytic - numeric) / denom;
}

namespace {

Vector random_vector(std::size_t n, Rng& rng) {
    Vector v(static_cast<Eigen::Index>(n));
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

template <typename P>
void merge(GradCheckReport& report, const P& analytic, const P& numeric) {
    const auto a = analytic.blocks();
    const auto n = numeric.blocks();
    if (report.blocks.empty())
        for (const auto& b : a) report.blocks.push_back({std::string(b.name), 0.0});
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (Eigen::Index j = 0; j < a[i].values.size(); ++j) {
            const double e = relative_error(a[i].values.data()[j], n[i].values.data()[j]);
            report.blocks[i].max_rel_error = std::max(report.blocks[i].max_rel_error, e);
            report.max_rel_error = std::max(report.max_rel_error, e);
        }
    }
}

// Label on the far side of the prediction: |t - y| >= 0.5 > margin.
int far_label(double y) { return y < 0.5 ? 1 : 0; }
// Label on the near side; the dead zone needs |t - y| <= margin.
int near_label(double y) { return y < 0.5 ? 0 : 1; }

struct Dims {
    std::size_t embed, embed_b, z, d;
};

Dims draw_dims(Rng& rng) {
    return {1 + rng.uniform_index(6), 1 + rng.uniform_index(6), 1 + rng.uniform_index(5), 1 + rng.uniform_index(3)};
}

Hyperparams small_hyper(const Dims& dims) {
    Hyperparams h;
    h.embed_dim = dims.embed;
    h.embed_dim_b = dims.embed_b;
    h.z_dim = dims.z;
    h.d_dim = dims.d;
    return h;
}

// Scales the initial weights up so gradients are not uniformly tiny.
template <typename P>
void inflate(P& p, double factor) {
    for (auto& b : p.blocks()) b.values *= factor;
}

}  // namespace

GradCheckReport grad_check(ModelKind kind, std::size_t configs, std::uint64_t seed, double epsilon, double tolerance) {
    if (kind == ModelKind::Cosine) throw Error("the cosine baseline has no gradients");
    GradCheckReport report;
    report.kind = kind;
    report.configs = configs;
    report.epsilon = epsilon;
    report.tolerance = tolerance;
    Rng rng(seed);
    const double margin = 0.4;

    for (std::size_t c = 0; c < configs; ++c) {
        const Dims dims = draw_dims(rng);
        const auto h = small_hyper(dims);
        const auto pseed = rng.next();
        const Vector x1 = random_vector(dims.embed, rng), x2 = random_vector(dims.embed, rng);
        const Vector x1b = random_vector(dims.embed_b, rng), x2b = random_vector(dims.embed_b, rng);
        if (kind == ModelKind::Ssn) {
            auto p = init_params(h, pseed);
            inflate(p, 2.0);
            const auto trace = ssn_forward(p, x1, x2);
            const int t = far_label(trace.y);
            const auto analytic = ssn_backward(p, trace, x1, x2, t, margin);
            const auto numeric = finite_diff_grad(
                [&](const SsnParams& q) { return ssn_loss(q, x1, x2, t, margin); }, p, epsilon);
            merge(report, analytic, numeric);
        } else if (kind == ModelKind::Ffn) {
            auto p = init_ffn(h, pseed);
            inflate(p, 2.0);
            const auto out = ffn_forward(p, x1, x2);
            const int t = far_label(out.y);
            const auto analytic = ffn_backward(p, out, t, margin);
            const auto numeric = finite_diff_grad(
                [&](const FfnParams& q) { return ffn_loss(q, x1, x2, t, margin); }, p, epsilon);
            merge(report, analytic, numeric);
        } else {
            auto p = init_fusion(h, pseed);
            inflate(p.net_a, 2.0);
            inflate(p.net_b, 2.0);
            p.alpha_logit(0, 0) = rng.uniform(-1.5, 1.5);
            const auto out = fusion_forward(p, x1, x2, x1b, x2b);
            const int t = far_label(out.y);
            const auto analytic = fusion_backward(p, out, x1, x2, x1b, x2b, t, margin);
            const auto numeric = finite_diff_grad(
                [&](const FusionParams& q) { return fusion_loss(q, x1, x2, x1b, x2b, t, margin); }, p, epsilon);
            merge(report, analytic, numeric);
        }
    }

    // Dead zone: redraw until the prediction sits confidently on one side,
    // then use that side's label so |t - y| < 0.35.
    {
        const Dims dims{4, 3, 3, 2};
        const auto h = small_hyper(dims);
        bool ok = false;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const Vector x1 = random_vector(dims.embed, rng), x2 = random_vector(dims.embed, rng);
            const Vector x1b = random_vector(dims.embed_b, rng), x2b = random_vector(dims.embed_b, rng);
            const auto pseed = rng.next();
            auto confident = [](double y) { return std::abs(y - 0.5) > 0.15; };
            if (kind == ModelKind::Ssn) {
                auto p = init_params(h, pseed);
                inflate(p, 3.0);
                const auto trace = ssn_forward(p, x1, x2);
                if (!confident(trace.y)) continue;
                const int t = near_label(trace.y);
                const auto analytic = ssn_backward(p, trace, x1, x2, t, margin);
                const auto numeric = finite_diff_grad(
                    [&](const SsnParams& q) { return ssn_loss(q, x1, x2, t, margin); }, p, epsilon);
                ok = hinge_loss(trace.y, t, margin) == 0.0 && all_zero(analytic) && all_zero(numeric);
            } else if (kind == ModelKind::Ffn) {
                auto p = init_ffn(h, pseed);
                inflate(p, 3.0);
                const auto out = ffn_forward(p, x1, x2);
                if (!confident(out.y)) continue;
                const int t = near_label(out.y);
                const auto analytic = ffn_backward(p, out, t, margin);
                const auto numeric = finite_diff_grad(
                    [&](const FfnParams& q) { return ffn_loss(q, x1, x2, t, margin); }, p, epsilon);
                ok = hinge_loss(out.y, t, margin) == 0.0 && all_zero(analytic) && all_zero(numeric);
            } else {
                auto p = init_fusion(h, pseed);
                inflate(p.net_a, 3.0);
                inflate(p.net_b, 3.0);
                const auto out = fusion_forward(p, x1, x2, x1b, x2b);
                if (!confident(out.y)) continue;
                const int t = near_label(out.y);
                const auto analytic = fusion_backward(p, out, x1, x2, x1b, x2b, t, margin);
                const auto numeric = finite_diff_grad(
                    [&](const FusionParams& q) { return fusion_loss(q, x1, x2, x1b, x2b, t, margin); }, p,
                    epsilon);
                ok = hinge_loss(out.y, t, margin) == 0.0 && all_zero(analytic) && all_zero(numeric);
            }
            break;
        }
        report.dead_zone_ok = ok;
    }
    return report;
}

}  // namespace ssn
