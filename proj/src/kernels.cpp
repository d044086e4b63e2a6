#include "ssn/kernels.hpp"

#include "ssn/backprop.hpp"

namespace ssn {

namespace {

// g.col(j) += in_k[j] * signal_k for the listed examples, parallel over j.
void accumulate_columns(Matrix& g, const std::vector<const Vector*>& signals,
                        const std::vector<const Vector*>& inputs) {
    const long cols = static_cast<long>(g.cols());
    const std::size_t n = signals.size();
#pragma omp parallel for schedule(static)
    for (long j = 0; j < cols; ++j) {
        auto col = g.col(j);
        for (std::size_t k = 0; k < n; ++k) col += (*inputs[k])[j] * *signals[k];
    }
}

void accumulate_row(Matrix& g, const std::vector<double>& signals, const std::vector<const Vector*>& inputs) {
    const long cols = static_cast<long>(g.cols());
    const std::size_t n = signals.size();
    for (long j = 0; j < cols; ++j)
        for (std::size_t k = 0; k < n; ++k) g(0, j) += (*inputs[k])[j] * signals[k];
}

struct SsnStage {
    ForwardTrace trace;
    SsnSignals signals;
    double loss = 0.0;
    bool active = false;
};

// Fills the error signals of a stage whose trace is already set.
void ssn_stage(const SsnParams& p, const Vector& x2, double dq_dy, SsnStage& st) {
    st.active = dq_dy != 0.0;
    if (st.active) st.signals = ssn_signals(p, st.trace, x2, dq_dy);
}

// Outer-product reduction for one similarity network over the active stages.
void reduce_ssn(SsnParams& g, const std::vector<const SsnStage*>& stages, const std::vector<const Vector*>& x1s) {
    std::vector<const Vector*> s_gate, s_map1, s_map2, s_hidden, in_gated, in_m, in_d;
    std::vector<double> s_out;
    for (const auto* st : stages) {
        s_gate.push_back(&st->signals.gate);
        s_map1.push_back(&st->signals.map1);
        s_map2.push_back(&st->signals.map2);
        s_hidden.push_back(&st->signals.hidden);
        s_out.push_back(st->signals.output);
        in_gated.push_back(&st->trace.gated_noun);
        in_m.push_back(&st->trace.m);
        in_d.push_back(&st->trace.d);
    }
    accumulate_columns(g.gate, s_gate, x1s);
    accumulate_columns(g.map1, s_map1, x1s);
    accumulate_columns(g.map2, s_map2, in_gated);
    accumulate_columns(g.hidden, s_hidden, in_m);
    accumulate_row(g.output, s_out, in_d);
}

double ordered_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace

double predict(const SsnParams& p, const Example& ex) { return ssn_forward(p, *ex.x1, *ex.x2).y; }
double predict(const FfnParams& p, const Example& ex) { return ffn_forward(p, *ex.x1, *ex.x2).y; }
double predict(const FusionParams& p, const Example& ex) {
    return fusion_forward(p, *ex.x1, *ex.x2, *ex.x1b, *ex.x2b).y;
}

// --- similarity network -----------------------------------------------------

double batch_gradient_serial(const SsnParams& params, std::span<const Example> batch, double margin,
                             SsnParams& grad) {
    check_same_shape(params, grad);
    for (auto& b : grad.blocks()) b.values.setZero();
    double loss = 0.0;
    for (const auto& ex : batch) {
        const auto trace = ssn_forward(params, *ex.x1, *ex.x2);
        loss += hinge_loss(trace.y, ex.label, margin);
        add_into(grad, ssn_backward(params, trace, *ex.x1, *ex.x2, ex.label, margin));
    }
    return loss;
}

double batch_gradient_parallel(const SsnParams& params, std::span<const Example> batch, double margin,
                               SsnParams& grad) {
    check_same_shape(params, grad);
    for (auto& b : grad.blocks()) b.values.setZero();
    const long n = static_cast<long>(batch.size());
    std::vector<SsnStage> stages(batch.size());
    std::vector<double> losses(batch.size());
#pragma omp parallel for schedule(static)
    for (long k = 0; k < n; ++k) {
        const auto& ex = batch[static_cast<std::size_t>(k)];
        auto& st = stages[static_cast<std::size_t>(k)];
        st.trace = ssn_forward(params, *ex.x1, *ex.x2);
        losses[static_cast<std::size_t>(k)] = hinge_loss(st.trace.y, ex.label, margin);
        ssn_stage(params, *ex.x2, hinge_derivative(st.trace.y, ex.label, margin), st);
    }
    std::vector<const SsnStage*> active;
    std::vector<const Vector*> x1s;
    for (std::size_t k = 0; k < batch.size(); ++k) {
        if (!stages[k].active) continue;
        active.push_back(&stages[k]);
        x1s.push_back(batch[k].x1);
    }
    reduce_ssn(grad, active, x1s);
    return ordered_sum(losses);
}

// --- feed-forward baseline ----------------------------------------------------

double batch_gradient_serial(const FfnParams& params, std::span<const Example> batch, double margin,
                             FfnParams& grad) {
    check_same_shape(params, grad);
    for (auto& b : grad.blocks()) b.values.setZero();
    double loss = 0.0;
    for (const auto& ex : batch) {
        const auto out = ffn_forward(params, *ex.x1, *ex.x2);
        loss += hinge_loss(out.y, ex.label, margin);
        add_into(grad, ffn_backward(params, out, ex.label, margin));
    }
    return loss;
}

double batch_gradient_parallel(const FfnParams& params, std::span<const Example> batch, double margin,
                               FfnParams& grad) {
    check_same_shape(params, grad);
    for (auto& b : grad.blocks()) b.values.setZero();
    const long n = static_cast<long>(batch.size());
    std::vector<FfnOutput> outs(batch.size());
    std::vector<FfnSignals> sigs(batch.size());
    std::vector<double> losses(batch.size());
    std::vector<char> active(batch.size());
#pragma omp parallel for schedule(static)
    for (long k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const auto& ex = batch[i];
        outs[i] = ffn_forward(params, *ex.x1, *ex.x2);
        losses[i] = hinge_loss(outs[i].y, ex.label, margin);
        const double dq_dy = hinge_derivative(outs[i].y, ex.label, margin);
        active[i] = dq_dy != 0.0;
        if (active[i]) sigs[i] = ffn_signals(params, outs[i], dq_dy);
    }
    std::vector<const Vector*> s_hidden, in_x, in_d;
    std::vector<double> s_out;
    for (std::size_t k = 0; k < batch.size(); ++k) {
        if (!active[k]) continue;
        s_hidden.push_back(&sigs[k].hidden);
        s_out.push_back(sigs[k].output);
        in_x.push_back(&outs[k].input);
        in_d.push_back(&outs[k].d);
    }
    accumulate_columns(grad.hidden, s_hidden, in_x);
    accumulate_row(grad.output, s_out, in_d);
    return ordered_sum(losses);
}

// --- fusion -----------------------------------------------------------------

double batch_gradient_serial(const FusionParams& params, std::span<const Example> batch, double margin,
                             FusionParams& grad) {
    check_same_shape(params, grad);
    for (auto& b : grad.blocks()) b.values.setZero();
    double loss = 0.0;
    for (const auto& ex : batch) {
        const auto out = fusion_forward(params, *ex.x1, *ex.x2, *ex.x1b, *ex.x2b);
        loss += hinge_loss(out.y, ex.label, margin);
        add_into(grad, fusion_backward(params, out, *ex.x1, *ex.x2, *ex.x1b, *ex.x2b, ex.label, margin));
    }
    return loss;
}

double batch_gradient_parallel(const FusionParams& params, std::span<const Example> batch, double margin,
                               FusionParams& grad) {
    check_same_shape(params, grad);
    for (auto& b : grad.blocks()) b.values.setZero();
    const long n = static_cast<long>(batch.size());
    std::vector<SsnStage> sa(batch.size()), sb(batch.size());
    std::vector<double> losses(batch.size()), dlogit(batch.size());
    std::vector<char> active(batch.size());
#pragma omp parallel for schedule(static)
    for (long k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const auto& ex = batch[i];
        FusionOutput out = fusion_forward(params, *ex.x1, *ex.x2, *ex.x1b, *ex.x2b);
        losses[i] = hinge_loss(out.y, ex.label, margin);
        const double dq_dy = hinge_derivative(out.y, ex.label, margin);
        active[i] = dq_dy != 0.0;
        const auto up = fusion_upstream(out, dq_dy);
        sa[i].trace = std::move(out.a);
        sb[i].trace = std::move(out.b);
        if (!active[i]) continue;
        dlogit[i] = up.dlogit;
        ssn_stage(params.net_a, *ex.x2, up.dy_a, sa[i]);
        ssn_stage(params.net_b, *ex.x2b, up.dy_b, sb[i]);
    }
    std::vector<const SsnStage*> act_a, act_b;
    std::vector<const Vector*> x1a, x1b;
    double alpha_grad = 0.0;
    for (std::size_t k = 0; k < batch.size(); ++k) {
        if (!active[k]) continue;
        if (sa[k].active) {
            act_a.push_back(&sa[k]);
            x1a.push_back(batch[k].x1);
        }
        if (sb[k].active) {
            act_b.push_back(&sb[k]);
            x1b.push_back(batch[k].x1b);
        }
        alpha_grad += dlogit[k];
    }
    reduce_ssn(grad.net_a, act_a, x1a);
    reduce_ssn(grad.net_b, act_b, x1b);
    grad.alpha_logit(0, 0) = alpha_grad;
    return ordered_sum(losses);
}

// --- scoring ----------------------------------------------------------------

std::vector<double> score_serial(const Model& model, std::span<const Example> examples) {
    std::vector<double> out;
    out.reserve(examples.size());
    for (const auto& ex : examples) out.push_back(score(model, ex));
    return out;
}

std::vector<double> score_parallel(const Model& model, std::span<const Example> examples) {
    std::vector<double> out(examples.size());
    const long n = static_cast<long>(examples.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = score(model, examples[static_cast<std::size_t>(i)]);
    return out;
}

}  // namespace ssn
