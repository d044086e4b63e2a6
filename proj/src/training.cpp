#include "ssn/training.hpp"

#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>

#include "ssn/adadelta.hpp"
#include "ssn/error.hpp"
#include "ssn/kernels.hpp"
#include "ssn/random.hpp"

namespace ssn {

EarlyStopping::EarlyStopping(std::size_t patience) : patience_(patience) {
    if (patience_ == 0) throw Error("patience must be positive");
}

bool EarlyStopping::observe(double score) {
    ++epoch_;
    if (score > best_score_) {
        best_score_ = score;
        best_epoch_ = epoch_;
        since_best_ = 0;
        return true;
    }
    ++since_best_;
    return false;
}

Hyperparams resolve_dims(const Hyperparams& h, const Features& features, ModelKind kind) {
    if (!features.a) throw Error("no embedding table supplied");
    Hyperparams out = h;
    out.embed_dim = features.a->dim();
    out.embed_dim_b = 0;
    if (kind == ModelKind::Fusion) {
        if (!features.b) throw Error("fusion needs two embedding tables");
        out.embed_dim_b = features.b->dim();
    }
    out.validate();
    return out;
}

Metrics evaluate_examples(const Model& model, std::span<const Example> examples, double threshold, bool parallel) {
    const auto scores = parallel ? score_parallel(model, examples) : score_serial(model, examples);
    const auto dir = score_direction(model.kind());
    std::vector<int> gold, pred;
    gold.reserve(examples.size());
    pred.reserve(examples.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
        gold.push_back(examples[i].label);
        pred.push_back(threshold_classifier(scores[i], threshold, dir));
    }
    return compute_metrics(gold, pred);
}

namespace {

SsnParams initial(const SsnParams*, const Hyperparams& h, std::uint64_t seed) { return init_params(h, seed); }
FfnParams initial(const FfnParams*, const Hyperparams& h, std::uint64_t seed) { return init_ffn(h, seed); }
FusionParams initial(const FusionParams*, const Hyperparams& h, std::uint64_t seed) { return init_fusion(h, seed); }

Metrics dev_metrics(const std::vector<double>& scores, std::span<const Example> dev, double threshold) {
    std::vector<int> gold, pred;
    gold.reserve(dev.size());
    pred.reserve(dev.size());
    for (std::size_t i = 0; i < dev.size(); ++i) {
        gold.push_back(dev[i].label);
        pred.push_back(threshold_classifier(scores[i], threshold));
    }
    return compute_metrics(gold, pred);
}

template <typename P>
TrainResult train_network(const std::vector<Example>& train_ex, const std::vector<Example>& dev_ex,
                          const Hyperparams& h, std::uint64_t seed, const TrainOptions& options) {
    P params = initial(static_cast<const P*>(nullptr), h, seed);
    P best = params;
    P grad = zeros_like(params);
    AdaDeltaState<P> state(params, h.adadelta_rho, h.adadelta_eps);
    EarlyStopping stopping(h.patience);
    TrainHistory history;
    std::vector<Example> batch;
    batch.reserve(h.batch_size);

    for (std::size_t epoch = 1; epoch <= h.max_epochs; ++epoch) {
        Rng rng(seed, epoch);
        const auto order = rng.permutation(train_ex.size());
        double loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += h.batch_size) {
            const std::size_t stop = std::min(order.size(), start + h.batch_size);
            batch.clear();
            for (std::size_t i = start; i < stop; ++i) batch.push_back(train_ex[order[i]]);
            loss += options.parallel_kernels ? batch_gradient_parallel(params, batch, h.hinge_margin, grad)
                                             : batch_gradient_serial(params, batch, h.hinge_margin, grad);
            adadelta_step(params, grad, state);
        }
        const auto scores = predict_all(params, std::span<const Example>(dev_ex), options.parallel_kernels);
        EpochRecord rec{epoch, loss, dev_metrics(scores, dev_ex, h.classification_threshold)};
        history.epochs.push_back(rec);
        if (stopping.observe(rec.dev.f1)) best = params;
        if (stopping.should_stop()) {
            history.stop = StopReason::Patience;
            break;
        }
    }
    history.best_epoch = stopping.best_epoch();
    return {Model{h, std::move(best)}, std::move(history)};
}

TrainResult train_cosine(const std::vector<Example>& dev_ex, const Hyperparams& h) {
    std::vector<ScoredLabel> scored;
    scored.reserve(dev_ex.size());
    for (const auto& ex : dev_ex) scored.push_back({cosine_score(*ex.x1, *ex.x2), ex.label});
    const auto choice = tune_threshold(scored, ScoreDirection::LowerIsMetaphor);
    CosineParams p;
    p.threshold(0, 0) = choice.threshold;
    Model model{h, p};
    TrainHistory history;
    history.epochs.push_back({1, 0.0, evaluate_examples(model, dev_ex, choice.threshold, false)});
    history.best_epoch = 1;
    history.stop = StopReason::MaxEpochs;
    return {std::move(model), std::move(history)};
}

}  // namespace

TrainResult train(ModelKind kind, const LabeledDataset& train_set, const LabeledDataset& dev,
                  const Features& features, const Hyperparams& h, std::uint64_t seed, const TrainOptions& options) {
    if (train_set.empty()) throw Error("training set is empty");
    if (dev.empty()) throw Error("development set is empty");
    const Hyperparams hp = resolve_dims(h, features, kind);
    const auto train_ex = encode(train_set, features, kind);
    const auto dev_ex = encode(dev, features, kind);
    switch (kind) {
        case ModelKind::Ssn: return train_network<SsnParams>(train_ex, dev_ex, hp, seed, options);
        case ModelKind::Ffn: return train_network<FfnParams>(train_ex, dev_ex, hp, seed, options);
        case ModelKind::Fusion: return train_network<FusionParams>(train_ex, dev_ex, hp, seed, options);
        case ModelKind::Cosine: return train_cosine(dev_ex, hp);
    }
    throw Error("unknown model kind");
}

void write_history_csv(const TrainHistory& history, std::ostream& out) {
    out << "epoch,loss,dev_acc,dev_p,dev_r,dev_f\n";
    out << std::setprecision(17);
    for (const auto& r : history.epochs)
        out << r.epoch << ',' << r.loss << ',' << r.dev.accuracy << ',' << r.dev.precision << ',' << r.dev.recall
            << ',' << r.dev.f1 << '\n';
}

void write_history_csv(const TrainHistory& history, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    write_history_csv(history, out);
}

MultiSeedResult train_multi_seed(ModelKind kind, const LabeledDataset& train_set, const LabeledDataset& dev,
                                 const LabeledDataset& test, const Features& features, const Hyperparams& h,
                                 std::span<const std::uint64_t> seeds, const MultiSeedOptions& options) {
    if (seeds.empty()) throw Error("at least one seed is required");
    if (test.empty()) throw Error("test set is empty");
    const auto test_ex = encode(test, features, kind);
    MultiSeedResult result;
    result.runs.resize(seeds.size());
    std::vector<std::exception_ptr> errors(seeds.size());
    std::mutex callback_mutex;
    const int jobs = std::max(1, options.jobs);
    TrainOptions topt;
    topt.parallel_kernels = options.parallel_kernels && jobs == 1;
    const long n = static_cast<long>(seeds.size());

#pragma omp parallel for num_threads(jobs) schedule(dynamic, 1) if (jobs > 1)
    for (long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            auto tr = train(kind, train_set, dev, features, h, seeds[idx], topt);
            RunRecord rec;
            rec.seed = seeds[idx];
            rec.best_epoch = tr.history.best_epoch;
            rec.epochs_run = tr.history.epochs.size();
            rec.dev = tr.history.best().dev;
            rec.test = evaluate_examples(tr.model, test_ex, default_threshold(tr.model), topt.parallel_kernels);
            result.runs[idx] = rec;
            if (options.on_run) {
                std::lock_guard lock(callback_mutex);
                options.on_run(idx, tr);
            }
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<Metrics> tests;
    for (const auto& r : result.runs) tests.push_back(r.test);
    result.mean = mean_of(tests);
    result.sd = stddev_of(tests);
    return result;
}

}  // namespace ssn
