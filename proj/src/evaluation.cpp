#include "ssn/evaluation.hpp"

#include <cstdio>
#include <ostream>

#include "ssn/error.hpp"
#include "ssn/kernels.hpp"
#include "ssn/random.hpp"

namespace ssn {

EvalResult evaluate(const Model& model, const LabeledDataset& dataset, const Features& features, double threshold) {
    const auto examples = encode(dataset, features, model.kind());
    const auto scores = score_parallel(model, examples);
    const auto dir = score_direction(model.kind());
    EvalResult r;
    std::vector<int> gold, pred;
    r.records.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const int p = threshold_classifier(scores[i], threshold, dir);
        r.records.push_back({dataset[i].w1, dataset[i].w2, dataset[i].label, p, scores[i]});
        gold.push_back(dataset[i].label);
        pred.push_back(p);
    }
    r.metrics = compute_metrics(gold, pred);
    return r;
}

void write_predictions_tsv(const EvalResult& result, std::ostream& out) {
    char buf[32];
    for (const auto& r : result.records) {
        std::snprintf(buf, sizeof buf, "%.3f", r.score);
        out << r.w1 << '\t' << r.w2 << '\t' << r.gold << '\t' << r.predicted << '\t' << buf << '\n';
    }
}

std::size_t cv_dev_size(std::size_t fold_train_size) { return (fold_train_size + 9) / 10; }

CvResult cross_validate(ModelKind kind, const LabeledDataset& d, const Features& features, const Hyperparams& h,
                        std::size_t k, std::span<const std::uint64_t> seeds, const ExperimentOptions& options) {
    const auto folds = kfold_partition(d, k, options.split_seed);
    CvResult out;
    std::vector<MetricSummary> fold_means;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const auto split = split_train_dev(folds[f].train, cv_dev_size(folds[f].train.size()),
                                           mix_seed(options.split_seed, f + 1));
        FoldResult fr;
        fr.fold = f;
        fr.n_train = split.train.size();
        fr.n_dev = split.dev.size();
        fr.n_test = folds[f].test.size();
        fr.runs = train_multi_seed(kind, split.train, split.dev, folds[f].test, features, h, seeds, options.runs);
        fold_means.push_back(fr.runs.mean);
        out.folds.push_back(std::move(fr));
    }
    out.mean = mean_of(fold_means);
    out.sd = stddev_of(fold_means);
    return out;
}

std::vector<std::size_t> curve_sizes(std::size_t pool, std::size_t step) {
    if (step == 0) throw Error("learning-curve step must be positive");
    std::vector<std::size_t> sizes;
    for (std::size_t n = 0; n < pool; n += step) sizes.push_back(n);
    sizes.push_back(pool);
    return sizes;
}

CurveResult learning_curve(ModelKind kind, const LabeledDataset& base_train, const LabeledDataset& extra_pool,
                           const LabeledDataset& dev, const LabeledDataset& test, const Features& features,
                           const Hyperparams& h, std::size_t step, std::span<const std::uint64_t> seeds,
                           const ExperimentOptions& options) {
    CurveResult out;
    out.pool_before_dedup = extra_pool.size();
    const auto pool = dedup_against(dedup_against(extra_pool, dev), test);
    out.pool_after_dedup = pool.size();
    Rng rng(options.split_seed);
    const auto order = rng.permutation(pool.size());
    const auto shuffled = pool.subset(order, pool.name());
    for (const std::size_t n : curve_sizes(shuffled.size(), step)) {
        std::vector<std::size_t> head(n);
        for (std::size_t i = 0; i < n; ++i) head[i] = i;
        const auto train_set = concat(base_train, shuffled.subset(head, pool.name()));
        CurvePoint pt;
        pt.n_train = train_set.size();
        pt.runs = train_multi_seed(kind, train_set, dev, test, features, h, seeds, options.runs);
        out.points.push_back(std::move(pt));
    }
    return out;
}

void write_results_header(std::ostream& out) { out << "config,n_train,seed,acc,p,r,f1\n"; }

void write_result_row(std::ostream& out, const std::string& config, std::size_t n_train, const std::string& seed,
                      const MetricSummary& m) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f", m.accuracy, m.precision, m.recall, m.f1);
    out << config << ',' << n_train << ',' << seed << ',' << buf << '\n';
}

void write_multi_seed_rows(std::ostream& out, const std::string& config, std::size_t n_train,
                           const MultiSeedResult& r) {
    for (const auto& run : r.runs) write_result_row(out, config, n_train, std::to_string(run.seed), summary(run.test));
    write_result_row(out, config, n_train, "mean", r.mean);
    write_result_row(out, config, n_train, "sd", r.sd);
}

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", 100.0 * fraction);
    return buf;
}

std::string format_metrics(const MetricSummary& m) {
    return "Acc " + percent(m.accuracy) + "  P " + percent(m.precision) + "  R " + percent(m.recall) + "  F1 " +
           percent(m.f1);
}

std::string format_mean_sd(const MetricSummary& mean, const MetricSummary& sd) {
    auto pair = [](double a, double b) { return percent(a) + "±" + percent(b); };
    return "Acc " + pair(mean.accuracy, sd.accuracy) + "  P " + pair(mean.precision, sd.precision) + "  R " +
           pair(mean.recall, sd.recall) + "  F1 " + pair(mean.f1, sd.f1);
}

}  // namespace ssn
