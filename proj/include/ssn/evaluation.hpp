#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ssn/dataset.hpp"
#include "ssn/metrics.hpp"
#include "ssn/model.hpp"
#include "ssn/training.hpp"

namespace ssn {

struct PairRecord {
    std::string w1;
    std::string w2;
    int gold = 0;
    int predicted = 0;
    double score = 0.0;
};

struct EvalResult {
    Metrics metrics;
    std::vector<PairRecord> records;  // dataset order
};

/// Scores every pair. The dataset must be covered by the feature tables
/// (run filter_oov first); an uncovered word raises a coverage failure.
EvalResult evaluate(const Model& model, const LabeledDataset& dataset, const Features& features, double threshold);

/// `w1<TAB>w2<TAB>gold<TAB>pred<TAB>score`, score with three decimals.
void write_predictions_tsv(const EvalResult& result, std::ostream& out);

struct FoldResult {
    std::size_t fold = 0;
    std::size_t n_train = 0;  // after carving the dev set
    std::size_t n_dev = 0;
    std::size_t n_test = 0;
    MultiSeedResult runs;
};

struct CvResult {
    std::vector<FoldResult> folds;
    MetricSummary mean;  // arithmetic mean of the per-fold seed means
    MetricSummary sd;    // spread of the per-fold seed means
};

struct ExperimentOptions {
    /// Seed of the fold partition, dev carving and pool shuffling.
    std::uint64_t split_seed = 1;
    MultiSeedOptions runs;
};

/// k-fold cross-validation. Each fold carves ceil(10%) of its training part
/// as the early-stopping dev set, then trains every seed.
CvResult cross_validate(ModelKind kind, const LabeledDataset& d, const Features& features, const Hyperparams& h,
                        std::size_t k, std::span<const std::uint64_t> seeds, const ExperimentOptions& options = {});

/// Size of the dev set carved from a cross-validation training fold.
std::size_t cv_dev_size(std::size_t fold_train_size);

struct CurvePoint {
    std::size_t n_train = 0;
    MultiSeedResult runs;
};

struct CurveResult {
    std::size_t pool_before_dedup = 0;
    std::size_t pool_after_dedup = 0;
    std::vector<CurvePoint> points;
};

/// Removes pool pairs occurring in dev or test, shuffles the rest once with
/// split_seed and trains on base + the first n pool pairs for n = 0, step,
/// 2 step, ... and finally the whole pool.
CurveResult learning_curve(ModelKind kind, const LabeledDataset& base_train, const LabeledDataset& extra_pool,
                           const LabeledDataset& dev, const LabeledDataset& test, const Features& features,
                           const Hyperparams& h, std::size_t step, std::span<const std::uint64_t> seeds,
                           const ExperimentOptions& options = {});

/// Pool sizes visited by learning_curve.
std::vector<std::size_t> curve_sizes(std::size_t pool, std::size_t step);

/// Results table `config,n_train,seed,acc,p,r,f1`. Aggregate rows use
/// `mean` and `sd` in the seed column.
void write_results_header(std::ostream& out);
void write_result_row(std::ostream& out, const std::string& config, std::size_t n_train, const std::string& seed,
                      const MetricSummary& m);
void write_multi_seed_rows(std::ostream& out, const std::string& config, std::size_t n_train,
                           const MultiSeedResult& r);

/// "80.1" style percentage.
std::string percent(double fraction);
/// One-line `Acc P R F1` block with one decimal, e.g. for terminal output.
std::string format_metrics(const MetricSummary& m);
std::string format_mean_sd(const MetricSummary& mean, const MetricSummary& sd);

}  // namespace ssn
