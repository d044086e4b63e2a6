#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "ssn/dataset.hpp"
#include "ssn/metrics.hpp"
#include "ssn/model.hpp"

namespace ssn {

/// Tracks the best dev score and how many epochs have passed without a
/// strict improvement. Epochs are numbered from 1.
class EarlyStopping {
public:
    explicit EarlyStopping(std::size_t patience);

    /// Records the score of the next epoch; true when it strictly improves
    /// on every earlier score.
    bool observe(double score);
    bool should_stop() const { return since_best_ >= patience_; }

    std::size_t best_epoch() const { return best_epoch_; }
    double best_score() const { return best_score_; }
    std::size_t epochs_seen() const { return epoch_; }

private:
    std::size_t patience_;
    std::size_t epoch_ = 0;
    std::size_t best_epoch_ = 0;
    std::size_t since_best_ = 0;
    double best_score_ = -1.0;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double loss = 0.0;
    Metrics dev;
};

enum class StopReason { Patience, MaxEpochs };

struct TrainHistory {
    std::vector<EpochRecord> epochs;
    std::size_t best_epoch = 0;
    StopReason stop = StopReason::MaxEpochs;

    const EpochRecord& best() const { return epochs.at(best_epoch - 1); }
};

struct TrainOptions {
    /// Use the OpenMP batch kernels; the serial reference otherwise.
    bool parallel_kernels = true;
};

struct TrainResult {
    Model model;
    TrainHistory history;
};

/// Hyperparameters with embed_dim / embed_dim_b taken from the feature tables.
Hyperparams resolve_dims(const Hyperparams& h, const Features& features, ModelKind kind);

/// Early-stopped training. Per epoch: shuffle with a stream derived from
/// (seed, epoch), one AdaDelta step per minibatch of summed gradients, then
/// dev F1 at the classification threshold. Returns the parameters of the
/// first epoch reaching the best dev F1. The cosine baseline has no weights;
/// its threshold is tuned on dev and the history holds one record.
TrainResult train(ModelKind kind, const LabeledDataset& train_set, const LabeledDataset& dev,
                  const Features& features, const Hyperparams& h, std::uint64_t seed,
                  const TrainOptions& options = {});

void write_history_csv(const TrainHistory& history, std::ostream& out);
void write_history_csv(const TrainHistory& history, const std::filesystem::path& path);

struct RunRecord {
    std::uint64_t seed = 0;
    std::size_t best_epoch = 0;
    std::size_t epochs_run = 0;
    Metrics dev;
    Metrics test;
};

struct MultiSeedResult {
    std::vector<RunRecord> runs;  // in seed-list order
    MetricSummary mean;
    MetricSummary sd;
};

struct MultiSeedOptions {
    /// Worker threads across seeds. Inner kernels run single-threaded when
    /// jobs > 1.
    int jobs = 1;
    bool parallel_kernels = true;
    /// Called once per finished run, serialized, in unspecified order.
    std::function<void(std::size_t run_index, const TrainResult&)> on_run;
};

/// Trains once per seed, evaluates each best model on test and averages.
MultiSeedResult train_multi_seed(ModelKind kind, const LabeledDataset& train_set, const LabeledDataset& dev,
                                 const LabeledDataset& test, const Features& features, const Hyperparams& h,
                                 std::span<const std::uint64_t> seeds, const MultiSeedOptions& options = {});

/// Metrics of a model on pre-encoded examples.
Metrics evaluate_examples(const Model& model, std::span<const Example> examples, double threshold,
                          bool parallel = true);

}  // namespace ssn
