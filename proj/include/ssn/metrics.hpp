#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ssn {

/// Binary classification scores with label 1 (metaphorical) as the positive
/// class. A ratio with a zero denominator is reported as 0 and flagged.
struct Metrics {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool precision_undefined = false;
    bool recall_undefined = false;

    std::size_t total() const { return tp + fp + tn + fn; }
};

Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn);

/// gold and predicted must have equal length; entries are 0 or 1.
Metrics compute_metrics(std::span<const int> gold, std::span<const int> predicted);

/// Mean (or sample standard deviation) of accuracy/precision/recall/F1.
struct MetricSummary {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

MetricSummary mean_of(std::span<const Metrics> runs);
MetricSummary mean_of(std::span<const MetricSummary> runs);
/// Sample standard deviation (n - 1 denominator); zero for fewer than two runs.
MetricSummary stddev_of(std::span<const Metrics> runs);
MetricSummary stddev_of(std::span<const MetricSummary> runs);

MetricSummary summary(const Metrics& m);

}  // namespace ssn
