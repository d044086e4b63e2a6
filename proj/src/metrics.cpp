#include "ssn/metrics.hpp"

#include <cmath>

#include "ssn/error.hpp"

namespace ssn {

Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
    Metrics m;
    m.tp = tp;
    m.fp = fp;
    m.tn = tn;
    m.fn = fn;
    const auto total = m.total();
    if (total > 0) m.accuracy = static_cast<double>(tp + tn) / static_cast<double>(total);
    if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    else m.precision_undefined = true;
    if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    else m.recall_undefined = true;
    // Count form: equal F-scores compare equal, which threshold tie-breaking relies on.
    if (tp > 0) m.f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    return m;
}

Metrics compute_metrics(std::span<const int> gold, std::span<const int> predicted) {
    if (gold.size() != predicted.size()) throw Error("gold and predicted label counts differ");
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        const bool g = gold[i] == 1, p = predicted[i] == 1;
        if (g && p) ++tp;
        else if (!g && p) ++fp;
        else if (!g && !p) ++tn;
        else ++fn;
    }
    return metrics_from_counts(tp, fp, tn, fn);
}

MetricSummary summary(const Metrics& m) { return {m.accuracy, m.precision, m.recall, m.f1}; }

MetricSummary mean_of(std::span<const MetricSummary> runs) {
    MetricSummary s;
    if (runs.empty()) return s;
    for (const auto& r : runs) {
        s.accuracy += r.accuracy;
        s.precision += r.precision;
        s.recall += r.recall;
        s.f1 += r.f1;
    }
    const double n = static_cast<double>(runs.size());
    s.accuracy /= n;
    s.precision /= n;
    s.recall /= n;
    s.f1 /= n;
    return s;
}

MetricSummary stddev_of(std::span<const MetricSummary> runs) {
    MetricSummary s;
    if (runs.size() < 2) return s;
    // Welford: identical runs give exactly zero spread.
    double mean[4] = {}, m2[4] = {};
    std::size_t k = 0;
    for (const auto& r : runs) {
        ++k;
        const double x[4] = {r.accuracy, r.precision, r.recall, r.f1};
        for (int i = 0; i < 4; ++i) {
            const double delta = x[i] - mean[i];
            mean[i] += delta / static_cast<double>(k);
            m2[i] += delta * (x[i] - mean[i]);
        }
    }
    const double n = static_cast<double>(runs.size() - 1);
    s.accuracy = std::sqrt(m2[0] / n);
    s.precision = std::sqrt(m2[1] / n);
    s.recall = std::sqrt(m2[2] / n);
    s.f1 = std::sqrt(m2[3] / n);
    return s;
}

namespace {
std::vector<MetricSummary> summaries(std::span<const Metrics> runs) {
    std::vector<MetricSummary> out;
    out.reserve(runs.size());
    for (const auto& m : runs) out.push_back(summary(m));
    return out;
}
}  // namespace

MetricSummary mean_of(std::span<const Metrics> runs) { return mean_of(summaries(runs)); }
MetricSummary stddev_of(std::span<const Metrics> runs) { return stddev_of(summaries(runs)); }

}  // namespace ssn
