#pragma once

// Batch kernels used by the training loop. Each kernel has a serial
// reference, kept for testing and benchmarking, and an OpenMP version.
//
// The parallel gradient kernels run in two phases: per-example forward and
// backward signals in parallel over examples, then the outer-product
// reductions in parallel over parameter columns. Every gradient entry is
// summed over the batch in example order, so results are bitwise identical
// to the serial reference and independent of the thread count.

#include <span>
#include <vector>

#include "ssn/model.hpp"

namespace ssn {

/// Overwrites grad with the summed hinge-loss gradient over the batch and
/// returns the summed loss. grad must already have the shape of params.
double batch_gradient_serial(const SsnParams& params, std::span<const Example> batch, double margin,
                             SsnParams& grad);
double batch_gradient_parallel(const SsnParams& params, std::span<const Example> batch, double margin,
                               SsnParams& grad);

double batch_gradient_serial(const FfnParams& params, std::span<const Example> batch, double margin,
                             FfnParams& grad);
double batch_gradient_parallel(const FfnParams& params, std::span<const Example> batch, double margin,
                               FfnParams& grad);

double batch_gradient_serial(const FusionParams& params, std::span<const Example> batch, double margin,
                             FusionParams& grad);
double batch_gradient_parallel(const FusionParams& params, std::span<const Example> batch, double margin,
                               FusionParams& grad);

/// Model score for each example, in order.
std::vector<double> score_serial(const Model& model, std::span<const Example> examples);
std::vector<double> score_parallel(const Model& model, std::span<const Example> examples);

double predict(const SsnParams& p, const Example& ex);
double predict(const FfnParams& p, const Example& ex);
double predict(const FusionParams& p, const Example& ex);

template <typename P>
std::vector<double> predict_all(const P& params, std::span<const Example> examples, bool parallel) {
    std::vector<double> out(examples.size());
    const auto n = static_cast<long>(examples.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = predict(params, examples[static_cast<std::size_t>(i)]);
    return out;
}

}  // namespace ssn
