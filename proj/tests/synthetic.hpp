#pragma once

// Two well-separated clusters per slot in a 6-d space. A pair is labelled
// metaphorical when its adjective and noun come from different clusters, so
// the label depends on the interaction of the two inputs, not either alone.

#include <random>
#include <string>
#include <vector>

#include "ssn/dataset.hpp"
#include "ssn/embeddings.hpp"

namespace ssn::test {

struct SyntheticTask {
    EmbeddingTable table{"synthetic", 6};
    LabeledDataset data;
};

inline SyntheticTask make_separable_task(std::uint64_t seed = 2024) {
    SyntheticTask task;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> noise(0.0, 0.1);
    const double centers[2][6] = {{1, 1, 1, -1, -1, -1}, {-1, -1, -1, 1, 1, 1}};
    auto word = [&](const std::string& w, int cluster) {
        Vector v(6);
        for (int i = 0; i < 6; ++i) v[i] = centers[cluster][i] + noise(gen);
        task.table.insert(w, v);
    };
    for (int i = 0; i < 6; ++i) {
        word("adj" + std::to_string(i), i % 2);
        word("noun" + std::to_string(i), i % 2);
    }
    std::vector<LabeledPair> pairs;
    for (int shift = 0; shift < 4; ++shift)
        for (int a = 0; a < 5; ++a) {
            const int n = (a + shift) % 6;
            pairs.push_back({"adj" + std::to_string(a), "noun" + std::to_string(n), (a % 2) != (n % 2) ? 1 : 0,
                             Relation::AdjNoun});
        }
    task.data = LabeledDataset("separable", std::move(pairs));
    return task;
}

}  // namespace ssn::test
