#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ssn {

class EmbeddingTable;

enum class Relation { AdjNoun, VerbDobj, VerbSubj, Unknown };

std::string_view to_string(Relation r);
Relation parse_relation(std::string_view s);

/// Slot 1 holds the adjective or verb, slot 2 the noun. label 1 = metaphorical.
struct LabeledPair {
    std::string w1;
    std::string w2;
    int label = 0;
    Relation relation = Relation::Unknown;

    friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

class LabeledDataset {
public:
    LabeledDataset() = default;
    LabeledDataset(std::string name, std::vector<LabeledPair> pairs);

    const std::string& name() const { return name_; }
    const std::vector<LabeledPair>& pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }
    const LabeledPair& operator[](std::size_t i) const { return pairs_[i]; }
    auto begin() const { return pairs_.begin(); }
    auto end() const { return pairs_.end(); }

    std::size_t count_label(int label) const;

    /// Pairs at the given indices, in the order given.
    LabeledDataset subset(std::span<const std::size_t> indices, std::string name) const;

private:
    std::string name_;
    std::vector<LabeledPair> pairs_;
};

/// Reads `w1<TAB>w2<TAB>label[<TAB>relation]`; blank lines and lines starting
/// with '#' are skipped.
LabeledDataset load_pairs(const std::filesystem::path& path, bool lowercase = false);
void save_pairs(const LabeledDataset& d, const std::filesystem::path& path);

struct TrainDevSplit {
    LabeledDataset train;
    LabeledDataset dev;
};

/// Random held-out split; both halves keep the original relative order.
TrainDevSplit split_train_dev(const LabeledDataset& d, std::size_t dev_size, std::uint64_t seed);

struct Fold {
    LabeledDataset train;
    LabeledDataset test;
};

/// Shuffles indices, then slices k contiguous blocks. The first |d| mod k
/// blocks get one extra element. Within each side of a fold the original
/// order is kept.
std::vector<Fold> kfold_partition(const LabeledDataset& d, std::size_t k, std::uint64_t seed);

/// Test-fold index sets behind kfold_partition.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed);

/// Train pairs whose (w1, w2) key occurs in no held-out pair.
LabeledDataset dedup_against(const LabeledDataset& train, const LabeledDataset& heldout);

struct OovFilterResult {
    LabeledDataset kept;
    std::size_t dropped = 0;
};

/// Keeps pairs whose both words are present in every table.
OovFilterResult filter_oov(const LabeledDataset& d, std::span<const EmbeddingTable* const> tables);

LabeledDataset concat(const LabeledDataset& a, const LabeledDataset& b);

}  // namespace ssn
