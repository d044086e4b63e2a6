#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace ssn {

using Vector = Eigen::VectorXd;

class LabeledDataset;

/// Immutable word -> vector map. All vectors have exactly dim() finite
/// components. Safe to share between threads once constructed.
class EmbeddingTable {
public:
    EmbeddingTable(std::string name, std::size_t dim);

    /// Adds an entry; throws on duplicate word, wrong length or non-finite value.
    void insert(std::string word, Vector values);

    /// Returns the stored vector, or nullptr when the word is out of vocabulary.
    const Vector* find(std::string_view word) const;
    bool contains(std::string_view word) const { return find(word) != nullptr; }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return entries_.size(); }
    const std::string& name() const { return name_; }

    /// Words in insertion order.
    const std::vector<std::string>& words() const { return order_; }

private:
    struct Hash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
    };

    std::string name_;
    std::size_t dim_;
    std::unordered_map<std::string, Vector, Hash, std::equal_to<>> entries_;
    std::vector<std::string> order_;
};

struct LoadOptions {
    std::optional<std::size_t> expected_dim;
    /// Lowercase words at load time. When two source words collapse onto the
    /// same key the first one wins.
    bool lowercase = false;
};

/// Reads the text format `word v1 ... vd`, one entry per line, with an
/// optional leading `count dim` header.
EmbeddingTable load_embeddings(const std::filesystem::path& path, const LoadOptions& options = {});

/// Writes the same text format (no header), values printed with 17
/// significant digits.
void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);

/// Scales v to unit Euclidean norm. Throws on the zero vector.
Vector unit_normalize(const Vector& v);

struct CoverageReport {
    std::size_t total = 0;
    std::size_t covered = 0;
    std::vector<std::string> missing;  // unique, in first-seen order
};

CoverageReport coverage_report(const EmbeddingTable& table, const LabeledDataset& dataset);

}  // namespace ssn
