#include "ssn/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "ssn/embeddings.hpp"
#include "ssn/error.hpp"
#include "ssn/random.hpp"

namespace ssn {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find('\t', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lowered(std::string_view s) {
    std::string r(s);
    for (auto& c : r) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return r;
}

}  // namespace

std::string_view to_string(Relation r) {
    switch (r) {
        case Relation::AdjNoun: return "adj-noun";
        case Relation::VerbDobj: return "verb-dobj";
        case Relation::VerbSubj: return "verb-subj";
        case Relation::Unknown: break;
    }
    return "unknown";
}

Relation parse_relation(std::string_view s) {
    if (s == "adj-noun") return Relation::AdjNoun;
    if (s == "verb-dobj") return Relation::VerbDobj;
    if (s == "verb-subj") return Relation::VerbSubj;
    if (s == "unknown" || s.empty()) return Relation::Unknown;
    throw Error("unknown relation '" + std::string(s) + "'");
}

LabeledDataset::LabeledDataset(std::string name, std::vector<LabeledPair> pairs)
    : name_(std::move(name)), pairs_(std::move(pairs)) {
    for (const auto& p : pairs_) {
        if (p.w1.empty() || p.w2.empty()) throw Error("pair with empty word in " + name_);
        if (p.label != 0 && p.label != 1) throw Error("label must be 0 or 1 in " + name_);
    }
}

std::size_t LabeledDataset::count_label(int label) const {
    return static_cast<std::size_t>(
        std::count_if(pairs_.begin(), pairs_.end(), [label](const auto& p) { return p.label == label; }));
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices, std::string name) const {
    std::vector<LabeledPair> out;
    out.reserve(indices.size());
    for (auto i : indices) out.push_back(pairs_.at(i));
    LabeledDataset d;
    d.name_ = std::move(name);
    d.pairs_ = std::move(out);
    return d;
}

LabeledDataset load_pairs(const std::filesystem::path& path, bool lowercase) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open pair file " + path.string());
    std::vector<LabeledPair> pairs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line.front() == '#') continue;
        const auto where = path.string() + ":" + std::to_string(lineno);
        auto cols = split_tabs(line);
        if (cols.size() < 3 || cols.size() > 4)
            throw Error(where + ": expected 3 or 4 tab-separated columns, got " + std::to_string(cols.size()));
        LabeledPair p;
        p.w1 = lowercase ? lowered(trim(cols[0])) : std::string(trim(cols[0]));
        p.w2 = lowercase ? lowered(trim(cols[1])) : std::string(trim(cols[1]));
        if (p.w1.empty() || p.w2.empty()) throw Error(where + ": empty word");
        const auto label = trim(cols[2]);
        if (label == "0") p.label = 0;
        else if (label == "1") p.label = 1;
        else throw Error(where + ": label must be 0 or 1, got '" + std::string(label) + "'");
        if (cols.size() == 4) {
            try {
                p.relation = parse_relation(trim(cols[3]));
            } catch (const Error& e) {
                throw Error(where + ": " + e.what());
            }
        }
        pairs.push_back(std::move(p));
    }
    return LabeledDataset(path.stem().string(), std::move(pairs));
}

void save_pairs(const LabeledDataset& d, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& p : d) {
        out << p.w1 << '\t' << p.w2 << '\t' << p.label;
        if (p.relation != Relation::Unknown) out << '\t' << to_string(p.relation);
        out << '\n';
    }
}

TrainDevSplit split_train_dev(const LabeledDataset& d, std::size_t dev_size, std::uint64_t seed) {
    if (dev_size > 0 && dev_size >= d.size())
        throw Error("dev size " + std::to_string(dev_size) + " must be smaller than dataset size " +
                    std::to_string(d.size()));
    Rng rng(seed);
    auto perm = rng.permutation(d.size());
    std::vector<std::size_t> dev(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(dev_size));
    std::vector<std::size_t> train(perm.begin() + static_cast<std::ptrdiff_t>(dev_size), perm.end());
    std::sort(dev.begin(), dev.end());
    std::sort(train.begin(), train.end());
    return {d.subset(train, d.name() + "-train"), d.subset(dev, d.name() + "-dev")};
}

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2 || k > n)
        throw Error("fold count " + std::to_string(k) + " out of range for " + std::to_string(n) + " pairs");
    Rng rng(seed);
    const auto perm = rng.permutation(n);
    std::vector<std::vector<std::size_t>> folds(k);
    const std::size_t base = n / k, extra = n % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                        perm.begin() + static_cast<std::ptrdiff_t>(pos + len));
        std::sort(folds[f].begin(), folds[f].end());
        pos += len;
    }
    return folds;
}

std::vector<Fold> kfold_partition(const LabeledDataset& d, std::size_t k, std::uint64_t seed) {
    const auto test_sets = kfold_indices(d.size(), k, seed);
    std::vector<Fold> folds;
    folds.reserve(k);
    std::vector<char> in_test(d.size());
    for (std::size_t f = 0; f < k; ++f) {
        std::fill(in_test.begin(), in_test.end(), 0);
        for (auto i : test_sets[f]) in_test[i] = 1;
        std::vector<std::size_t> train;
        train.reserve(d.size() - test_sets[f].size());
        for (std::size_t i = 0; i < d.size(); ++i)
            if (!in_test[i]) train.push_back(i);
        const auto tag = d.name() + "-fold" + std::to_string(f);
        folds.push_back({d.subset(train, tag + "-train"), d.subset(test_sets[f], tag + "-test")});
    }
    return folds;
}

LabeledDataset dedup_against(const LabeledDataset& train, const LabeledDataset& heldout) {
    std::set<std::pair<std::string_view, std::string_view>> keys;
    for (const auto& p : heldout) keys.emplace(p.w1, p.w2);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < train.size(); ++i)
        if (!keys.contains({train[i].w1, train[i].w2})) keep.push_back(i);
    return train.subset(keep, train.name());
}

OovFilterResult filter_oov(const LabeledDataset& d, std::span<const EmbeddingTable* const> tables) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const bool ok = std::all_of(tables.begin(), tables.end(), [&](const EmbeddingTable* t) {
            return t->contains(d[i].w1) && t->contains(d[i].w2);
        });
        if (ok) keep.push_back(i);
    }
    return {d.subset(keep, d.name()), d.size() - keep.size()};
}

LabeledDataset concat(const LabeledDataset& a, const LabeledDataset& b) {
    std::vector<LabeledPair> pairs(a.pairs());
    pairs.insert(pairs.end(), b.begin(), b.end());
    return LabeledDataset(a.name() + "+" + b.name(), std::move(pairs));
}

}  // namespace ssn
