#include "ssn/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "ssn/dataset.hpp"
#include "ssn/error.hpp"

namespace ssn {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

bool parse_integer(std::string_view s, std::size_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::string name, std::size_t dim) : name_(std::move(name)), dim_(dim) {
    if (dim_ == 0) throw Error("embedding dimension must be positive");
}

void EmbeddingTable::insert(std::string word, Vector values) {
    if (word.empty()) throw Error("empty word in embedding table " + name_);
    if (static_cast<std::size_t>(values.size()) != dim_)
        throw Error("dimension mismatch for '" + word + "': expected " + std::to_string(dim_) + ", got " +
                    std::to_string(values.size()));
    if (!values.allFinite()) throw Error("non-finite value in vector for '" + word + "'");
    if (entries_.contains(word)) throw Error("duplicate word '" + word + "' in " + name_);
    order_.push_back(word);
    entries_.emplace(std::move(word), std::move(values));
}

const Vector* EmbeddingTable::find(std::string_view word) const {
    auto it = entries_.find(word);
    return it == entries_.end() ? nullptr : &it->second;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open embedding file " + path.string());

    std::optional<EmbeddingTable> table;
    std::optional<std::size_t> header_dim;
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (first) {
            first = false;
            std::size_t count = 0, dim = 0;
            if (tokens.size() == 2 && parse_integer(tokens[0], count) && parse_integer(tokens[1], dim)) {
                if (dim == 0) throw Error(path.string() + ": header declares zero dimension");
                header_dim = dim;
                continue;
            }
        }
        const std::size_t dim = tokens.size() - 1;
        if (!table) {
            const std::size_t want = header_dim.value_or(dim);
            if (options.expected_dim && *options.expected_dim != want)
                throw Error(path.string() + ": dimension mismatch, expected " +
                            std::to_string(*options.expected_dim) + ", file has " + std::to_string(want));
            if (want == 0) throw Error(path.string() + ":" + std::to_string(lineno) + ": word without values");
            table.emplace(path.stem().string(), want);
        }
        if (dim != table->dim())
            throw Error(path.string() + ":" + std::to_string(lineno) + ": dimension mismatch, expected " +
                        std::to_string(table->dim()) + " values, got " + std::to_string(dim));
        Vector v(static_cast<Eigen::Index>(dim));
        for (std::size_t i = 0; i < dim; ++i) {
            double x = 0;
            if (!parse_double(tokens[i + 1], x) || !std::isfinite(x))
                throw Error(path.string() + ":" + std::to_string(lineno) + ": bad value '" +
                            std::string(tokens[i + 1]) + "'");
            v[static_cast<Eigen::Index>(i)] = x;
        }
        std::string word(tokens[0]);
        if (options.lowercase) {
            word = lower(std::move(word));
            if (table->contains(word)) continue;
        } else if (table->contains(word)) {
            throw Error(path.string() + ":" + std::to_string(lineno) + ": duplicate word '" + word + "'");
        }
        table->insert(std::move(word), std::move(v));
    }
    if (!table) throw Error("embedding file " + path.string() + " contains no vectors");
    return std::move(*table);
}

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    char buf[64];
    for (const auto& w : table.words()) {
        out << w;
        for (double x : *table.find(w)) {
            auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
            out << ' ' << std::string_view(buf, static_cast<std::size_t>(p - buf));
        }
        out << '\n';
    }
}

Vector unit_normalize(const Vector& v) {
    const double n = v.norm();
    if (n == 0.0) throw Error("cannot normalize the zero vector");
    return v / n;
}

CoverageReport coverage_report(const EmbeddingTable& table, const LabeledDataset& dataset) {
    CoverageReport r;
    std::unordered_set<std::string> seen;
    for (const auto& p : dataset) {
        ++r.total;
        bool ok = true;
        for (const std::string* w : {&p.w1, &p.w2}) {
            if (table.contains(*w)) continue;
            ok = false;
            if (seen.insert(*w).second) r.missing.push_back(*w);
        }
        if (ok) ++r.covered;
    }
    return r;
}

}  // namespace ssn
