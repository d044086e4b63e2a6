#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "ssn/dataset.hpp"
#include "ssn/embeddings.hpp"
#include "ssn/error.hpp"
#include "test_util.hpp"

using namespace ssn;
using ssn::test::make_dataset;
using ssn::test::TempDir;
using ssn::test::write_file;

namespace {

std::multiset<std::tuple<std::string, std::string, int>> as_multiset(const std::vector<LabeledPair>& pairs) {
    std::multiset<std::tuple<std::string, std::string, int>> s;
    for (const auto& p : pairs) s.emplace(p.w1, p.w2, p.label);
    return s;
}

}  // namespace

TEST(Dataset, LoadsPairs) {
    TempDir dir;
    const auto d = load_pairs(write_file(dir / "p.tsv", "# comment\nattack\tproblem\t1\n\nsour\tcherry\t0\tadj-noun\n"));
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d[0], (LabeledPair{"attack", "problem", 1, Relation::Unknown}));
    EXPECT_EQ(d[1], (LabeledPair{"sour", "cherry", 0, Relation::AdjNoun}));
    EXPECT_EQ(d.count_label(1), 1u);
    EXPECT_EQ(d.count_label(0), 1u);
}

TEST(Dataset, RejectsMalformedLines) {
    TempDir dir;
    EXPECT_THROW(load_pairs(write_file(dir / "a.tsv", "a\tb\t2\n")), Error);
    EXPECT_THROW(load_pairs(write_file(dir / "b.tsv", "a\tb\n")), Error);
    EXPECT_THROW(load_pairs(write_file(dir / "c.tsv", "a\t\t1\n")), Error);
    EXPECT_THROW(load_pairs(write_file(dir / "d.tsv", "a\tb\t1\tnoun-noun\n")), Error);
    EXPECT_THROW(load_pairs(write_file(dir / "e.tsv", "a b 1\n")), Error);
    EXPECT_THROW(load_pairs(dir / "missing.tsv"), Error);
}

TEST(Dataset, LoadingIsStable) {
    TempDir dir;
    const auto d = make_dataset(100);
    save_pairs(d, dir / "d.tsv");
    EXPECT_EQ(load_pairs(dir / "d.tsv").pairs(), load_pairs(dir / "d.tsv").pairs());
    EXPECT_EQ(load_pairs(dir / "d.tsv").pairs(), d.pairs());
}

TEST(Dataset, SplitTrainDevSizes) {
    const auto d = make_dataset(1536);
    const auto s = split_train_dev(d, 200, 42);
    EXPECT_EQ(s.train.size(), 1336u);
    EXPECT_EQ(s.dev.size(), 200u);
    auto all = s.train.pairs();
    all.insert(all.end(), s.dev.begin(), s.dev.end());
    EXPECT_EQ(as_multiset(all), as_multiset(d.pairs()));

    const auto none = split_train_dev(d, 0, 42);
    EXPECT_TRUE(none.dev.empty());
    EXPECT_EQ(none.train.pairs(), d.pairs());

    EXPECT_THROW(split_train_dev(d, 1536, 1), Error);
}

TEST(Dataset, SplitIsDeterministic) {
    const auto d = make_dataset(300);
    const auto a = split_train_dev(d, 30, 9), b = split_train_dev(d, 30, 9), c = split_train_dev(d, 30, 10);
    EXPECT_EQ(a.dev.pairs(), b.dev.pairs());
    EXPECT_EQ(a.train.pairs(), b.train.pairs());
    EXPECT_NE(a.dev.pairs(), c.dev.pairs());
}

TEST(Dataset, KfoldSizesFor647) {
    const auto d = make_dataset(647);
    const auto folds = kfold_partition(d, 10, 3);
    ASSERT_EQ(folds.size(), 10u);
    std::map<std::size_t, int> histogram;
    std::size_t total = 0;
    for (const auto& f : folds) {
        ++histogram[f.test.size()];
        total += f.test.size();
        EXPECT_EQ(f.train.size() + f.test.size(), 647u);
    }
    // Oracle: enumerate every size multiset {s, s+1} with spread <= 1 summing to 647.
    std::map<std::size_t, int> expected;
    for (std::size_t s = 0; s <= 647; ++s)
        for (int big = 0; big < 10; ++big)
            if (s * 10 + static_cast<std::size_t>(big) == 647) {
                expected[s] = 10 - big;
                if (big) expected[s + 1] = big;
            }
    EXPECT_EQ(histogram, expected);
    EXPECT_EQ(histogram, (std::map<std::size_t, int>{{64, 3}, {65, 7}}));
    EXPECT_EQ(total, 647u);
}

TEST(Dataset, KfoldLeaveOneOut) {
    const auto d = make_dataset(12);
    const auto folds = kfold_partition(d, 12, 1);
    for (const auto& f : folds) {
        EXPECT_EQ(f.test.size(), 1u);
        EXPECT_EQ(f.train.size(), 11u);
    }
}

TEST(Dataset, KfoldRejectsBadK) {
    const auto d = make_dataset(5);
    EXPECT_THROW(kfold_partition(d, 1, 0), Error);
    EXPECT_THROW(kfold_partition(d, 6, 0), Error);
}

TEST(Dataset, KfoldIsExactPartitionProperty) {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + gen() % 199;
        const std::size_t k = 2 + gen() % std::min<std::size_t>(19, n - 1);
        const auto seed = gen();
        const auto sets = kfold_indices(n, k, seed);
        std::vector<int> seen(n, 0);
        std::size_t lo = n, hi = 0;
        for (const auto& s : sets) {
            for (auto i : s) ++seen[i];
            lo = std::min(lo, s.size());
            hi = std::max(hi, s.size());
        }
        EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
        EXPECT_LE(hi - lo, 1u);
        EXPECT_EQ(sets, kfold_indices(n, k, seed));
    }
}

TEST(Dataset, KfoldTrainIsComplementOfTest) {
    const auto d = make_dataset(53);
    for (const auto& f : kfold_partition(d, 4, 8)) {
        auto all = f.train.pairs();
        all.insert(all.end(), f.test.begin(), f.test.end());
        EXPECT_EQ(as_multiset(all), as_multiset(d.pairs()));
    }
}

TEST(Dataset, DedupAgainst) {
    const LabeledDataset train("t", {{"a", "b", 1, Relation::Unknown}, {"c", "d", 0, Relation::Unknown}});
    const LabeledDataset held("h", {{"c", "d", 1, Relation::Unknown}});
    const auto out = dedup_against(train, held);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0], train[0]);
    EXPECT_EQ(dedup_against(train, LabeledDataset("e", {})).pairs(), train.pairs());
    EXPECT_TRUE(dedup_against(train, train).empty());
    // Keys are case-sensitive.
    const LabeledDataset upper("u", {{"A", "b", 1, Relation::Unknown}});
    EXPECT_EQ(dedup_against(train, upper).size(), 2u);
}

TEST(Dataset, DedupIsIdempotentAndShrinkingProperty) {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 50; ++trial) {
        const auto train = make_dataset(80, gen());
        const auto held = make_dataset(30, gen());
        const auto once = dedup_against(train, held);
        EXPECT_LE(once.size(), train.size());
        EXPECT_EQ(dedup_against(once, held).pairs(), once.pairs());
    }
}

TEST(Dataset, FilterOov) {
    EmbeddingTable t("t", 1), u("u", 1);
    for (const char* w : {"a", "b", "c"}) t.insert(w, Vector::Zero(1));
    for (const char* w : {"a", "b"}) u.insert(w, Vector::Zero(1));
    const LabeledDataset d("d", {{"a", "b", 1, Relation::Unknown},
                                 {"a", "c", 0, Relation::Unknown},
                                 {"x", "y", 0, Relation::Unknown}});
    const EmbeddingTable* one[] = {&t};
    const EmbeddingTable* both[] = {&t, &u};
    EXPECT_EQ(filter_oov(d, one).dropped, 1u);
    const auto r = filter_oov(d, both);
    EXPECT_EQ(r.dropped, 2u);
    ASSERT_EQ(r.kept.size(), 1u);
    EXPECT_EQ(r.kept[0].w2, "b");

    const LabeledDataset covered("c", {{"a", "b", 1, Relation::Unknown}});
    EXPECT_EQ(filter_oov(covered, both).dropped, 0u);
    const LabeledDataset uncovered("n", {{"x", "y", 1, Relation::Unknown}});
    EXPECT_TRUE(filter_oov(uncovered, both).kept.empty());
}

TEST(Dataset, FilterOovMatchesBruteForceProperty) {
    std::mt19937_64 gen(29);
    for (int trial = 0; trial < 50; ++trial) {
        EmbeddingTable t("t", 1);
        std::set<std::string> vocab;
        for (int w = 0; w < 50; ++w)
            if (gen() % 3) {
                t.insert("n" + std::to_string(w), Vector::Zero(1));
                vocab.insert("n" + std::to_string(w));
            }
        for (int w = 0; w < 200; ++w)
            if (gen() % 2) {
                t.insert("a" + std::to_string(w), Vector::Zero(1));
                vocab.insert("a" + std::to_string(w));
            }
        const auto d = make_dataset(120, gen());
        std::size_t dropped = 0;
        for (const auto& p : d) dropped += !(vocab.count(p.w1) && vocab.count(p.w2));
        const EmbeddingTable* tables[] = {&t};
        const auto r = filter_oov(d, tables);
        EXPECT_EQ(r.dropped, dropped);
        EXPECT_EQ(r.kept.size() + r.dropped, d.size());
    }
}

TEST(Dataset, Concat) {
    const auto a = make_dataset(1336, 1), b = make_dataset(500, 2);
    const auto c = concat(a, b);
    ASSERT_EQ(c.size(), 1836u);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), c.begin()));
    EXPECT_TRUE(std::equal(b.begin(), b.end(), c.begin() + 1336));
    EXPECT_EQ(concat(a, LabeledDataset("e", {})).pairs(), a.pairs());
}
