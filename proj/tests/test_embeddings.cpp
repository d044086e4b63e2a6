#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "ssn/dataset.hpp"
#include "ssn/embeddings.hpp"
#include "ssn/error.hpp"
#include "test_util.hpp"

using namespace ssn;
using ssn::test::TempDir;
using ssn::test::write_file;

TEST(Embeddings, LoadsPlainFile) {
    TempDir dir;
    const auto t = load_embeddings(write_file(dir / "e.txt", "a 1.0 0.0\nb 0.0 1.0\n"));
    EXPECT_EQ(t.dim(), 2u);
    EXPECT_EQ(t.size(), 2u);
    ASSERT_NE(t.find("a"), nullptr);
    EXPECT_EQ((*t.find("a"))[0], 1.0);
    EXPECT_EQ((*t.find("a"))[1], 0.0);
}

TEST(Embeddings, HeaderLineIsSkipped) {
    TempDir dir;
    const auto plain = load_embeddings(write_file(dir / "p.txt", "a 1.0 0.0\nb 0.0 1.0\n"));
    const auto headed = load_embeddings(write_file(dir / "h.txt", "2 2\na 1.0 0.0\nb 0.0 1.0\n"));
    ASSERT_EQ(headed.size(), plain.size());
    EXPECT_EQ(headed.dim(), plain.dim());
    for (const auto& w : plain.words()) EXPECT_EQ(*headed.find(w), *plain.find(w));
}

TEST(Embeddings, RejectsDimensionMismatch) {
    TempDir dir;
    EXPECT_THROW(load_embeddings(write_file(dir / "e.txt", "a 1.0 0.0\nb 1.0\n")), Error);
    EXPECT_THROW(load_embeddings(write_file(dir / "h.txt", "2 3\na 1.0 0.0\n")), Error);
    LoadOptions opt;
    opt.expected_dim = 3;
    EXPECT_THROW(load_embeddings(write_file(dir / "x.txt", "a 1.0 0.0\n"), opt), Error);
}

TEST(Embeddings, RejectsBadValuesDuplicatesAndEmptyFiles) {
    TempDir dir;
    EXPECT_THROW(load_embeddings(write_file(dir / "nan.txt", "a 1.0 nan\n")), Error);
    EXPECT_THROW(load_embeddings(write_file(dir / "inf.txt", "a inf 1.0\n")), Error);
    EXPECT_THROW(load_embeddings(write_file(dir / "txt.txt", "a 1.0 x\n")), Error);
    EXPECT_THROW(load_embeddings(write_file(dir / "dup.txt", "a 1 2\na 3 4\n")), Error);
    EXPECT_THROW(load_embeddings(write_file(dir / "empty.txt", "")), Error);
    EXPECT_THROW(load_embeddings(write_file(dir / "hdr.txt", "3 2\n")), Error);
    EXPECT_THROW(load_embeddings(dir / "missing.txt"), Error);
}

TEST(Embeddings, LowercaseKeepsFirstCollision) {
    TempDir dir;
    const auto path = write_file(dir / "e.txt", "The 1 2\nthe 3 4\nCat 5 6\n");
    EXPECT_EQ(load_embeddings(path).size(), 3u);
    LoadOptions opt;
    opt.lowercase = true;
    const auto t = load_embeddings(path, opt);
    EXPECT_EQ(t.size(), 2u);
    EXPECT_EQ((*t.find("the"))[0], 1.0);
    EXPECT_TRUE(t.contains("cat"));
    EXPECT_FALSE(t.contains("Cat"));
}

TEST(Embeddings, LookupIsStableAndSignalsOov) {
    TempDir dir;
    const auto t = load_embeddings(write_file(dir / "e.txt", "a 1.0 0.0\nb 0.0 1.0\n"));
    EXPECT_EQ(t.find("zzz"), nullptr);
    EXPECT_FALSE(t.contains("zzz"));
    const Vector first = *t.find("a");
    const Vector second = *t.find("a");
    EXPECT_EQ(first, second);
    EXPECT_EQ(first, (Vector(2) << 1.0, 0.0).finished());
}

TEST(Embeddings, UnitNormalize) {
    const auto v = unit_normalize((Vector(2) << 3.0, 4.0).finished());
    EXPECT_DOUBLE_EQ(v[0], 0.6);
    EXPECT_DOUBLE_EQ(v[1], 0.8);
    const auto w = unit_normalize((Vector(2) << 0.0, 5.0).finished());
    EXPECT_EQ(w[0], 0.0);
    EXPECT_EQ(w[1], 1.0);
    EXPECT_THROW(unit_normalize(Vector::Zero(2)), Error);
}

TEST(Embeddings, UnitNormalizeIsIdempotentProperty) {
    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd(0.0, 10.0);
    for (int trial = 0; trial < 500; ++trial) {
        Vector v(1 + static_cast<int>(gen() % 20));
        for (auto& x : v) x = nd(gen);
        const auto once = unit_normalize(v);
        const auto twice = unit_normalize(once);
        EXPECT_NEAR(once.norm(), 1.0, 1e-12);
        EXPECT_LE((once - twice).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_GT(once.dot(v), 0.0);  // direction kept
    }
}

TEST(Embeddings, CoverageReport) {
    EmbeddingTable t("t", 1);
    t.insert("a", Vector::Ones(1));
    t.insert("b", Vector::Ones(1));
    const LabeledDataset d("d", {{"a", "b", 1, Relation::Unknown}, {"a", "c", 0, Relation::Unknown}});
    const auto r = coverage_report(t, d);
    EXPECT_EQ(r.total, 2u);
    EXPECT_EQ(r.covered, 1u);
    EXPECT_EQ(r.missing, std::vector<std::string>{"c"});

    const auto empty = coverage_report(t, LabeledDataset("e", {}));
    EXPECT_EQ(empty.total, 0u);
    EXPECT_EQ(empty.covered, 0u);
    EXPECT_TRUE(empty.missing.empty());

    const LabeledDataset full("f", {{"a", "b", 1, Relation::Unknown}, {"b", "a", 0, Relation::Unknown}});
    EXPECT_EQ(coverage_report(t, full).covered, 2u);
}

TEST(Embeddings, CoverageMatchesBruteForceProperty) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 100; ++trial) {
        EmbeddingTable t("t", 1);
        std::set<std::string> vocab;
        for (int w = 0; w < 30; ++w)
            if (gen() % 2) {
                t.insert("w" + std::to_string(w), Vector::Zero(1));
                vocab.insert("w" + std::to_string(w));
            }
        std::vector<LabeledPair> pairs;
        for (int i = 0; i < 40; ++i)
            pairs.push_back({"w" + std::to_string(gen() % 30), "w" + std::to_string(gen() % 30), 0, Relation::Unknown});
        const LabeledDataset d("d", pairs);
        std::size_t brute = 0;
        std::set<std::string> missing;
        for (const auto& p : pairs) {
            brute += vocab.count(p.w1) && vocab.count(p.w2);
            if (!vocab.count(p.w1)) missing.insert(p.w1);
            if (!vocab.count(p.w2)) missing.insert(p.w2);
        }
        const auto r = coverage_report(t, d);
        EXPECT_EQ(r.covered, brute);
        EXPECT_LE(r.covered, r.total);
        EXPECT_EQ(std::set<std::string>(r.missing.begin(), r.missing.end()), missing);
        EXPECT_EQ(r.missing.size(), missing.size());
    }
}

TEST(Embeddings, SaveThenLoadReproducesValuesProperty) {
    TempDir dir;
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd(0.0, 1.0);
    EmbeddingTable t("t", 7);
    for (int w = 0; w < 50; ++w) {
        Vector v(7);
        for (auto& x : v) x = nd(gen) * std::pow(10.0, static_cast<double>(gen() % 9) - 4.0);
        t.insert("word" + std::to_string(w), v);
    }
    save_embeddings(t, dir / "out.txt");
    const auto back = load_embeddings(dir / "out.txt");
    ASSERT_EQ(back.size(), t.size());
    for (const auto& w : t.words()) EXPECT_EQ(*back.find(w), *t.find(w)) << w;
}
