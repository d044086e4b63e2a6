#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ssn/error.hpp"
#include "ssn/model.hpp"
#include "ssn/random.hpp"

using namespace ssn;

namespace {

Vector random_vector(std::size_t n, std::mt19937_64& gen) {
    std::normal_distribution<double> nd;
    Vector v(n);
    for (auto& x : v) x = nd(gen);
    return v;
}

Vector unit(Vector v) { return v / v.norm(); }

double f1_at(std::span<const ScoredLabel> s, double t, ScoreDirection dir) {
    int tp = 0, fp = 0, fn = 0;
    for (const auto& x : s) {
        const int pred = threshold_classifier(x.score, t, dir);
        tp += pred == 1 && x.label == 1;
        fp += pred == 1 && x.label == 0;
        fn += pred == 0 && x.label == 1;
    }
    return tp == 0 ? 0.0 : 2.0 * tp / (2.0 * tp + fp + fn);
}

}  // namespace

TEST(Model, InitIsDeterministicAndBounded) {
    const auto a = init_ssn(7, 5, 3, 11), b = init_ssn(7, 5, 3, 11), c = init_ssn(7, 5, 3, 12);
    const auto ba = a.blocks(), bb = b.blocks(), bc = c.blocks();
    for (std::size_t i = 0; i < ba.size(); ++i) {
        const auto& x = ba[i].values;
        EXPECT_TRUE(x == bb[i].values);
        EXPECT_FALSE(x == bc[i].values);
        const double bound = std::sqrt(6.0 / static_cast<double>(x.rows() + x.cols()));
        EXPECT_LE(x.cwiseAbs().maxCoeff(), bound);
    }
    EXPECT_EQ(a.gate.rows(), 7);
    EXPECT_EQ(a.gate.cols(), 7);
    EXPECT_EQ(a.map2.rows(), 5);
    EXPECT_EQ(a.output.cols(), 3);
}

TEST(Model, ZeroGateHalvesNoun) {
    std::mt19937_64 gen(1);
    auto p = init_ssn(4, 3, 2, 5);
    p.gate.setZero();
    const Vector x1 = random_vector(4, gen), x2 = random_vector(4, gen);
    const auto t = ssn_forward(p, x1, x2);
    EXPECT_TRUE(t.gate == Vector::Constant(4, 0.5));
    EXPECT_TRUE(t.gated_noun == 0.5 * x2);
}

TEST(Model, ZeroWeightsGiveHalf) {
    std::mt19937_64 gen(2);
    const auto p = SsnParams::zeros(4, 3, 2);
    EXPECT_EQ(ssn_forward(p, random_vector(4, gen), random_vector(4, gen)).y, 0.5);
    const auto f = FfnParams::zeros(4, 2);
    EXPECT_EQ(ffn_forward(f, random_vector(4, gen), random_vector(4, gen)).y, 0.5);
}

TEST(Model, TraceInvariants) {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = init_ssn(5, 4, 3, gen());
        const Vector x1 = 3 * random_vector(5, gen), x2 = 3 * random_vector(5, gen);
        const auto t = ssn_forward(p, x1, x2);
        EXPECT_GT(t.gate.minCoeff(), 0.0);
        EXPECT_LT(t.gate.maxCoeff(), 1.0);
        EXPECT_GT(t.y, 0.0);
        EXPECT_LT(t.y, 1.0);
        for (Eigen::Index i = 0; i < t.m.size(); ++i) EXPECT_EQ(t.m[i], t.z1[i] * t.z2[i]);
        const auto again = ssn_forward(p, x1, x2);
        EXPECT_EQ(again.y, t.y);
    }
}

TEST(Model, ForwardIsPositionSpecific) {
    std::mt19937_64 gen(4);
    bool witness = false;
    for (int trial = 0; trial < 100 && !witness; ++trial) {
        const auto p = init_ssn(4, 3, 2, gen());
        const Vector x1 = random_vector(4, gen), x2 = random_vector(4, gen);
        witness = std::abs(ssn_forward(p, x1, x2).y - ssn_forward(p, x2, x1).y) > 1e-6;
    }
    EXPECT_TRUE(witness);
}

TEST(Model, ForwardRejectsWrongDims) {
    const auto p = SsnParams::zeros(4, 3, 2);
    EXPECT_THROW(ssn_forward(p, Vector::Zero(3), Vector::Zero(4)), Error);
    EXPECT_THROW(ffn_forward(FfnParams::zeros(4, 2), Vector::Zero(4), Vector::Zero(5)), Error);
}

TEST(Model, FfnConcatenatesInOrder) {
    auto p = FfnParams::zeros(2, 1);
    p.hidden << 1, 0, 0, 0;  // reads x1[0] only
    p.output << 1;
    const Vector a = Vector::Constant(2, 1.0), b = Vector::Zero(2);
    const auto ab = ffn_forward(p, a, b), ba = ffn_forward(p, b, a);
    EXPECT_EQ(ab.input.head(2), a);
    EXPECT_DOUBLE_EQ(ab.d[0], std::tanh(1.0));
    EXPECT_EQ(ba.d[0], 0.0);
}

TEST(Model, Cosine) {
    std::mt19937_64 gen(5);
    Vector e1(2), e2(2);
    e1 << 1, 0;
    e2 << 0, 1;
    EXPECT_EQ(cosine_score(e1, e2), 0.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector u = random_vector(6, gen), v = random_vector(6, gen);
        EXPECT_NEAR(cosine_score(u, u), 1.0, 1e-15);
        EXPECT_EQ(cosine_score(u, v), cosine_score(v, u));
        EXPECT_LE(std::abs(cosine_score(u, v)), 1.0);
    }
    EXPECT_THROW(cosine_score(Vector::Zero(2), e1), Error);
}

TEST(Model, WeightedCosineDegeneracy) {
    std::mt19937_64 gen(6);
    const Matrix ones = Matrix::Ones(1, 8);
    for (int trial = 0; trial < 100; ++trial) {
        const Vector u = unit(random_vector(8, gen)), v = unit(random_vector(8, gen));
        EXPECT_NEAR(similarity_layer(u, v, ones, Activation::Linear)[0], cosine_score(u, v), 1e-12);
    }
}

TEST(Model, ThresholdClassifier) {
    EXPECT_EQ(threshold_classifier(0.867, 0.5), 1);
    EXPECT_EQ(threshold_classifier(0.152, 0.5), 0);
    EXPECT_EQ(threshold_classifier(0.5, 0.5), 1);
    EXPECT_EQ(threshold_classifier(0.2, 0.3, ScoreDirection::LowerIsMetaphor), 1);
    EXPECT_EQ(threshold_classifier(0.3, 0.3, ScoreDirection::LowerIsMetaphor), 0);
}

TEST(Model, TuneThresholdSeparated) {
    const std::vector<ScoredLabel> s{{0.1, 0}, {0.2, 0}, {0.7, 1}, {0.9, 1}};
    const auto c = tune_threshold(s, ScoreDirection::HigherIsMetaphor);
    EXPECT_EQ(c.f1, 1.0);
    EXPECT_GT(c.threshold, 0.2);
    EXPECT_LT(c.threshold, 0.7);
    EXPECT_FALSE(c.degenerate);
    const std::vector<ScoredLabel> low{{0.1, 1}, {0.2, 1}, {0.7, 0}};
    EXPECT_EQ(tune_threshold(low, ScoreDirection::LowerIsMetaphor).f1, 1.0);
}

TEST(Model, TuneThresholdDegenerateAndEmpty) {
    const std::vector<ScoredLabel> s{{0.1, 0}, {0.4, 0}};
    const auto c = tune_threshold(s, ScoreDirection::HigherIsMetaphor);
    EXPECT_TRUE(c.degenerate);
    EXPECT_TRUE(c.threshold < 0.1 || c.threshold > 0.4);
    EXPECT_THROW(tune_threshold({}, ScoreDirection::HigherIsMetaphor), Error);
}

TEST(Model, TuneThresholdMatchesExhaustiveScan) {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ScoredLabel> s;
        const int n = 1 + static_cast<int>(gen() % 30);
        for (int i = 0; i < n; ++i) s.push_back({static_cast<double>(gen() % 10) / 10.0, static_cast<int>(gen() % 2)});
        const auto dir = trial % 2 ? ScoreDirection::LowerIsMetaphor : ScoreDirection::HigherIsMetaphor;

        std::vector<double> sorted;
        for (const auto& x : s) sorted.push_back(x.score);
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<double> candidates{sorted.front() - 1.0};
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) candidates.push_back((sorted[i] + sorted[i + 1]) / 2);
        candidates.push_back(sorted.back() + 1.0);
        double best_f1 = -1, best_t = 0;
        for (double t : candidates) {
            const double f = f1_at(s, t, dir);
            if (f > best_f1) best_f1 = f, best_t = t;
        }

        const auto c = tune_threshold(s, dir);
        EXPECT_EQ(c.f1, best_f1);
        EXPECT_EQ(c.threshold, best_t);
        EXPECT_EQ(f1_at(s, c.threshold, dir), c.f1);
    }
}

TEST(Model, FusionMixing) {
    std::mt19937_64 gen(8);
    Hyperparams h;
    h.embed_dim = 4;
    h.embed_dim_b = 3;
    h.z_dim = 3;
    h.d_dim = 2;
    auto p = init_fusion(h, 9);
    EXPECT_EQ(p.alpha(), 0.5);
    const Vector a1 = random_vector(4, gen), a2 = random_vector(4, gen);
    const Vector b1 = random_vector(3, gen), b2 = random_vector(3, gen);
    const auto mean = fusion_forward(p, a1, a2, b1, b2);
    EXPECT_DOUBLE_EQ(mean.y, (mean.a.y + mean.b.y) / 2);
    p.alpha_logit(0, 0) = 50;
    const auto sat = fusion_forward(p, a1, a2, b1, b2);
    EXPECT_NEAR(sat.y, sat.a.y, 1e-9);
    EXPECT_THROW(fusion_forward(p, a1, a2, a1, a2), Error);
}

TEST(Model, FusionIsConvexProperty) {
    std::mt19937_64 gen(9);
    Hyperparams h;
    h.embed_dim = 3;
    h.embed_dim_b = 5;
    h.z_dim = 4;
    h.d_dim = 2;
    std::normal_distribution<double> nd(0, 5);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = init_fusion(h, gen());
        p.alpha_logit(0, 0) = nd(gen);
        const auto o = fusion_forward(p, random_vector(3, gen), random_vector(3, gen), random_vector(5, gen),
                                      random_vector(5, gen));
        EXPECT_LE(std::min(o.a.y, o.b.y), o.y);
        EXPECT_LE(o.y, std::max(o.a.y, o.b.y));
        EXPECT_GT(o.alpha, 0.0);
        EXPECT_LT(o.alpha, 1.0);
    }
}

TEST(Model, FusionEqualSubnetsIgnoreAlpha) {
    std::mt19937_64 gen(10);
    Hyperparams h;
    h.embed_dim = h.embed_dim_b = 3;
    h.z_dim = 3;
    h.d_dim = 2;
    auto p = init_fusion(h, 1);
    p.net_b = p.net_a;
    p.alpha_logit(0, 0) = 1.7;
    const Vector x1 = random_vector(3, gen), x2 = random_vector(3, gen);
    const auto o = fusion_forward(p, x1, x2, x1, x2);
    EXPECT_DOUBLE_EQ(o.y, o.a.y);
}

TEST(Model, PhraseVectorAndComposition) {
    std::mt19937_64 gen(11);
    const auto p = init_ssn(4, 3, 2, 3);
    const Vector x1 = random_vector(4, gen), x2 = random_vector(4, gen);
    const auto t = ssn_forward(p, x1, x2);
    EXPECT_TRUE(extract_phrase_vector(t) == t.z1.cwiseProduct(t.z2));
    EXPECT_TRUE(extract_phrase_vector(ssn_forward(p, x1, x2)) == extract_phrase_vector(t));
    ForwardTrace saturated;
    saturated.z1 = saturated.z2 = saturated.m = Vector::Ones(3);
    EXPECT_TRUE(extract_phrase_vector(saturated) == Vector::Ones(3));

    Vector a(2), b(2);
    a << 1, 2;
    b << 3, 4;
    EXPECT_EQ(compose_additive(a, b), (Vector(2) << 4, 6).finished());
    EXPECT_EQ(compose_multiplicative(a, b), (Vector(2) << 3, 8).finished());
    EXPECT_EQ(compose_multiplicative(a, Vector::Zero(2)), Vector::Zero(2));
    EXPECT_THROW(compose_additive(a, Vector::Zero(3)), Error);
}

TEST(Model, HyperparamsValidate) {
    Hyperparams h;
    EXPECT_NO_THROW(h.validate());
    h.z_dim = 0;
    EXPECT_THROW(h.validate(), Error);
    h = {};
    h.adadelta_rho = 1.0;
    EXPECT_THROW(h.validate(), Error);
}

TEST(Model, KindNames) {
    for (auto k : {ModelKind::Ssn, ModelKind::Ffn, ModelKind::Fusion, ModelKind::Cosine})
        EXPECT_EQ(parse_model_kind(to_string(k)), k);
    EXPECT_THROW(parse_model_kind("rnn"), Error);
}
