#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ssn/error.hpp"
#include "ssn/model.hpp"
#include "ssn/model_io.hpp"
#include "test_util.hpp"

using namespace ssn;
using ssn::test::read_file;
using ssn::test::TempDir;
using ssn::test::write_file;

namespace {

Hyperparams small_hyper() {
    Hyperparams h;
    h.embed_dim = 4;
    h.embed_dim_b = 3;
    h.z_dim = 5;
    h.d_dim = 2;
    h.classification_threshold = 0.45;
    h.max_epochs = 17;
    return h;
}

Model sample(ModelKind kind, std::uint64_t seed) {
    const auto h = small_hyper();
    switch (kind) {
        case ModelKind::Ssn: return {h, init_params(h, seed)};
        case ModelKind::Ffn: return {h, init_ffn(h, seed)};
        case ModelKind::Fusion: {
            auto p = init_fusion(h, seed);
            p.alpha_logit(0, 0) = -0.3;
            return {h, p};
        }
        case ModelKind::Cosine: {
            CosineParams c;
            c.threshold(0, 0) = 0.1 + 1e-17 * static_cast<double>(seed);
            return {h, c};
        }
    }
    return {};
}

std::string serialize(const Model& m) {
    std::ostringstream out;
    write_model(m, out);
    return out.str();
}

Model parse(const std::string& text) {
    std::istringstream in(text);
    return read_model(in);
}

}  // namespace

class ModelIoKinds : public ::testing::TestWithParam<ModelKind> {};

TEST_P(ModelIoKinds, RoundTripIsBitExact) {
    const auto m = sample(GetParam(), 5);
    const auto back = parse(serialize(m));
    EXPECT_EQ(back.kind(), m.kind());
    EXPECT_EQ(back.hyper, m.hyper);
    const auto same_blocks = [](const auto& a, const auto& b) {
        const auto ba = a.blocks(), bb = b.blocks();
        ASSERT_EQ(ba.size(), bb.size());
        for (std::size_t i = 0; i < ba.size(); ++i) {
            EXPECT_EQ(ba[i].name, bb[i].name);
            ASSERT_EQ(ba[i].values.rows(), bb[i].values.rows());
            ASSERT_EQ(ba[i].values.cols(), bb[i].values.cols());
            EXPECT_EQ(0, std::memcmp(ba[i].values.data(), bb[i].values.data(),
                                     sizeof(double) * static_cast<std::size_t>(ba[i].values.size())));
        }
    };
    std::visit(
        [&](const auto& p) { same_blocks(p, std::get<std::decay_t<decltype(p)>>(back.params)); }, m.params);
    EXPECT_EQ(serialize(back), serialize(m));
}

INSTANTIATE_TEST_SUITE_P(AllKinds, ModelIoKinds,
                         ::testing::Values(ModelKind::Ssn, ModelKind::Ffn, ModelKind::Fusion, ModelKind::Cosine),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(ModelIo, ForwardOutputsSurviveFile) {
    TempDir dir;
    const auto m = sample(ModelKind::Ssn, 9);
    save_model(m, dir / "m.ssn");
    const auto back = load_model(dir / "m.ssn");
    std::mt19937_64 gen(1);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 100; ++i) {
        Vector x1(4), x2(4);
        for (auto& v : x1) v = nd(gen);
        for (auto& v : x2) v = nd(gen);
        const Example ex{&x1, &x2, nullptr, nullptr, 0};
        const double a = score(m, ex), b = score(back, ex);
        EXPECT_EQ(0, std::memcmp(&a, &b, sizeof a));
    }
}

TEST(ModelIo, RejectsWrongVersion) {
    auto text = serialize(sample(ModelKind::Ssn, 1));
    text.replace(0, text.find('\n'), "ssn-model 2");
    EXPECT_THROW(parse(text), Error);
}

TEST(ModelIo, RejectsTruncation) {
    const auto text = serialize(sample(ModelKind::Fusion, 1));
    for (std::size_t cut : {std::size_t{0}, std::size_t{10}, text.size() / 3, text.size() / 2, text.size() - 5})
        EXPECT_THROW(parse(text.substr(0, cut)), Error) << "cut at " << cut;
}

TEST(ModelIo, RejectsShapeInconsistency) {
    auto text = serialize(sample(ModelKind::Ssn, 1));
    const auto at = text.find("block map1 5 4");
    ASSERT_NE(at, std::string::npos);
    text.replace(at, 14, "block map1 5 3");
    EXPECT_THROW(parse(text), Error);
}

TEST(ModelIo, RejectsGarbage) {
    EXPECT_THROW(parse("hello\n"), Error);
    EXPECT_THROW(parse(""), Error);
    TempDir dir;
    EXPECT_THROW(load_model(dir / "nope.ssn"), Error);
    auto text = serialize(sample(ModelKind::Ssn, 1));
    text.replace(text.find("kind ssn"), 8, "kind rnn");
    EXPECT_THROW(parse(text), Error);
}

TEST(ModelIo, FileMatchesStreamBytes) {
    TempDir dir;
    const auto m = sample(ModelKind::Ffn, 4);
    save_model(m, dir / "f.ssn");
    EXPECT_EQ(read_file(dir / "f.ssn"), serialize(m));
}
