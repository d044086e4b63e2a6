#include "ssn/model_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

#include "ssn/error.hpp"

namespace ssn {

namespace {

constexpr std::string_view kMagic = "ssn-model";

std::string hex_bits(double x) {
    char buf[17];
    const auto bits = std::bit_cast<std::uint64_t>(x);
    auto [p, ec] = std::to_chars(buf, buf + 16, bits, 16);
    const std::string digits(buf, p);
    return std::string(16 - digits.size(), '0') + digits;
}

double parse_bits(const std::string& tok) {
    std::uint64_t bits = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), bits, 16);
    if (ec != std::errc() || p != tok.data() + tok.size() || tok.size() != 16)
        throw Error("model file: bad value '" + tok + "'");
    return std::bit_cast<double>(bits);
}

struct HyperField {
    std::string_view name;
    std::size_t Hyperparams::*count = nullptr;
    double Hyperparams::*real = nullptr;
};

constexpr HyperField kHyperFields[] = {
    {"embed_dim", &Hyperparams::embed_dim, nullptr},
    {"embed_dim_b", &Hyperparams::embed_dim_b, nullptr},
    {"z_dim", &Hyperparams::z_dim, nullptr},
    {"d_dim", &Hyperparams::d_dim, nullptr},
    {"classification_threshold", nullptr, &Hyperparams::classification_threshold},
    {"hinge_margin", nullptr, &Hyperparams::hinge_margin},
    {"patience", &Hyperparams::patience, nullptr},
    {"max_epochs", &Hyperparams::max_epochs, nullptr},
    {"batch_size", &Hyperparams::batch_size, nullptr},
    {"n_seeds", &Hyperparams::n_seeds, nullptr},
    {"adadelta_rho", nullptr, &Hyperparams::adadelta_rho},
    {"adadelta_eps", nullptr, &Hyperparams::adadelta_eps},
};

ParamsVariant empty_params(ModelKind kind, const Hyperparams& h) {
    switch (kind) {
        case ModelKind::Ssn: return SsnParams::zeros(h.embed_dim, h.z_dim, h.d_dim);
        case ModelKind::Ffn: return FfnParams::zeros(h.embed_dim, h.d_dim);
        case ModelKind::Fusion: return FusionParams::zeros(h.embed_dim, h.embed_dim_b, h.z_dim, h.d_dim);
        case ModelKind::Cosine: return CosineParams{};
    }
    throw Error("unknown model kind");
}

std::string expect_token(std::istream& in, const char* what) {
    std::string tok;
    if (!(in >> tok)) throw Error(std::string("model file truncated while reading ") + what);
    return tok;
}

std::size_t expect_count(std::istream& in, const char* what) {
    const auto tok = expect_token(in, what);
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw Error(std::string("model file: bad integer for ") + what + ": '" + tok + "'");
    return v;
}

}  // namespace

void write_model(const Model& model, std::ostream& out) {
    out << kMagic << ' ' << kModelFormatVersion << '\n';
    out << "kind " << to_string(model.kind()) << '\n';
    for (const auto& f : kHyperFields) {
        out << "hyper " << f.name << ' ';
        if (f.count) out << model.hyper.*f.count;
        else out << hex_bits(model.hyper.*f.real);
        out << '\n';
    }
    std::visit(
        [&](const auto& p) {
            for (const auto& b : p.blocks()) {
                out << "block " << b.name << ' ' << b.values.rows() << ' ' << b.values.cols() << '\n';
                for (Eigen::Index i = 0; i < b.values.rows(); ++i) {
                    for (Eigen::Index j = 0; j < b.values.cols(); ++j) {
                        if (j) out << ' ';
                        out << hex_bits(b.values(i, j));
                    }
                    out << '\n';
                }
            }
        },
        model.params);
    out << "end\n";
}

void save_model(const Model& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model file " + path.string());
    write_model(model, out);
    if (!out) throw Error("failed writing model file " + path.string());
}

Model read_model(std::istream& in) {
    if (expect_token(in, "magic") != kMagic) throw Error("not a model file");
    const auto version = expect_count(in, "version");
    if (version != static_cast<std::size_t>(kModelFormatVersion))
        throw Error("model file version " + std::to_string(version) + " is not supported (expected " +
                    std::to_string(kModelFormatVersion) + ")");
    if (expect_token(in, "kind") != "kind") throw Error("model file: missing kind");
    const ModelKind kind = parse_model_kind(expect_token(in, "kind"));

    Model model;
    for (const auto& f : kHyperFields) {
        if (expect_token(in, "hyperparameter") != "hyper") throw Error("model file: expected hyperparameter");
        const auto name = expect_token(in, "hyperparameter name");
        if (name != f.name) throw Error("model file: expected hyperparameter " + std::string(f.name) + ", got " + name);
        if (f.count) model.hyper.*f.count = expect_count(in, f.name.data());
        else model.hyper.*f.real = parse_bits(expect_token(in, f.name.data()));
    }
    if (kind != ModelKind::Cosine) model.hyper.validate();

    model.params = empty_params(kind, model.hyper);
    std::visit(
        [&](auto& p) {
            for (auto& b : p.blocks()) {
                if (expect_token(in, "block") != "block") throw Error("model file: expected block");
                const auto name = expect_token(in, "block name");
                if (name != b.name)
                    throw Error("model file: expected block " + std::string(b.name) + ", got " + name);
                const auto rows = expect_count(in, "rows");
                const auto cols = expect_count(in, "cols");
                if (static_cast<Eigen::Index>(rows) != b.values.rows() ||
                    static_cast<Eigen::Index>(cols) != b.values.cols())
                    throw Error("model file: block " + name + " is " + std::to_string(rows) + "x" +
                                std::to_string(cols) + ", hyperparameters imply " +
                                std::to_string(b.values.rows()) + "x" + std::to_string(b.values.cols()));
                for (Eigen::Index i = 0; i < b.values.rows(); ++i)
                    for (Eigen::Index j = 0; j < b.values.cols(); ++j)
                        b.values(i, j) = parse_bits(expect_token(in, "value"));
                if (!b.values.allFinite()) throw Error("model file: non-finite value in block " + name);
            }
            p.check_shapes();
        },
        model.params);
    if (expect_token(in, "end marker") != "end") throw Error("model file: missing end marker");
    return model;
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file " + path.string());
    try {
        return read_model(in);
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

}  // namespace ssn
