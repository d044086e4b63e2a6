#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "ssn/embeddings.hpp"

namespace ssn {

using Matrix = Eigen::MatrixXd;

struct Hyperparams {
    std::size_t embed_dim = 100;  // input family A
    std::size_t embed_dim_b = 0;  // input family B, fusion only
    std::size_t z_dim = 300;
    std::size_t d_dim = 50;
    double classification_threshold = 0.5;
    double hinge_margin = 0.4;
    std::size_t patience = 5;
    std::size_t max_epochs = 200;
    std::size_t batch_size = 32;
    std::size_t n_seeds = 25;
    double adadelta_rho = 0.95;
    double adadelta_eps = 1e-6;

    /// Throws ssn::Error when a field is outside its domain.
    void validate() const;

    friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

enum class ModelKind { Ssn, Ffn, Fusion, Cosine };

std::string_view to_string(ModelKind k);
ModelKind parse_model_kind(std::string_view s);

/// A named, mutable view of one parameter block.
struct Block {
    std::string_view name;
    Eigen::Map<Matrix> values;
};
struct ConstBlock {
    std::string_view name;
    Eigen::Map<const Matrix> values;
};

inline Block block(std::string_view name, Matrix& m) { return {name, Eigen::Map<Matrix>(m.data(), m.rows(), m.cols())}; }
inline ConstBlock block(std::string_view name, const Matrix& m) {
    return {name, Eigen::Map<const Matrix>(m.data(), m.rows(), m.cols())};
}

/// Gated similarity network. No bias terms.
///   gate   = sigmoid(W_gate x1)          embed x embed
///   x2g    = x2 .* gate
///   z1     = tanh(W_map1 x1)             z x embed
///   z2     = tanh(W_map2 x2g)            z x embed
///   m      = z1 .* z2
///   d      = tanh(W_hidden m)            d x z
///   y      = sigmoid(W_output d)         1 x d
struct SsnParams {
    Matrix gate;
    Matrix map1;
    Matrix map2;
    Matrix hidden;
    Matrix output;

    std::size_t embed_dim() const { return static_cast<std::size_t>(gate.cols()); }
    std::size_t z_dim() const { return static_cast<std::size_t>(map1.rows()); }
    std::size_t d_dim() const { return static_cast<std::size_t>(hidden.rows()); }

    std::vector<Block> blocks();
    std::vector<ConstBlock> blocks() const;

    /// Zero-filled parameters with the given shapes.
    static SsnParams zeros(std::size_t embed_dim, std::size_t z_dim, std::size_t d_dim);
    /// Throws unless the five shapes are mutually consistent.
    void check_shapes() const;
};

/// Feed-forward baseline: d = tanh(W_hidden [x1; x2]), y = sigmoid(W_output d).
struct FfnParams {
    Matrix hidden;  // d x 2*embed
    Matrix output;  // 1 x d

    std::size_t embed_dim() const { return static_cast<std::size_t>(hidden.cols() / 2); }
    std::size_t d_dim() const { return static_cast<std::size_t>(hidden.rows()); }

    std::vector<Block> blocks();
    std::vector<ConstBlock> blocks() const;

    static FfnParams zeros(std::size_t embed_dim, std::size_t d_dim);
    void check_shapes() const;
};

/// Two similarity networks over different embedding families whose outputs
/// are mixed with weight sigmoid(alpha_logit).
struct FusionParams {
    SsnParams net_a;
    SsnParams net_b;
    Matrix alpha_logit = Matrix::Zero(1, 1);

    double alpha() const;

    std::vector<Block> blocks();
    std::vector<ConstBlock> blocks() const;

    static FusionParams zeros(std::size_t embed_a, std::size_t embed_b, std::size_t z_dim, std::size_t d_dim);
    void check_shapes() const;
};

/// Unsupervised baseline: cosine similarity below a tuned threshold is
/// classified metaphorical.
struct CosineParams {
    Matrix threshold = Matrix::Zero(1, 1);

    std::vector<Block> blocks();
    std::vector<ConstBlock> blocks() const;
    void check_shapes() const;
};

using ParamsVariant = std::variant<SsnParams, FfnParams, FusionParams, CosineParams>;

struct Model {
    Hyperparams hyper;
    ParamsVariant params;

    ModelKind kind() const;
};

/// Glorot-uniform initialization, bound sqrt(6 / (fan_in + fan_out)) per block.
SsnParams init_ssn(std::size_t embed_dim, std::size_t z_dim, std::size_t d_dim, std::uint64_t seed);
SsnParams init_params(const Hyperparams& h, std::uint64_t seed);
FfnParams init_ffn(const Hyperparams& h, std::uint64_t seed);
/// Mixing weight starts at 0.5.
FusionParams init_fusion(const Hyperparams& h, std::uint64_t seed);

double sigmoid(double x);

enum class Activation { Tanh, Linear };

/// Hidden similarity layer applied to the elementwise product of two
/// representations: act(W (u .* v)). With a single all-ones row and a linear
/// activation this reduces to the dot product of u and v.
Vector similarity_layer(const Vector& u, const Vector& v, const Matrix& weights, Activation act);

struct ForwardTrace {
    Vector gate;
    Vector gated_noun;
    Vector z1;
    Vector z2;
    Vector m;
    Vector d;
    double y = 0.5;
};

ForwardTrace ssn_forward(const SsnParams& p, const Vector& x1, const Vector& x2);

struct FfnOutput {
    Vector input;  // [x1; x2]
    Vector d;
    double y = 0.5;
};

FfnOutput ffn_forward(const FfnParams& p, const Vector& x1, const Vector& x2);

struct FusionOutput {
    ForwardTrace a;
    ForwardTrace b;
    double alpha = 0.5;
    double y = 0.5;
};

FusionOutput fusion_forward(const FusionParams& p, const Vector& x1a, const Vector& x2a, const Vector& x1b,
                            const Vector& x2b);

/// Standard cosine similarity; throws on a zero vector.
double cosine_score(const Vector& x1, const Vector& x2);

enum class ScoreDirection {
    HigherIsMetaphor,  // network outputs: metaphorical iff score >= t
    LowerIsMetaphor,   // cosine similarity: metaphorical iff score < t
};

int threshold_classifier(double score, double threshold, ScoreDirection dir = ScoreDirection::HigherIsMetaphor);

struct ScoredLabel {
    double score;
    int label;
};

struct ThresholdChoice {
    double threshold = 0.0;
    double f1 = 0.0;
    bool degenerate = false;  // all labels identical
};

/// Picks the threshold maximizing F1 over the midpoints between consecutive
/// distinct sorted scores, plus one point beyond each extreme. Ties go to
/// the smaller threshold.
ThresholdChoice tune_threshold(std::span<const ScoredLabel> scores, ScoreDirection dir);

Vector extract_phrase_vector(const ForwardTrace& trace);
Vector compose_additive(const Vector& x1, const Vector& x2);
Vector compose_multiplicative(const Vector& x1, const Vector& x2);

/// Resolved model inputs for one pair. Pointers reference rows of embedding
/// tables that must outlive the example.
struct Example {
    const Vector* x1 = nullptr;
    const Vector* x2 = nullptr;
    const Vector* x1b = nullptr;  // fusion family B
    const Vector* x2b = nullptr;
    int label = 0;
};

/// Embedding families a model reads. Family B is only consulted for fusion.
struct Features {
    const EmbeddingTable* a = nullptr;
    const EmbeddingTable* b = nullptr;

    std::vector<const EmbeddingTable*> tables() const;
};

class LabeledDataset;

/// Looks up every pair; throws ssn::Error naming the first uncovered word.
std::vector<Example> encode(const LabeledDataset& d, const Features& f, ModelKind kind);

/// Raw model score: y for networks, cosine similarity for the baseline.
double score(const Model& model, const Example& ex);
ScoreDirection score_direction(ModelKind kind);
/// 0.5-style cutoff for networks, the stored tuned threshold for cosine.
double default_threshold(const Model& model);

}  // namespace ssn
