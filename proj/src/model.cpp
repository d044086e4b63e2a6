#include "ssn/model.hpp"

#include <algorithm>
#include <cmath>

#include "ssn/dataset.hpp"
#include "ssn/error.hpp"
#include "ssn/metrics.hpp"
#include "ssn/random.hpp"

namespace ssn {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw Error(msg);
}

void require_len(const Vector& v, std::size_t n, const char* what) {
    if (static_cast<std::size_t>(v.size()) != n)
        throw Error(std::string("dimension mismatch: ") + what + " has length " + std::to_string(v.size()) +
                    ", expected " + std::to_string(n));
}

void glorot_fill(Matrix& m, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    // Column-major fill order is part of the determinism contract.
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.uniform(-bound, bound);
}

Matrix glorot(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    Matrix m(rows, cols);
    glorot_fill(m, rng);
    return m;
}

Eigen::Index ix(std::size_t n) { return static_cast<Eigen::Index>(n); }

}  // namespace

void Hyperparams::validate() const {
    require(embed_dim > 0, "embed_dim must be positive");
    require(z_dim > 0, "z_dim must be positive");
    require(d_dim > 0, "d_dim must be positive");
    require(classification_threshold > 0.0 && classification_threshold < 1.0,
            "classification_threshold must lie in (0, 1)");
    require(hinge_margin >= 0.0 && hinge_margin < 1.0, "hinge_margin must lie in [0, 1)");
    require(patience > 0, "patience must be positive");
    require(max_epochs > 0, "max_epochs must be positive");
    require(batch_size > 0, "batch_size must be positive");
    require(n_seeds > 0, "n_seeds must be positive");
    require(adadelta_rho > 0.0 && adadelta_rho < 1.0, "adadelta_rho must lie in (0, 1)");
    require(adadelta_eps > 0.0, "adadelta_eps must be positive");
}

std::string_view to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Ssn: return "ssn";
        case ModelKind::Ffn: return "ffn";
        case ModelKind::Fusion: return "fusion";
        case ModelKind::Cosine: return "cosine";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view s) {
    if (s == "ssn") return ModelKind::Ssn;
    if (s == "ffn") return ModelKind::Ffn;
    if (s == "fusion") return ModelKind::Fusion;
    if (s == "cosine") return ModelKind::Cosine;
    throw Error("unknown model kind '" + std::string(s) + "'");
}

// --- parameter containers ---------------------------------------------------

std::vector<Block> SsnParams::blocks() {
    return {block("gate", gate), block("map1", map1), block("map2", map2), block("hidden", hidden),
            block("output", output)};
}
std::vector<ConstBlock> SsnParams::blocks() const {
    return {block("gate", gate), block("map1", map1), block("map2", map2), block("hidden", hidden),
            block("output", output)};
}

SsnParams SsnParams::zeros(std::size_t embed_dim, std::size_t z_dim, std::size_t d_dim) {
    return {Matrix::Zero(ix(embed_dim), ix(embed_dim)), Matrix::Zero(ix(z_dim), ix(embed_dim)),
            Matrix::Zero(ix(z_dim), ix(embed_dim)), Matrix::Zero(ix(d_dim), ix(z_dim)),
            Matrix::Zero(1, ix(d_dim))};
}

void SsnParams::check_shapes() const {
    const auto e = gate.cols(), z = map1.rows(), d = hidden.rows();
    require(e > 0 && z > 0 && d > 0, "similarity network has an empty block");
    require(gate.rows() == e, "gate must be square");
    require(map1.cols() == e && map2.rows() == z && map2.cols() == e, "map blocks inconsistent with gate");
    require(hidden.cols() == z, "hidden block inconsistent with map blocks");
    require(output.rows() == 1 && output.cols() == d, "output block must be 1 x d");
}

std::vector<Block> FfnParams::blocks() { return {block("hidden", hidden), block("output", output)}; }
std::vector<ConstBlock> FfnParams::blocks() const { return {block("hidden", hidden), block("output", output)}; }

FfnParams FfnParams::zeros(std::size_t embed_dim, std::size_t d_dim) {
    return {Matrix::Zero(ix(d_dim), ix(2 * embed_dim)), Matrix::Zero(1, ix(d_dim))};
}

void FfnParams::check_shapes() const {
    require(hidden.rows() > 0 && hidden.cols() > 0 && hidden.cols() % 2 == 0,
            "feed-forward hidden block must have an even, nonzero column count");
    require(output.rows() == 1 && output.cols() == hidden.rows(), "output block must be 1 x d");
}

double FusionParams::alpha() const { return sigmoid(alpha_logit(0, 0)); }

std::vector<Block> FusionParams::blocks() {
    static constexpr std::string_view names_a[] = {"a.gate", "a.map1", "a.map2", "a.hidden", "a.output"};
    static constexpr std::string_view names_b[] = {"b.gate", "b.map1", "b.map2", "b.hidden", "b.output"};
    std::vector<Block> out;
    auto a = net_a.blocks();
    auto b = net_b.blocks();
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back({names_a[i], a[i].values});
    for (std::size_t i = 0; i < b.size(); ++i) out.push_back({names_b[i], b[i].values});
    out.push_back(block("alpha_logit", alpha_logit));
    return out;
}
std::vector<ConstBlock> FusionParams::blocks() const {
    static constexpr std::string_view names_a[] = {"a.gate", "a.map1", "a.map2", "a.hidden", "a.output"};
    static constexpr std::string_view names_b[] = {"b.gate", "b.map1", "b.map2", "b.hidden", "b.output"};
    std::vector<ConstBlock> out;
    auto a = net_a.blocks();
    auto b = net_b.blocks();
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back({names_a[i], a[i].values});
    for (std::size_t i = 0; i < b.size(); ++i) out.push_back({names_b[i], b[i].values});
    out.push_back(block("alpha_logit", alpha_logit));
    return out;
}

FusionParams FusionParams::zeros(std::size_t embed_a, std::size_t embed_b, std::size_t z_dim, std::size_t d_dim) {
    return {SsnParams::zeros(embed_a, z_dim, d_dim), SsnParams::zeros(embed_b, z_dim, d_dim), Matrix::Zero(1, 1)};
}

void FusionParams::check_shapes() const {
    net_a.check_shapes();
    net_b.check_shapes();
    require(alpha_logit.rows() == 1 && alpha_logit.cols() == 1, "alpha_logit must be a scalar");
}

std::vector<Block> CosineParams::blocks() { return {block("threshold", threshold)}; }
std::vector<ConstBlock> CosineParams::blocks() const { return {block("threshold", threshold)}; }
void CosineParams::check_shapes() const {
    require(threshold.rows() == 1 && threshold.cols() == 1, "cosine threshold must be a scalar");
}

ModelKind Model::kind() const {
    switch (params.index()) {
        case 0: return ModelKind::Ssn;
        case 1: return ModelKind::Ffn;
        case 2: return ModelKind::Fusion;
        default: return ModelKind::Cosine;
    }
}

// --- initialization ---------------------------------------------------------

SsnParams init_ssn(std::size_t embed_dim, std::size_t z_dim, std::size_t d_dim, std::uint64_t seed) {
    Rng rng(seed);
    SsnParams p = SsnParams::zeros(embed_dim, z_dim, d_dim);
    for (auto& b : p.blocks()) {
        Matrix m = glorot(b.values.rows(), b.values.cols(), rng);
        b.values = m;
    }
    return p;
}

SsnParams init_params(const Hyperparams& h, std::uint64_t seed) {
    h.validate();
    return init_ssn(h.embed_dim, h.z_dim, h.d_dim, seed);
}

FfnParams init_ffn(const Hyperparams& h, std::uint64_t seed) {
    h.validate();
    Rng rng(seed);
    FfnParams p;
    p.hidden = glorot(ix(h.d_dim), ix(2 * h.embed_dim), rng);
    p.output = glorot(1, ix(h.d_dim), rng);
    return p;
}

FusionParams init_fusion(const Hyperparams& h, std::uint64_t seed) {
    h.validate();
    require(h.embed_dim_b > 0, "fusion needs embed_dim_b");
    FusionParams p;
    p.net_a = init_ssn(h.embed_dim, h.z_dim, h.d_dim, mix_seed(seed, 1));
    p.net_b = init_ssn(h.embed_dim_b, h.z_dim, h.d_dim, mix_seed(seed, 2));
    p.alpha_logit = Matrix::Zero(1, 1);
    return p;
}

// --- forward computations ---------------------------------------------------

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

Vector similarity_layer(const Vector& u, const Vector& v, const Matrix& weights, Activation act) {
    if (u.size() != v.size() || weights.cols() != u.size()) throw Error("dimension mismatch in similarity layer");
    Vector pre = weights * u.cwiseProduct(v);
    if (act == Activation::Tanh) pre = pre.array().tanh().matrix();
    return pre;
}

ForwardTrace ssn_forward(const SsnParams& p, const Vector& x1, const Vector& x2) {
    require_len(x1, p.embed_dim(), "x1");
    require_len(x2, p.embed_dim(), "x2");
    ForwardTrace t;
    t.gate = (p.gate * x1).unaryExpr([](double a) { return sigmoid(a); });
    t.gated_noun = x2.cwiseProduct(t.gate);
    t.z1 = (p.map1 * x1).array().tanh().matrix();
    t.z2 = (p.map2 * t.gated_noun).array().tanh().matrix();
    t.m = t.z1.cwiseProduct(t.z2);
    t.d = (p.hidden * t.m).array().tanh().matrix();
    t.y = sigmoid(p.output.row(0).dot(t.d));
    return t;
}

FfnOutput ffn_forward(const FfnParams& p, const Vector& x1, const Vector& x2) {
    require_len(x1, p.embed_dim(), "x1");
    require_len(x2, p.embed_dim(), "x2");
    FfnOutput out;
    out.input.resize(x1.size() + x2.size());
    out.input << x1, x2;
    out.d = (p.hidden * out.input).array().tanh().matrix();
    out.y = sigmoid(p.output.row(0).dot(out.d));
    return out;
}

FusionOutput fusion_forward(const FusionParams& p, const Vector& x1a, const Vector& x2a, const Vector& x1b,
                            const Vector& x2b) {
    FusionOutput out;
    out.a = ssn_forward(p.net_a, x1a, x2a);
    out.b = ssn_forward(p.net_b, x1b, x2b);
    out.alpha = p.alpha();
    out.y = out.alpha * out.a.y + (1.0 - out.alpha) * out.b.y;
    return out;
}

double cosine_score(const Vector& x1, const Vector& x2) {
    if (x1.size() != x2.size()) throw Error("dimension mismatch in cosine");
    const double n1 = x1.norm(), n2 = x2.norm();
    if (n1 == 0.0 || n2 == 0.0) throw Error("cosine of a zero vector");
    return std::clamp(x1.dot(x2) / (n1 * n2), -1.0, 1.0);
}

int threshold_classifier(double score, double threshold, ScoreDirection dir) {
    if (dir == ScoreDirection::HigherIsMetaphor) return score >= threshold ? 1 : 0;
    return score < threshold ? 1 : 0;
}

ThresholdChoice tune_threshold(std::span<const ScoredLabel> scores, ScoreDirection dir) {
    if (scores.empty()) throw Error("cannot tune a threshold on no scores");
    std::vector<double> sorted;
    sorted.reserve(scores.size());
    for (const auto& s : scores) sorted.push_back(s.score);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<double> candidates;
    candidates.push_back(sorted.front() - 1.0);
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) candidates.push_back(0.5 * (sorted[i] + sorted[i + 1]));
    candidates.push_back(sorted.back() + 1.0);

    ThresholdChoice best;
    best.f1 = -1.0;
    std::vector<int> gold, pred;
    gold.reserve(scores.size());
    for (const auto& s : scores) gold.push_back(s.label);
    for (double t : candidates) {
        pred.clear();
        for (const auto& s : scores) pred.push_back(threshold_classifier(s.score, t, dir));
        const double f = compute_metrics(gold, pred).f1;
        if (f > best.f1) {
            best.f1 = f;
            best.threshold = t;
        }
    }
    const auto positives = std::count(gold.begin(), gold.end(), 1);
    best.degenerate = positives == 0 || static_cast<std::size_t>(positives) == gold.size();
    return best;
}

Vector extract_phrase_vector(const ForwardTrace& trace) { return trace.m; }

Vector compose_additive(const Vector& x1, const Vector& x2) {
    if (x1.size() != x2.size()) throw Error("dimension mismatch in additive composition");
    return x1 + x2;
}

Vector compose_multiplicative(const Vector& x1, const Vector& x2) {
    if (x1.size() != x2.size()) throw Error("dimension mismatch in multiplicative composition");
    return x1.cwiseProduct(x2);
}

// --- features ---------------------------------------------------------------

std::vector<const EmbeddingTable*> Features::tables() const {
    std::vector<const EmbeddingTable*> t;
    if (a) t.push_back(a);
    if (b) t.push_back(b);
    return t;
}

std::vector<Example> encode(const LabeledDataset& d, const Features& f, ModelKind kind) {
    require(f.a != nullptr, "no embedding table supplied");
    const bool fusion = kind == ModelKind::Fusion;
    require(!fusion || f.b != nullptr, "fusion needs two embedding tables");
    auto fetch = [](const EmbeddingTable& t, const std::string& w) {
        const Vector* v = t.find(w);
        if (!v) throw Error("coverage failure: '" + w + "' not in embedding table " + t.name());
        return v;
    };
    std::vector<Example> out;
    out.reserve(d.size());
    for (const auto& p : d) {
        Example ex;
        ex.x1 = fetch(*f.a, p.w1);
        ex.x2 = fetch(*f.a, p.w2);
        if (fusion) {
            ex.x1b = fetch(*f.b, p.w1);
            ex.x2b = fetch(*f.b, p.w2);
        }
        ex.label = p.label;
        out.push_back(ex);
    }
    return out;
}

double score(const Model& model, const Example& ex) {
    return std::visit(
        [&](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, SsnParams>) return ssn_forward(p, *ex.x1, *ex.x2).y;
            else if constexpr (std::is_same_v<P, FfnParams>) return ffn_forward(p, *ex.x1, *ex.x2).y;
            else if constexpr (std::is_same_v<P, FusionParams>)
                return fusion_forward(p, *ex.x1, *ex.x2, *ex.x1b, *ex.x2b).y;
            else return cosine_score(*ex.x1, *ex.x2);
        },
        model.params);
}

ScoreDirection score_direction(ModelKind kind) {
    return kind == ModelKind::Cosine ? ScoreDirection::LowerIsMetaphor : ScoreDirection::HigherIsMetaphor;
}

double default_threshold(const Model& model) {
    if (const auto* c = std::get_if<CosineParams>(&model.params)) return c->threshold(0, 0);
    return model.hyper.classification_threshold;
}

}  // namespace ssn
