#include "cli.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ssn/dataset.hpp"
#include "ssn/embeddings.hpp"
#include "ssn/error.hpp"
#include "ssn/evaluation.hpp"
#include "ssn/gradcheck.hpp"
#include "ssn/model.hpp"
#include "ssn/model_io.hpp"
#include "ssn/training.hpp"

namespace fs = std::filesystem;

namespace ssn::cli {

namespace {

struct RunConfig {
    std::vector<std::string> embeddings;
    std::string train;
    std::string dev;
    std::string test;
    std::string extra;
    std::string model;
    std::string kind = "ssn";
    std::string out = ".";
    std::string seeds = "1-25";
    std::string method = "ssn-m";
    Hyperparams hyper;
    std::optional<double> threshold;
    std::size_t step = 500;
    std::size_t k = 10;
    std::size_t dev_size = 200;
    std::size_t configs = 20;
    std::uint64_t split_seed = 1;
    int jobs = 1;
    bool lowercase = false;
    std::vector<std::string> words;
};

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw Error("bad seed '" + std::string(s) + "'");
    return v;
}

void add_embeddings(CLI::App* cmd, RunConfig& c, bool required = true) {
    auto* opt = cmd->add_option("--embeddings", c.embeddings,
                                "Text embedding file; repeat for fusion (family A, then B)")
                    ->check(CLI::ExistingFile);
    if (required) opt->required();
    cmd->add_flag("--lowercase", c.lowercase, "Lowercase words in embedding and pair files")->capture_default_str();
}

void add_hyper(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--z-dim", c.hyper.z_dim, "Size of the mapped word representations")->capture_default_str();
    cmd->add_option("--d-dim", c.hyper.d_dim, "Size of the hidden similarity layer")->capture_default_str();
    cmd->add_option("--batch-size", c.hyper.batch_size, "Minibatch size")->capture_default_str();
    cmd->add_option("--patience", c.hyper.patience, "Epochs without dev F1 improvement before stopping")
        ->capture_default_str();
    cmd->add_option("--max-epochs", c.hyper.max_epochs, "Epoch limit")->capture_default_str();
}

void add_kind(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--kind", c.kind, "Model kind")
        ->check(CLI::IsMember({"ssn", "ffn", "fusion", "cosine"}))
        ->capture_default_str();
}

void add_seeds(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--seeds", c.seeds, "Seed list, e.g. 1,2,3 or 1-25")->capture_default_str();
    cmd->add_option("--jobs", c.jobs, "Runs trained concurrently")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--split-seed", c.split_seed, "Seed for data splits")->capture_default_str();
}

void add_out(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
}

struct Tables {
    std::vector<EmbeddingTable> tables;
    Features features() const {
        Features f;
        if (!tables.empty()) f.a = &tables[0];
        if (tables.size() > 1) f.b = &tables[1];
        return f;
    }
};

Tables load_tables(const RunConfig& c, ModelKind kind, std::optional<std::size_t> dim_a = std::nullopt,
                   std::optional<std::size_t> dim_b = std::nullopt) {
    const std::size_t want = kind == ModelKind::Fusion ? 2 : 1;
    if (c.embeddings.size() != want)
        throw Error(std::string(to_string(kind)) + " needs " + std::to_string(want) + " --embeddings file(s), got " +
                    std::to_string(c.embeddings.size()));
    Tables t;
    t.tables.reserve(want);
    for (std::size_t i = 0; i < want; ++i) {
        LoadOptions opt;
        opt.lowercase = c.lowercase;
        opt.expected_dim = i == 0 ? dim_a : dim_b;
        t.tables.push_back(load_embeddings(c.embeddings[i], opt));
    }
    return t;
}

LabeledDataset load_pairs_cfg(const RunConfig& c, const std::string& path, const Features& f, const char* role,
                              std::ostream& err) {
    const auto d = load_pairs(path, c.lowercase);
    auto r = filter_oov(d, f.tables());
    err << role << ": " << path << ": " << d.size() << " pairs, " << r.kept.size() << " kept, " << r.dropped
        << " dropped (out of vocabulary)\n";
    return std::move(r.kept);
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path.string());
    return f;
}

MultiSeedOptions run_options(const RunConfig& c) {
    MultiSeedOptions o;
    o.jobs = c.jobs;
    return o;
}

// --- commands ---------------------------------------------------------------

int cmd_train(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto kind = parse_model_kind(c.kind);
    const auto seeds = parse_seeds(c.seeds);
    const auto tables = load_tables(c, kind);
    const auto f = tables.features();

    auto train_set = load_pairs_cfg(c, c.train, f, "train", err);
    LabeledDataset dev;
    if (!c.dev.empty()) {
        dev = load_pairs_cfg(c, c.dev, f, "dev", err);
    } else {
        auto split = split_train_dev(train_set, c.dev_size, c.split_seed);
        train_set = std::move(split.train);
        dev = std::move(split.dev);
        err << "dev: carved " << dev.size() << " pairs from train (split seed " << c.split_seed << ")\n";
    }
    const bool has_test = !c.test.empty();
    const LabeledDataset test = has_test ? load_pairs_cfg(c, c.test, f, "test", err) : dev;

    ensure_dir(c.out);
    const fs::path model_path = c.model.empty() ? fs::path(c.out) / "model.ssn" : fs::path(c.model);

    struct Best {
        double f1 = -1.0;
        std::size_t index = 0;
        std::optional<Model> model;
    } best;
    auto options = run_options(c);
    options.on_run = [&](std::size_t idx, const TrainResult& tr) {
        write_history_csv(tr.history, fs::path(c.out) / ("history_seed" + std::to_string(seeds[idx]) + ".csv"));
        const double f1 = tr.history.best().dev.f1;
        if (!best.model || f1 > best.f1 || (f1 == best.f1 && idx < best.index)) {
            best.f1 = f1;
            best.index = idx;
            best.model = tr.model;
        }
    };
    const auto result = train_multi_seed(kind, train_set, dev, test, f, c.hyper, seeds, options);
    save_model(*best.model, model_path);

    auto runs = open_out(fs::path(c.out) / "runs.csv");
    write_results_header(runs);
    write_multi_seed_rows(runs, std::string(to_string(kind)) + (has_test ? "-test" : "-dev"), train_set.size(),
                          result);

    const char* eval_name = has_test ? "test" : "dev";
    for (const auto& r : result.runs)
        out << "seed " << r.seed << "  epochs " << r.epochs_run << "  best " << r.best_epoch << "  dev F1 "
            << percent(r.dev.f1) << "  " << eval_name << " " << format_metrics(summary(r.test)) << '\n';
    out << "final dev F1 (best run, seed " << seeds[best.index] << "): " << percent(best.f1) << '\n';
    out << eval_name << " mean over " << seeds.size() << " run(s): " << format_mean_sd(result.mean, result.sd)
        << '\n';
    out << "model written to " << model_path.string() << '\n';
    return 0;
}

int cmd_evaluate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto model = load_model(c.model);
    const auto kind = model.kind();
    const auto tables =
        load_tables(c, kind, model.hyper.embed_dim,
                    kind == ModelKind::Fusion ? std::optional<std::size_t>(model.hyper.embed_dim_b) : std::nullopt);
    const auto f = tables.features();
    const auto test = load_pairs_cfg(c, c.test, f, "test", err);
    if (test.empty()) throw Error("no test pairs left after dropping out-of-vocabulary pairs");
    const double threshold = c.threshold.value_or(default_threshold(model));
    const auto result = evaluate(model, test, f, threshold);

    ensure_dir(c.out);
    auto tsv = open_out(fs::path(c.out) / "predictions.tsv");
    write_predictions_tsv(result, tsv);
    auto csv = open_out(fs::path(c.out) / "metrics.csv");
    write_results_header(csv);
    write_result_row(csv, std::string(to_string(kind)) + "-eval", test.size(), "-", summary(result.metrics));

    const auto dropped = load_pairs(c.test, c.lowercase).size() - test.size();
    const auto& m = result.metrics;
    out << "pairs " << test.size() << "  dropped " << dropped << "  threshold " << threshold << '\n';
    out << "tp " << m.tp << "  fp " << m.fp << "  tn " << m.tn << "  fn " << m.fn << '\n';
    out << format_metrics(summary(m)) << '\n';
    if (m.precision_undefined) out << "note: no positive predictions, precision reported as 0\n";
    if (m.recall_undefined) out << "note: no positive gold labels, recall reported as 0\n";
    return 0;
}

int cmd_predict(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto model = load_model(c.model);
    const auto kind = model.kind();
    const auto tables =
        load_tables(c, kind, model.hyper.embed_dim,
                    kind == ModelKind::Fusion ? std::optional<std::size_t>(model.hyper.embed_dim_b) : std::nullopt);
    const auto f = tables.features();
    std::string w1 = c.words.at(0), w2 = c.words.at(1);
    if (c.lowercase) {
        for (auto* w : {&w1, &w2})
            for (auto& ch : *w) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    for (const auto* t : f.tables())
        for (const auto* w : {&w1, &w2})
            if (!t->contains(*w)) {
                err << "OOV: '" << *w << "' is not in embedding table " << t->name() << '\n';
                return 3;
            }
    const LabeledDataset one("query", {LabeledPair{w1, w2, 0, Relation::Unknown}});
    const auto ex = encode(one, f, kind);
    const double s = score(model, ex.front());
    const double threshold = c.threshold.value_or(default_threshold(model));
    const int label = threshold_classifier(s, threshold, score_direction(kind));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", s);
    out << "score=" << buf << " label=" << (label ? "metaphorical" : "literal") << '\n';
    return 0;
}

int cmd_cross_validate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto kind = parse_model_kind(c.kind);
    const auto seeds = parse_seeds(c.seeds);
    const auto tables = load_tables(c, kind);
    const auto f = tables.features();
    const auto data = load_pairs_cfg(c, c.train, f, "data", err);
    ExperimentOptions opt;
    opt.split_seed = c.split_seed;
    opt.runs = run_options(c);
    const auto cv = cross_validate(kind, data, f, c.hyper, c.k, seeds, opt);

    ensure_dir(c.out);
    auto csv = open_out(fs::path(c.out) / "cv_results.csv");
    write_results_header(csv);
    for (const auto& fold : cv.folds) {
        write_multi_seed_rows(csv, "fold" + std::to_string(fold.fold), fold.n_train, fold.runs);
        out << "fold " << fold.fold << "  train " << fold.n_train << "  dev " << fold.n_dev << "  test "
            << fold.n_test << "  " << format_metrics(fold.runs.mean) << '\n';
    }
    write_result_row(csv, "cv", data.size(), "mean", cv.mean);
    write_result_row(csv, "cv", data.size(), "sd", cv.sd);
    out << c.k << "-fold mean: " << format_mean_sd(cv.mean, cv.sd) << '\n';
    return 0;
}

int cmd_learning_curve(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto kind = parse_model_kind(c.kind);
    const auto seeds = parse_seeds(c.seeds);
    const auto tables = load_tables(c, kind);
    const auto f = tables.features();
    const auto base = load_pairs_cfg(c, c.train, f, "train", err);
    const auto pool = load_pairs_cfg(c, c.extra, f, "extra", err);
    const auto dev = load_pairs_cfg(c, c.dev, f, "dev", err);
    const auto test = load_pairs_cfg(c, c.test, f, "test", err);
    ExperimentOptions opt;
    opt.split_seed = c.split_seed;
    opt.runs = run_options(c);
    const auto curve = learning_curve(kind, base, pool, dev, test, f, c.hyper, c.step, seeds, opt);
    err << "extra: " << curve.pool_before_dedup - curve.pool_after_dedup
        << " pairs removed as overlapping dev/test, " << curve.pool_after_dedup << " remain\n";

    ensure_dir(c.out);
    auto csv = open_out(fs::path(c.out) / "curve.csv");
    write_results_header(csv);
    for (const auto& pt : curve.points) {
        write_multi_seed_rows(csv, "curve", pt.n_train, pt.runs);
        out << "n_train " << pt.n_train << "  " << format_mean_sd(pt.runs.mean, pt.runs.sd) << '\n';
    }
    return 0;
}

int cmd_export_phrases(const RunConfig& c, std::ostream& out, std::ostream& err) {
    std::optional<Model> model;
    std::optional<std::size_t> dim;
    if (c.method == "ssn-m") {
        if (c.model.empty()) throw Error("--method ssn-m needs --model");
        model = load_model(c.model);
        if (model->kind() != ModelKind::Ssn) throw Error("--method ssn-m needs a model of kind ssn");
        dim = model->hyper.embed_dim;
    }
    const auto tables = load_tables(c, ModelKind::Ssn, dim);
    const auto f = tables.features();
    const auto pairs = load_pairs_cfg(c, c.train, f, "pairs", err);
    ensure_dir(c.out);
    const auto path = fs::path(c.out) / "phrases.tsv";
    auto tsv = open_out(path);
    char buf[64];
    for (const auto& p : pairs) {
        const Vector& x1 = *f.a->find(p.w1);
        const Vector& x2 = *f.a->find(p.w2);
        Vector v;
        if (c.method == "additive") v = compose_additive(x1, x2);
        else if (c.method == "multiplicative") v = compose_multiplicative(x1, x2);
        else v = extract_phrase_vector(ssn_forward(std::get<SsnParams>(model->params), x1, x2));
        tsv << p.w1 << '\t' << p.w2 << '\t' << p.label;
        for (double x : v) {
            std::snprintf(buf, sizeof buf, "%.17g", x);
            tsv << '\t' << buf;
        }
        tsv << '\n';
    }
    out << "wrote " << pairs.size() << " phrase vectors (" << c.method << ") to " << path.string() << '\n';
    return 0;
}

int cmd_grad_check(const RunConfig& c, std::ostream& out, std::ostream&) {
    const auto kind = parse_model_kind(c.kind);
    const auto seeds = parse_seeds(c.seeds);
    const auto report = grad_check(kind, c.configs, seeds.front());
    char buf[128];
    out << "gradient check: " << to_string(kind) << ", " << report.configs << " random configs, eps "
        << report.epsilon << ", tolerance " << report.tolerance << '\n';
    for (const auto& b : report.blocks) {
        std::snprintf(buf, sizeof buf, "  %-12s max rel error %.3e", b.name.c_str(), b.max_rel_error);
        out << buf << '\n';
    }
    out << "  dead zone   " << (report.dead_zone_ok ? "all-zero analytic and numeric gradients" : "NONZERO")
        << '\n';
    out << (report.passed() ? "PASS" : "FAIL") << '\n';
    return report.passed() ? 0 : 1;
}

std::string effective_config(const CLI::App& sub) {
    std::ostringstream os;
    os << "# effective configuration (" << sub.get_name() << ")\n";
    for (const auto* opt : sub.get_options()) {
        if (opt->get_name() == "--help" || opt->get_name() == "--config" || opt->get_lnames().empty()) continue;
        std::string value;
        if (opt->count() > 0) {
            for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
        } else {
            value = opt->get_default_str();
        }
        if (value.empty() && opt->get_expected_max() == 0) value = "false";
        os << "#   " << opt->get_lnames().front() << " = " << value << '\n';
    }
    return os.str();
}

}  // namespace

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
    std::vector<std::uint64_t> seeds;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string_view::npos) comma = text.size();
        const auto item = text.substr(start, comma - start);
        if (item.empty()) throw Error("empty entry in seed list '" + std::string(text) + "'");
        const auto dash = item.find('-');
        if (dash == std::string_view::npos) {
            seeds.push_back(parse_u64(item));
        } else {
            const auto lo = parse_u64(item.substr(0, dash)), hi = parse_u64(item.substr(dash + 1));
            if (hi < lo) throw Error("descending seed range '" + std::string(item) + "'");
            for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
        }
        start = comma + 1;
    }
    if (seeds.empty()) throw Error("empty seed list");
    return seeds;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Supervised similarity network for metaphor detection in word pairs", "ssn"};
    app.set_config("--config", "", "TOML/INI file with option values (command-line flags take precedence)");
    app.require_subcommand(1);
    RunConfig c;

    auto* train = app.add_subcommand("train", "Train models over one or more seeds");
    add_kind(train, c);
    add_embeddings(train, c);
    train->add_option("--train", c.train, "Training pairs (TSV)")->required()->check(CLI::ExistingFile);
    train->add_option("--dev", c.dev, "Development pairs; carved from --train when absent")
        ->check(CLI::ExistingFile);
    train->add_option("--dev-size", c.dev_size, "Pairs carved from --train when --dev is absent")
        ->capture_default_str();
    train->add_option("--test", c.test, "Test pairs, evaluated after every run")->check(CLI::ExistingFile);
    train->add_option("--model", c.model, "Where to write the best model (default OUT/model.ssn)");
    add_hyper(train, c);
    add_seeds(train, c);
    add_out(train, c);

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a labelled pair file with a saved model");
    evaluate_cmd->add_option("--model", c.model, "Model file")->required()->check(CLI::ExistingFile);
    add_embeddings(evaluate_cmd, c);
    evaluate_cmd->add_option("--test", c.test, "Pairs to evaluate")->required()->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--threshold", c.threshold, "Decision threshold (default: model's own)");
    add_out(evaluate_cmd, c);

    auto* predict_cmd = app.add_subcommand("predict", "Score a single word pair");
    predict_cmd->add_option("--model", c.model, "Model file")->required()->check(CLI::ExistingFile);
    add_embeddings(predict_cmd, c);
    predict_cmd->add_option("--threshold", c.threshold, "Decision threshold (default: model's own)");
    predict_cmd->add_option("words", c.words, "Slot-1 word (adjective or verb) and slot-2 word (noun)")
        ->required()
        ->expected(2);

    auto* cv = app.add_subcommand("cross-validate", "k-fold cross-validation");
    add_kind(cv, c);
    add_embeddings(cv, c);
    cv->add_option("--train,--data", c.train, "Labelled pairs to partition")->required()->check(CLI::ExistingFile);
    cv->add_option("--k", c.k, "Number of folds")->capture_default_str();
    add_hyper(cv, c);
    add_seeds(cv, c);
    add_out(cv, c);

    auto* curve = app.add_subcommand("learning-curve", "Train on growing amounts of extra data");
    add_kind(curve, c);
    add_embeddings(curve, c);
    curve->add_option("--train", c.train, "Base training pairs")->required()->check(CLI::ExistingFile);
    curve->add_option("--extra", c.extra, "Additional pairs added incrementally")->required()->check(CLI::ExistingFile);
    curve->add_option("--dev", c.dev, "Development pairs")->required()->check(CLI::ExistingFile);
    curve->add_option("--test", c.test, "Test pairs")->required()->check(CLI::ExistingFile);
    curve->add_option("--step", c.step, "Extra pairs added per point")->capture_default_str()->check(
        CLI::PositiveNumber);
    add_hyper(curve, c);
    add_seeds(curve, c);
    add_out(curve, c);

    auto* phrases = app.add_subcommand("export-phrases", "Write phrase vectors for external visualisation");
    add_embeddings(phrases, c);
    phrases->add_option("--train,--pairs", c.train, "Pairs to export")->required()->check(CLI::ExistingFile);
    phrases->add_option("--model", c.model, "Similarity network (for --method ssn-m)")->check(CLI::ExistingFile);
    phrases->add_option("--method", c.method, "Composition method")
        ->check(CLI::IsMember({"ssn-m", "additive", "multiplicative"}))
        ->capture_default_str();
    add_out(phrases, c);

    auto* gc = app.add_subcommand("grad-check", "Compare analytic gradients with finite differences");
    gc->add_option("--kind", c.kind, "Model kind")->check(CLI::IsMember({"ssn", "ffn", "fusion"}))->capture_default_str();
    gc->add_option("--configs", c.configs, "Random configurations")->capture_default_str();
    gc->add_option("--seeds", c.seeds, "First seed is used")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
    }

    try {
        c.hyper.validate();
        for (auto* sub : app.get_subcommands()) err << effective_config(*sub);
        if (*train) return cmd_train(c, out, err);
        if (*evaluate_cmd) return cmd_evaluate(c, out, err);
        if (*predict_cmd) return cmd_predict(c, out, err);
        if (*cv) return cmd_cross_validate(c, out, err);
        if (*curve) return cmd_learning_curve(c, out, err);
        if (*phrases) return cmd_export_phrases(c, out, err);
        if (*gc) return cmd_grad_check(c, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace ssn::cli
