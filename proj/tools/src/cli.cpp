#include "lisible/cli.hpp"

#include "lisible/annotation.hpp"
#include "lisible/annotation_http.hpp"
#include "lisible/baselines.hpp"
#include "lisible/corpus.hpp"
#include "lisible/digest.hpp"
#include "lisible/error.hpp"
#include "lisible/evaluation.hpp"
#include "lisible/indicators.hpp"
#include "lisible/ingest.hpp"
#include "lisible/lexicons.hpp"
#include "lisible/models.hpp"
#include "lisible/synth.hpp"
#include "lisible/text.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

namespace lisible::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using text::format_double;

struct Context {
    Context(std::ostream& o, std::ostream& e) : out(o), err(e) {}

    std::ostream& out;
    std::ostream& err;
    bool quiet = false;
    std::uint64_t seed = 1;
    std::string manifest_path;
    /// Files whose content hashes go into the manifest.
    std::vector<fs::path> inputs;
    /// Main output, used to place the manifest next to it.
    std::string primary_output;
    bool output_is_dir = false;

    void warn(const std::string& msg) const {
        if (!quiet) err << "warning: " << msg << '\n';
    }
    void note(const std::string& msg) const {
        if (!quiet) err << msg << '\n';
    }
    void add_input(const fs::path& p) { inputs.push_back(p); }
};

/// Either stdout or a file opened for writing.
class Sink {
public:
    Sink(Context& ctx, const std::string& path) : path_(path) {
        if (path.empty()) {
            os_ = &ctx.out;
        } else {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) throw InputError("cannot write " + path);
            os_ = &file_;
        }
    }
    std::ostream& operator*() { return *os_; }
    void close() {
        os_->flush();
        if (!*os_) throw InputError("write failed" + (path_.empty() ? std::string() : ": " + path_));
        if (file_.is_open()) file_.close();
    }

private:
    std::string path_;
    std::ofstream file_;
    std::ostream* os_ = nullptr;
};

// ---------------------------------------------------------------------------
// Inputs

std::vector<fs::path> expand_inputs(const std::vector<std::string>& args, bool plain) {
    std::vector<fs::path> files;
    for (const auto& a : args) {
        const fs::path p(a);
        if (fs::is_directory(p)) {
            if (!plain) {
                for (auto& f : list_conllu(p)) files.push_back(std::move(f));
                continue;
            }
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.is_regular_file() && entry.path().extension() == ".txt") found.push_back(entry.path());
            }
            if (found.empty()) throw ValidationError("no .txt files in " + p.string());
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::is_regular_file(p)) {
            files.push_back(p);
        } else {
            throw NotFoundError("no such file or directory: " + a);
        }
    }
    return files;
}

/// "<parent dir>/<stem>", or just the stem for files given without a directory.
std::string base_id(const fs::path& p) {
    const auto parent = p.parent_path().filename().string();
    const auto stem = p.stem().string();
    if (parent.empty() || parent == "." || parent == "..") return stem;
    return parent + "/" + stem;
}

std::vector<Document> load_documents(Context& ctx, const std::vector<std::string>& args, bool plain) {
    std::vector<Document> docs;
    for (const auto& path : expand_inputs(args, plain)) {
        ctx.add_input(path);
        const std::string id = base_id(path);
        if (plain) {
            docs.push_back(segment_plain_text(read_file(path), id));
            continue;
        }
        auto sidecar = path;
        sidecar.replace_extension(".trees");
        if (fs::exists(sidecar)) ctx.add_input(sidecar);
        auto loaded = load_parsed(path);
        if (loaded.size() == 1) {
            loaded.front().id = id;
        } else {
            for (auto& d : loaded) d.id = id + "/" + d.id;
        }
        for (auto& d : loaded) docs.push_back(std::move(d));
    }
    return docs;
}

struct LexiconFlags {
    std::vector<std::string> graded;
    std::string connectives;
    int levels = GradedLexicon::kDefaultLevels;

    void add_to(CLI::App* app, bool required) {
        auto* g = app->add_option("--graded-lexicon", graded,
                                  "Graded lexicon TSV (lemma, level); repeat to average several");
        auto* c = app->add_option("--connectives-lexicon", connectives,
                                  "Connectives lexicon TSV (connective, category, complexity)");
        if (required) {
            g->required();
            c->required();
        }
        app->add_option("--levels", levels, "Number of levels in the graded lexicons")
            ->capture_default_str()
            ->check(CLI::Range(1, 100));
    }

    bool given() const { return !graded.empty() || !connectives.empty(); }

    Lexicons load(Context& ctx) const {
        if (graded.empty()) throw ParameterError("--graded-lexicon is required");
        if (connectives.empty()) throw ParameterError("--connectives-lexicon is required");
        Lexicons lex;
        for (const auto& g : graded) {
            ctx.add_input(g);
            lex.graded.push_back(load_graded_lexicon(fs::path(g), levels));
        }
        ctx.add_input(connectives);
        lex.connectives = load_connectives(fs::path(connectives));
        return lex;
    }
};

/// Lexicons from the flags when given, else the ones embedded in the model.
Lexicons lexicons_for(Context& ctx, const LexiconFlags& flags, const ScoringModel& model,
                      const std::string& model_path) {
    if (flags.given()) return flags.load(ctx);
    if (!model.lexicons) {
        throw ParameterError(model_path +
                             " embeds no lexicons; pass --graded-lexicon and --connectives-lexicon");
    }
    return *model.lexicons;
}

bool parse_number(std::string_view s, double& value) {
    s = text::trim(s);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    return ec == std::errc() && ptr == s.data() + s.size();
}

/// id -> value from a TSV whose first column is the id. A header row is
/// recognized when its value column is not numeric; `column` selects a
/// column by header name (default: the last one).
std::map<std::string, double> read_score_table(Context& ctx, const std::string& path, const std::string& column) {
    ctx.add_input(path);
    std::istringstream in(read_file(path));
    std::map<std::string, double> values;
    std::string line;
    std::size_t lineno = 0;
    std::optional<std::size_t> col;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line.front() == '#') continue;
        const auto fields = text::split(line, '\t');
        if (fields.size() < 2) throw ParseError(path + ": expected at least two tab-separated columns", lineno);
        if (!col) {
            std::size_t c = fields.size() - 1;
            double probe = 0.0;
            const bool header = !column.empty() || !parse_number(fields[c], probe);
            if (header) {
                if (!column.empty()) {
                    const auto it = std::find(fields.begin(), fields.end(), column);
                    if (it == fields.end()) throw FormatError(path + ": no column named \"" + column + "\"");
                    c = static_cast<std::size_t>(it - fields.begin());
                    if (c == 0) throw FormatError(path + ": the first column holds ids, not scores");
                }
                col = c;
                continue;
            }
            col = c;
        }
        if (*col >= fields.size()) throw ParseError(path + ": missing score column", lineno);
        double v = 0.0;
        if (!parse_number(fields[*col], v)) {
            throw ParseError(path + ": not a number: \"" + std::string(fields[*col]) + "\"", lineno);
        }
        if (!values.emplace(std::string(fields[0]), v).second) {
            throw ValidationError(path + ": duplicate id \"" + std::string(fields[0]) + "\"");
        }
    }
    if (values.empty()) throw ValidationError(path + ": no scores");
    return values;
}

BwsDesign read_design(Context& ctx, const std::string& path) {
    ctx.add_input(path);
    std::istringstream in(read_file(path));
    return read_design_jsonl(in);
}

std::vector<BwsResponse> read_responses(Context& ctx, const std::string& path) {
    ctx.add_input(path);
    std::istringstream in(read_file(path));
    return read_responses_jsonl(in);
}

std::string model_label(const ScoringModel& m) { return std::string(to_string(m.kind)); }

// ---------------------------------------------------------------------------
// Commands

struct Command {
    CLI::App* app = nullptr;
    std::function<void(Context&)> exec;
};

void add_features(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::vector<std::string> in;
        LexiconFlags lex;
        std::string format = "tsv";
        bool plain = false;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("features", "Extract the 28 indicators from documents");
    app->add_option("--in", o->in, "CoNLL-U files or directories of them")->required();
    o->lex.add_to(app, true);
    app->add_option("--format", o->format, "Output format")
        ->check(CLI::IsMember({"tsv", "json"}))
        ->capture_default_str();
    app->add_flag("--plain", o->plain, "Inputs are raw UTF-8 text (.txt), segmented heuristically");
    app->add_option("--out", o->out, "Output file (default: stdout)");
    cmds.push_back({app, [o](Context& ctx) {
                        const auto lex = o->lex.load(ctx);
                        const auto docs = load_documents(ctx, o->in, o->plain);
                        std::vector<NamedFeatures> rows;
                        for (const auto& d : docs) {
                            auto report = extract_features(d, lex);
                            for (const auto& w : report.warnings) ctx.warn(d.id + ": " + w);
                            rows.push_back({d.id, report.features});
                        }
                        ctx.primary_output = o->out;
                        Sink sink(ctx, o->out);
                        if (o->format == "tsv") {
                            write_features_tsv(*sink, rows);
                        } else {
                            for (const auto& r : rows) {
                                Json j{{"doc_id", r.doc_id}, {"features", Json::parse(features_to_json(r.features))}};
                                *sink << j.dump() << '\n';
                            }
                        }
                        sink.close();
                    }});
}

void add_baselines(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::vector<std::string> in;
        bool plain = false;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("baselines", "Compute FKGL, SMOG and Gunning Fog per document");
    app->add_option("--in", o->in, "CoNLL-U files or directories of them")->required();
    app->add_flag("--plain", o->plain, "Inputs are raw UTF-8 text (.txt), segmented heuristically");
    app->add_option("--out", o->out, "Output TSV (default: stdout)");
    cmds.push_back({app, [o](Context& ctx) {
                        const auto docs = load_documents(ctx, o->in, o->plain);
                        ctx.primary_output = o->out;
                        Sink sink(ctx, o->out);
                        *sink << "doc_id\tfkgl\tsmog\tgunning_fog\n";
                        for (const auto& d : docs) {
                            BaselineScores s;
                            try {
                                s = baseline_scores(d);
                            } catch (const DegenerateError& e) {
                                throw DegenerateError(d.id + ": " + e.what());
                            }
                            *sink << d.id << '\t' << format_double(s.fkgl) << '\t' << format_double(s.smog) << '\t'
                                  << format_double(s.gunning_fog) << '\n';
                        }
                        sink.close();
                    }});
}

Json stats_json(const CorpusStats& s) {
    return Json{{"n_texts", s.n_texts},
                {"mean_words_per_text", s.mean_words_per_text},
                {"mean_words_per_sentence", s.mean_words_per_sentence}};
}

void add_build_corpus(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::string simple;
        std::string complex;
        bool aligned = false;
        LexiconFlags lex;
        std::string out;
        std::string stats;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("build-corpus", "Featurize a simple/complex corpus into a labeled dataset");
    app->add_option("--simple", o->simple, "Directory of simple-class CoNLL-U files")->required();
    app->add_option("--complex", o->complex, "Directory of complex-class CoNLL-U files")->required();
    app->add_flag("--aligned", o->aligned, "Pair files with the same name across the two directories");
    o->lex.add_to(app, true);
    app->add_option("--out", o->out, "Dataset TSV to write")->required();
    app->add_option("--stats", o->stats, "Also write per-class corpus statistics (JSON) to this file");
    cmds.push_back({app, [o](Context& ctx) {
                        const auto lex = o->lex.load(ctx);
                        Json stats = Json::object();
                        for (const auto& [name, dir] : {std::pair{"simple", o->simple}, {"complex", o->complex}}) {
                            std::vector<Document> docs;
                            for (const auto& f : list_conllu(dir)) {
                                ctx.add_input(f);
                                auto sidecar = f;
                                sidecar.replace_extension(".trees");
                                if (fs::exists(sidecar)) ctx.add_input(sidecar);
                                if (!o->stats.empty()) {
                                    for (auto& d : load_parsed(f)) docs.push_back(std::move(d));
                                }
                            }
                            if (!o->stats.empty()) stats[name] = stats_json(corpus_stats(docs));
                        }
                        std::vector<std::string> warnings;
                        BuildOptions opts;
                        opts.aligned = o->aligned;
                        opts.warnings = &warnings;
                        const auto ds = build_dataset(o->simple, o->complex, lex, opts);
                        for (const auto& w : warnings) ctx.warn(w);
                        ctx.primary_output = o->out;
                        save_dataset(o->out, ds);
                        if (!o->stats.empty()) {
                            Sink sink(ctx, o->stats);
                            *sink << stats.dump(2) << '\n';
                            sink.close();
                        }
                        ctx.note("wrote " + std::to_string(ds.size()) + " items (" +
                                 std::to_string(ds.count(Label::simple)) + " simple, " +
                                 std::to_string(ds.count(Label::complex)) + " complex) to " + o->out);
                    }});
}

void add_synth_corpus(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::string out;
        std::size_t pairs = SynthOptions{}.n_pairs;
        std::size_t min_sentences = SynthOptions{}.min_sentences;
        std::size_t max_sentences = SynthOptions{}.max_sentences;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("synth-corpus", "Generate a synthetic aligned corpus with planted difficulty");
    app->add_option("--out", o->out, "Output directory")->required();
    app->add_option("--pairs", o->pairs, "Number of simple/complex pairs")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--min-sentences", o->min_sentences, "Minimum sentences per document")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--max-sentences", o->max_sentences, "Maximum sentences per document")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmds.push_back({app, [o](Context& ctx) {
                        if (o->min_sentences > o->max_sentences) {
                            throw ParameterError("--min-sentences exceeds --max-sentences");
                        }
                        SynthOptions opts;
                        opts.n_pairs = o->pairs;
                        opts.seed = ctx.seed;
                        opts.min_sentences = o->min_sentences;
                        opts.max_sentences = o->max_sentences;
                        write_synthetic_corpus(o->out, opts);
                        ctx.primary_output = o->out;
                        ctx.output_is_dir = true;
                        ctx.note("wrote " + std::to_string(2 * o->pairs) + " documents under " + o->out);
                    }});
}

void add_split(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::string dataset;
        double fraction = 0.1;
        std::string train_out;
        std::string valid_out;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("split", "Pair-aware stratified train/validation split of a dataset");
    app->add_option("--dataset", o->dataset, "Dataset TSV")->required();
    app->add_option("--valid-fraction", o->fraction, "Fraction of each class held out")->capture_default_str();
    app->add_option("--train-out", o->train_out, "Training fold TSV to write")->required();
    app->add_option("--valid-out", o->valid_out, "Validation fold TSV to write")->required();
    cmds.push_back({app, [o](Context& ctx) {
                        ctx.add_input(o->dataset);
                        const auto split = split_train_valid(load_dataset(o->dataset), o->fraction, ctx.seed);
                        save_dataset(o->train_out, split.train);
                        save_dataset(o->valid_out, split.valid);
                        ctx.primary_output = o->train_out;
                        ctx.note("train " + std::to_string(split.train.size()) + ", valid " +
                                 std::to_string(split.valid.size()));
                    }});
}

void add_train(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::string kind;
        std::string train;
        std::string valid;
        std::string out;
        LexiconFlags lex;
        RidgeParams ridge;
        SvcParams svc;
        ForestParams forest;
        MlpParams mlp;
        std::optional<std::size_t> epochs;
        std::optional<std::size_t> max_depth;
        std::optional<std::size_t> mtry;
        bool no_bootstrap = false;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("train", "Train a scoring model on a labeled dataset");
    app->add_option("--model", o->kind, "Model kind")
        ->required()
        ->check(CLI::IsMember({"ridge", "svc", "linear_svc", "forest", "random_forest", "mlp"}));
    app->add_option("--train", o->train, "Training dataset TSV")->required();
    app->add_option("--valid", o->valid, "Validation dataset TSV (early stopping for mlp, accuracy report)");
    app->add_option("--out", o->out, "Model file to write")->required();
    o->lex.add_to(app, false);
    app->add_option("--lambda", o->ridge.lambda, "Ridge penalty")->capture_default_str();
    app->add_option("--c", o->svc.c, "Linear SVC regularization constant")->capture_default_str();
    app->add_option("--epochs", o->epochs, "Training epochs (svc default 100, mlp default 200)");
    app->add_option("--trees", o->forest.n_trees, "Number of forest trees")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--max-depth", o->max_depth, "Maximum tree depth (default: unlimited)");
    app->add_option("--mtry", o->mtry, "Features tried per split (default: ceil(sqrt(d)))");
    app->add_option("--min-samples-split", o->forest.min_samples_split, "Smallest node that may be split")
        ->capture_default_str();
    app->add_flag("--no-bootstrap", o->no_bootstrap, "Grow every tree on the full training set");
    app->add_option("--hidden", o->mlp.hidden, "MLP hidden units")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--lr", o->mlp.lr, "MLP learning rate")->capture_default_str();
    app->add_option("--patience", o->mlp.patience, "MLP early-stopping patience in epochs")->capture_default_str();
    cmds.push_back({app, [o](Context& ctx) {
                        ctx.add_input(o->train);
                        const auto train = load_dataset(o->train);
                        std::optional<LabeledDataset> valid;
                        if (!o->valid.empty()) {
                            ctx.add_input(o->valid);
                            valid = load_dataset(o->valid);
                        }
                        ScoringModel model;
                        switch (parse_model_kind(o->kind)) {
                            case ModelKind::ridge:
                                model = train_ridge(train, o->ridge);
                                break;
                            case ModelKind::linear_svc: {
                                auto p = o->svc;
                                if (o->epochs) p.epochs = *o->epochs;
                                model = train_linear_svc(train, p, ctx.seed);
                                break;
                            }
                            case ModelKind::random_forest: {
                                auto p = o->forest;
                                p.max_depth = o->max_depth;
                                p.mtry = o->mtry;
                                p.bootstrap = !o->no_bootstrap;
                                model = train_random_forest(train, p, ctx.seed);
                                break;
                            }
                            case ModelKind::mlp: {
                                auto p = o->mlp;
                                if (o->epochs) p.epochs = *o->epochs;
                                model = train_mlp(train, p, ctx.seed, valid ? &*valid : nullptr);
                                break;
                            }
                        }
                        for (const auto& w : model.stats.warnings) ctx.warn(w);
                        if (o->lex.given()) model.lexicons = o->lex.load(ctx);
                        save_model(o->out, model);
                        ctx.primary_output = o->out;
                        std::string msg = "trained " + model_label(model) + " on " +
                                          std::to_string(model.stats.n_train) + " items";
                        if (valid) msg += "; validation accuracy " + text::format_fixed(validation_accuracy(model, *valid), 4);
                        ctx.note(msg);
                    }});
}

void add_validate(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::string model;
        std::string valid;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("validate", "Accuracy of a model on a labeled dataset");
    app->add_option("--model", o->model, "Model file")->required();
    app->add_option("--valid", o->valid, "Dataset TSV")->required();
    cmds.push_back({app, [o](Context& ctx) {
                        ctx.add_input(o->model);
                        ctx.add_input(o->valid);
                        const auto model = load_model(o->model);
                        const auto ds = load_dataset(o->valid);
                        ctx.out << "model\taccuracy\tn\n"
                                << model_label(model) << '\t' << format_double(validation_accuracy(model, ds)) << '\t'
                                << ds.size() << '\n';
                    }});
}

void add_score(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::string model;
        std::vector<std::string> in;
        LexiconFlags lex;
        bool plain = false;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("score", "Comprehension score (0-100, higher is simpler) per document");
    app->add_option("--model", o->model, "Model file")->required();
    app->add_option("--in", o->in, "CoNLL-U files or directories of them")->required();
    o->lex.add_to(app, false);
    app->add_flag("--plain", o->plain, "Inputs are raw UTF-8 text (.txt), segmented heuristically");
    app->add_option("--out", o->out, "Output TSV (default: stdout)");
    cmds.push_back({app, [o](Context& ctx) {
                        ctx.add_input(o->model);
                        const auto model = load_model(o->model);
                        const auto lex = lexicons_for(ctx, o->lex, model, o->model);
                        const auto docs = load_documents(ctx, o->in, o->plain);
                        ctx.primary_output = o->out;
                        Sink sink(ctx, o->out);
                        for (const auto& d : docs) {
                            const auto s = comprehension_score(model, d, lex);
                            for (const auto& w : s.warnings) ctx.warn(d.id + ": " + w);
                            *sink << d.id << '\t' << format_double(s.score) << '\n';
                        }
                        sink.close();
                    }});
}

std::vector<std::string> read_id_list(Context& ctx, const std::string& path) {
    ctx.add_input(path);
    std::istringstream in(read_file(path));
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        ids.emplace_back(t);
    }
    return ids;
}

void add_bws_design(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::string texts;
        std::size_t e = 0;
        std::size_t k = 0;
        std::size_t a = 0;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("bws-design", "Generate a Best-Worst Scaling tuple design (JSONL)");
    app->add_option("--texts", o->texts, "File with one text id per line")->required();
    app->add_option("--e", o->e, "Appearances of each text across tuples")->required();
    app->add_option("--k", o->k, "Texts per tuple")->required();
    app->add_option("--a", o->a, "Annotators per tuple")->required();
    app->add_option("--out", o->out, "Output JSONL (default: stdout)");
    cmds.push_back({app, [o](Context& ctx) {
                        const auto design =
                            generate_bws_design(read_id_list(ctx, o->texts), o->e, o->k, o->a, ctx.seed);
                        ctx.primary_output = o->out;
                        Sink sink(ctx, o->out);
                        write_design_jsonl(*sink, design);
                        sink.close();
                    }});
}

void add_bws_score(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::string design;
        std::string responses;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("bws-score", "Best-Worst Scaling scores (best% - worst%) per text");
    app->add_option("--design", o->design, "Design JSONL")->required();
    app->add_option("--responses", o->responses, "Responses JSONL")->required();
    app->add_option("--out", o->out, "Output TSV (default: stdout)");
    cmds.push_back({app, [o](Context& ctx) {
                        const auto design = read_design(ctx, o->design);
                        const auto scores = bws_scores(design, read_responses(ctx, o->responses));
                        ctx.primary_output = o->out;
                        Sink sink(ctx, o->out);
                        *sink << "text_id\tscore\n";
                        for (const auto& [id, s] : scores) *sink << id << '\t' << format_double(s) << '\n';
                        sink.close();
                    }});
}

void add_shr(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::string design;
        std::string responses;
        std::size_t iterations = 1000;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("shr", "Split-half reliability of BWS responses");
    app->add_option("--design", o->design, "Design JSONL")->required();
    app->add_option("--responses", o->responses, "Responses JSONL")->required();
    app->add_option("--iterations", o->iterations, "Random half splits to average")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmds.push_back({app, [o](Context& ctx) {
                        const auto design = read_design(ctx, o->design);
                        const auto r =
                            split_half_reliability(design, read_responses(ctx, o->responses), o->iterations, ctx.seed);
                        for (const auto& w : r.warnings) ctx.warn(w);
                        ctx.out << "shr\titerations_used\titerations_skipped\n"
                                << format_double(r.shr) << '\t' << r.iterations_used << '\t' << r.iterations_skipped
                                << '\n';
                    }});
}

void add_icc(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::string ratings;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("icc", "ICC(2,1) inter-rater reliability of rating responses");
    app->add_option("--ratings", o->ratings, "Rating responses JSONL (complete texts x raters)")->required();
    cmds.push_back({app, [o](Context& ctx) {
                        ctx.add_input(o->ratings);
                        std::istringstream in(read_file(o->ratings));
                        const auto m = rating_matrix(read_ratings_jsonl(in));
                        ctx.out << "icc2\ttargets\traters\n"
                                << format_double(icc2(m.values)) << '\t' << m.targets.size() << '\t'
                                << m.raters.size() << '\n';
                    }});
}

void add_spearman(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::string x;
        std::string y;
        std::string x_column;
        std::string y_column;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("spearman", "Spearman correlation of two id/value TSV files");
    app->add_option("--x", o->x, "First TSV (id in column 1)")->required();
    app->add_option("--y", o->y, "Second TSV (id in column 1)")->required();
    app->add_option("--x-column", o->x_column, "Value column of --x by header name (default: last)");
    app->add_option("--y-column", o->y_column, "Value column of --y by header name (default: last)");
    cmds.push_back({app, [o](Context& ctx) {
                        const auto xs = read_score_table(ctx, o->x, o->x_column);
                        const auto ys = read_score_table(ctx, o->y, o->y_column);
                        std::vector<double> a;
                        std::vector<double> b;
                        for (const auto& [id, v] : xs) {
                            const auto it = ys.find(id);
                            if (it == ys.end()) continue;
                            a.push_back(v);
                            b.push_back(it->second);
                        }
                        if (a.size() < 3) {
                            throw DegenerateError("only " + std::to_string(a.size()) +
                                                  " ids in common; need at least 3");
                        }
                        ctx.out << "rho\tn\n" << format_double(spearman(a, b)) << '\t' << a.size() << '\n';
                    }});
}

void add_report(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::string human;
        std::string human_column;
        std::vector<std::string> in;
        std::vector<std::string> models;
        bool baselines = false;
        LexiconFlags lex;
        bool plain = false;
        std::string subset;
        std::string format = "tsv";
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("report", "Spearman correlation of each scorer with human scores");
    app->add_option("--human", o->human, "Human scores TSV (id in column 1)")->required();
    app->add_option("--human-column", o->human_column, "Human score column by header name (default: last)");
    app->add_option("--in", o->in, "Documents to score: CoNLL-U files or directories")->required();
    app->add_option("--model", o->models, "Model file; repeat for several models");
    app->add_flag("--baselines", o->baselines, "Include FKGL, SMOG and Gunning Fog");
    o->lex.add_to(app, false);
    app->add_flag("--plain", o->plain, "Inputs are raw UTF-8 text (.txt), segmented heuristically");
    app->add_option("--subset", o->subset, "Dataset TSV; restrict to its doc ids (e.g. a validation fold)");
    app->add_option("--format", o->format, "Output format")
        ->check(CLI::IsMember({"tsv", "table"}))
        ->capture_default_str();
    app->add_option("--out", o->out, "Output file (default: stdout)");
    cmds.push_back({app, [o](Context& ctx) {
                        if (o->models.empty() && !o->baselines) {
                            throw ParameterError("nothing to report: pass --model and/or --baselines");
                        }
                        auto human = read_score_table(ctx, o->human, o->human_column);
                        auto docs = load_documents(ctx, o->in, o->plain);
                        if (!o->subset.empty()) {
                            ctx.add_input(o->subset);
                            std::set<std::string> keep;
                            for (const auto& item : load_dataset(o->subset).items) keep.insert(item.doc_id);
                            std::erase_if(docs, [&](const Document& d) { return !keep.contains(d.id); });
                            if (docs.empty()) throw ValidationError("no document matches the --subset ids");
                        }
                        std::vector<std::pair<std::string, std::map<std::string, double>>> scorers;
                        std::map<std::string, int> seen;
                        for (const auto& path : o->models) {
                            ctx.add_input(path);
                            const auto model = load_model(path);
                            const auto lex = lexicons_for(ctx, o->lex, model, path);
                            std::string name = model_label(model);
                            if (seen[name]++ > 0) name += ":" + fs::path(path).stem().string();
                            std::map<std::string, double> scores;
                            for (const auto& d : docs) scores[d.id] = comprehension_score(model, d, lex).score;
                            scorers.emplace_back(name, std::move(scores));
                        }
                        if (o->baselines) {
                            std::map<std::string, double> f;
                            std::map<std::string, double> s;
                            std::map<std::string, double> g;
                            for (const auto& d : docs) {
                                try {
                                    const auto b = baseline_scores(d);
                                    f[d.id] = b.fkgl;
                                    s[d.id] = b.smog;
                                    g[d.id] = b.gunning_fog;
                                } catch (const DegenerateError& e) {
                                    ctx.warn(d.id + ": " + e.what() + "; left out of the baselines");
                                }
                            }
                            scorers.emplace_back("fkgl", std::move(f));
                            scorers.emplace_back("smog", std::move(s));
                            scorers.emplace_back("gunning_fog", std::move(g));
                        }
                        const auto rows = correlation_report(scorers, human);
                        ctx.primary_output = o->out;
                        Sink sink(ctx, o->out);
                        if (o->format == "tsv") {
                            write_report_tsv(*sink, rows);
                        } else {
                            write_report_table(*sink, rows);
                        }
                        sink.close();
                    }});
}

AnnotationServer* g_server = nullptr;

extern "C" void stop_server(int) {
    if (g_server) g_server->stop();
}

void add_serve(CLI::App& root, std::vector<Command>& cmds) {
    struct Opts {
        std::string host = ServerOptions{}.host;
        int port = ServerOptions{}.port;
        std::string data_dir;
        std::string static_dir;
        long lease_timeout = 600;
    };
    auto o = std::make_shared<Opts>();
    auto* app = root.add_subcommand("serve", "Run the annotation campaign HTTP server");
    app->add_option("--host", o->host, "Interface to bind")->capture_default_str();
    app->add_option("--port", o->port, "TCP port (0 picks a free one)")->capture_default_str()->check(CLI::Range(0, 65535));
    app->add_option("--data-dir", o->data_dir, "Directory holding campaign data")->required();
    app->add_option("--static-dir", o->static_dir, "Directory of static UI files served at /");
    app->add_option("--lease-timeout", o->lease_timeout, "Seconds before an unanswered task is reassigned")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmds.push_back({app, [o](Context& ctx) {
                        if (!o->static_dir.empty() && !fs::is_directory(o->static_dir)) {
                            throw NotFoundError("no such directory: " + o->static_dir);
                        }
                        CampaignStore store(o->data_dir, {}, std::chrono::seconds(o->lease_timeout));
                        AnnotationServer server(store, {o->host, o->port, o->static_dir});
                        const int port = server.bind();
                        ctx.note("listening on http://" + o->host + ":" + std::to_string(port));
                        g_server = &server;
                        std::signal(SIGINT, stop_server);
                        std::signal(SIGTERM, stop_server);
                        server.run();
                        g_server = nullptr;
                    }});
}

// ---------------------------------------------------------------------------
// Manifest

Json option_value(const CLI::Option* opt) {
    auto results = opt->results();
    if (results.empty()) {
        const auto& def = opt->get_default_str();
        if (def.empty()) return nullptr;
        results = {def};
    }
    if (opt->get_expected_max() > 1) return results;
    return results.back();
}

Json build_manifest(const Context& ctx, const CLI::App& sub) {
    Json options = Json::object();
    for (const auto* opt : sub.get_options()) {
        const auto name = opt->get_single_name();
        if (name == "help" || name.empty()) continue;
        auto v = option_value(opt);
        if (!v.is_null()) options[name] = std::move(v);
    }
    std::vector<std::string> paths;
    for (const auto& p : ctx.inputs) paths.push_back(p.lexically_normal().generic_string());
    std::sort(paths.begin(), paths.end());
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
    Json inputs = Json::array();
    for (const auto& p : paths) inputs.push_back({{"path", p}, {"sha256", sha256_file(p)}});
    return Json{{"tool", "lisible"},   {"version", kVersion}, {"subcommand", sub.get_name()},
                {"seed", ctx.seed},    {"options", options},  {"inputs", inputs}};
}

void emit_manifest(Context& ctx, const CLI::App& sub) {
    const auto text = build_manifest(ctx, sub).dump(2) + "\n";
    std::string path = ctx.manifest_path;
    if (path.empty() && !ctx.primary_output.empty()) {
        path = ctx.output_is_dir ? (fs::path(ctx.primary_output) / "manifest.json").string()
                                 : ctx.primary_output + ".manifest.json";
    }
    if (path.empty()) {
        if (!ctx.quiet) ctx.err << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) throw InputError("cannot write manifest " + path);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Context ctx(out, err);
    CLI::App app("Comprehension scoring of French texts: indicators, models and human evaluation.", "lisible");
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "TOML-style key=value config file; [subcommand] sections set subcommand flags");
    app.add_option("--seed", ctx.seed, "Seed for every randomized step")->capture_default_str();
    app.add_flag("--quiet", ctx.quiet, "Suppress notes, warnings and the manifest on stderr");
    app.add_option("--manifest", ctx.manifest_path,
                   "Manifest file (default: <out>.manifest.json, else stderr)");

    std::vector<Command> cmds;
    add_features(app, cmds);
    add_baselines(app, cmds);
    add_build_corpus(app, cmds);
    add_synth_corpus(app, cmds);
    add_split(app, cmds);
    add_train(app, cmds);
    add_validate(app, cmds);
    add_score(app, cmds);
    add_bws_design(app, cmds);
    add_bws_score(app, cmds);
    add_shr(app, cmds);
    add_icc(app, cmds);
    add_spearman(app, cmds);
    add_report(app, cmds);
    add_serve(app, cmds);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return 0;
        err << '\n' << app.help();
        return 1;
    }

    for (const auto& cmd : cmds) {
        if (!cmd.app->parsed()) continue;
        try {
            cmd.exec(ctx);
            emit_manifest(ctx, *cmd.app);
            return 0;
        } catch (const InputError& e) {
            err << "error: " << e.what() << '\n';
            return 1;
        } catch (const fs::filesystem_error& e) {
            err << "error: " << e.what() << '\n';
            return 1;
        } catch (const DivergenceError& e) {
            err << "internal error: " << e.what() << " (epoch " << e.epoch() << ")\n";
            return 2;
        } catch (const std::exception& e) {
            err << "internal error: " << e.what() << '\n';
            return 2;
        }
    }
    return 1;
}

}  // namespace lisible::cli
