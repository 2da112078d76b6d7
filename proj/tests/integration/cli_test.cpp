#include "lisible/cli.hpp"
#include "lisible/evaluation.hpp"

#include "testing.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace lisible {
namespace {

namespace fs = std::filesystem;

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> lexicon_args() {
    const auto dir = testing::lexicon_dir();
    return {"--graded-lexicon", (dir / "school_grades.tsv").string(), "--graded-lexicon", (dir / "cefr.tsv").string(),
            "--connectives-lexicon", (dir / "connectives.tsv").string()};
}

std::vector<std::string> operator+(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

TEST(Cli, HelpListsEveryOption) {
    const std::map<std::string, std::vector<std::string>> options = {
        {"features", {"--in", "--graded-lexicon", "--connectives-lexicon", "--levels", "--format", "--plain", "--out"}},
        {"baselines", {"--in", "--plain", "--out"}},
        {"build-corpus", {"--simple", "--complex", "--aligned", "--graded-lexicon", "--out", "--stats"}},
        {"synth-corpus", {"--out", "--pairs", "--min-sentences", "--max-sentences"}},
        {"split", {"--dataset", "--valid-fraction", "--train-out", "--valid-out"}},
        {"train", {"--model", "--train", "--valid", "--out", "--lambda", "--c", "--epochs", "--trees", "--max-depth",
                   "--mtry", "--min-samples-split", "--no-bootstrap", "--hidden", "--lr", "--patience"}},
        {"validate", {"--model", "--valid"}},
        {"score", {"--model", "--in", "--plain", "--out"}},
        {"bws-design", {"--texts", "--e", "--k", "--a", "--out"}},
        {"bws-score", {"--design", "--responses", "--out"}},
        {"shr", {"--design", "--responses", "--iterations"}},
        {"icc", {"--ratings"}},
        {"spearman", {"--x", "--y", "--x-column", "--y-column"}},
        {"report", {"--human", "--human-column", "--in", "--model", "--baselines", "--plain", "--subset", "--format",
                    "--out"}},
        {"serve", {"--host", "--port", "--data-dir", "--static-dir", "--lease-timeout"}},
    };
    const auto top = cli({"--help"});
    EXPECT_EQ(top.code, 0);
    for (const auto& [sub, opts] : options) {
        EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
        const auto r = cli({sub, "--help"});
        EXPECT_EQ(r.code, 0) << sub;
        for (const auto& o : opts) EXPECT_NE(r.out.find(o), std::string::npos) << sub << " " << o;
    }
    for (const char* global : {"--seed", "--quiet", "--manifest", "--config", "--version"}) {
        EXPECT_NE(top.out.find(global), std::string::npos) << global;
    }
}

TEST(Cli, VersionAndUsageErrors) {
    const auto v = cli({"--version"});
    EXPECT_EQ(v.code, 0);
    EXPECT_NE(v.out.find(cli::kVersion), std::string::npos);

    const auto unknown = cli({"icc", "--ratings", "r.jsonl", "--bogus"});
    EXPECT_EQ(unknown.code, 1);
    EXPECT_NE(unknown.err.find("--bogus"), std::string::npos);
    EXPECT_NE(unknown.err.find("Usage"), std::string::npos);

    EXPECT_EQ(cli({}).code, 1);
    EXPECT_EQ(cli({"features"}).code, 1);  // --in is required
    EXPECT_EQ(cli({"serve", "--data-dir", "x", "--port", "70000"}).code, 1);
}

TEST(Cli, InputErrorsExitOne) {
    testing::TempDir dir;
    const auto missing = cli(std::vector<std::string>{"--quiet", "features", "--in", (dir / "absent.conllu").string()} +
                             lexicon_args());
    EXPECT_EQ(missing.code, 1);
    EXPECT_NE(missing.err.find("error:"), std::string::npos);

    testing::write_text(dir / "bad.conllu", "1\tx\n");
    const auto bad = cli(std::vector<std::string>{"--quiet", "features", "--in", (dir / "bad.conllu").string()} +
                         lexicon_args());
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("line 1"), std::string::npos);

    testing::write_text(dir / "corrupt.model", "LISIBLE-MODEL v1 sha256=00\n{}\n");
    testing::write_text(dir / "t.txt", "Le chat dort.");
    const auto corrupt = cli({"--quiet", "score", "--model", (dir / "corrupt.model").string(), "--plain", "--in",
                              (dir / "t.txt").string()});
    EXPECT_EQ(corrupt.code, 1);
    EXPECT_NE(corrupt.err.find("checksum"), std::string::npos);
}

TEST(Cli, FeaturesMatchGoldenFixture) {
    testing::TempDir dir;
    const auto out = dir / "f.json";
    const auto r = cli(std::vector<std::string>{"features", "--in", (testing::fixtures() / "complex_01.conllu").string(),
                                                "--format", "json", "--out", out.string()} +
                       lexicon_args());
    ASSERT_EQ(r.code, 0) << r.err;
    const auto got = nlohmann::json::parse(slurp(out));
    const auto want = nlohmann::json::parse(slurp(testing::fixtures() / "complex_01.features.json"));
    EXPECT_EQ(got["features"], want);

    // the manifest sits next to the output and fingerprints the inputs
    const auto manifest = nlohmann::json::parse(slurp(dir / "f.json.manifest.json"));
    EXPECT_EQ(manifest["subcommand"], "features");
    EXPECT_EQ(manifest["seed"], 1);
    EXPECT_EQ(manifest["inputs"].size(), 5u);  // document, tree sidecar, three lexicons
    for (const auto& in : manifest["inputs"]) EXPECT_EQ(in["sha256"].get<std::string>().size(), 64u);
}

TEST(Cli, FeaturesTsvAndBaselinesOnPlainText) {
    testing::TempDir dir;
    testing::write_text(dir / "docs/a.txt", "Le chat dort. Il rêve.");
    testing::write_text(dir / "docs/b.txt", "Néanmoins, la bibliothèque municipale demeure fermée aujourd'hui.");
    const auto f = cli(std::vector<std::string>{"--quiet", "features", "--plain", "--in", (dir / "docs").string()} +
                       lexicon_args());
    ASSERT_EQ(f.code, 0) << f.err;
    std::istringstream lines(f.out);
    std::string header;
    std::getline(lines, header);
    EXPECT_TRUE(header.starts_with("doc_id\tlexical_difficulty"));
    std::string row;
    std::getline(lines, row);
    EXPECT_TRUE(row.starts_with("docs/a\t"));

    const auto b = cli({"--quiet", "baselines", "--plain", "--in", (dir / "docs").string()});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_TRUE(b.out.starts_with("doc_id\tfkgl\tsmog\tgunning_fog\n"));
    EXPECT_NE(b.out.find("docs/b\t"), std::string::npos);
}

TEST(Cli, EvaluationCommands) {
    testing::TempDir dir;
    std::string ids;
    for (int i = 0; i < 12; ++i) ids += "t" + std::to_string(i) + "\n";
    testing::write_text(dir / "ids.txt", ids);
    const auto design_path = (dir / "design.jsonl").string();
    ASSERT_EQ(cli({"--quiet", "--seed", "4", "bws-design", "--texts", (dir / "ids.txt").string(), "--e", "4", "--k",
                   "3", "--a", "2", "--out", design_path})
                  .code,
              0);
    std::ifstream din(design_path);
    const auto design = read_design_jsonl(din);
    EXPECT_EQ(design.tuples.size(), 16u);
    EXPECT_EQ(design.seed, 4u);

    // annotators prefer lower-numbered texts
    std::vector<BwsResponse> responses;
    for (const auto& t : design.tuples) {
        auto sorted = t.texts;
        std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            return std::stoi(a.substr(1)) < std::stoi(b.substr(1));
        });
        for (int a = 0; a < 2; ++a) responses.push_back({t.id, "ann" + std::to_string(a), sorted.front(), sorted.back(), ""});
    }
    {
        std::ofstream rout(dir / "responses.jsonl");
        write_responses_jsonl(rout, responses);
    }
    const auto scores = cli({"--quiet", "bws-score", "--design", design_path, "--responses",
                             (dir / "responses.jsonl").string(), "--out", (dir / "bws.tsv").string()});
    ASSERT_EQ(scores.code, 0) << scores.err;
    const auto tsv = slurp(dir / "bws.tsv");
    EXPECT_TRUE(tsv.starts_with("text_id\tscore\n"));
    EXPECT_NE(tsv.find("t0\t100"), std::string::npos);

    const auto shr = cli({"--quiet", "shr", "--design", design_path, "--responses", (dir / "responses.jsonl").string(),
                          "--iterations", "20"});
    ASSERT_EQ(shr.code, 0) << shr.err;
    EXPECT_TRUE(shr.out.starts_with("shr\titerations_used\titerations_skipped\n"));

    // planted order vs BWS scores: perfectly anti-correlated ids -> numbers
    std::string planted = "id\tplanted\n";
    for (int i = 0; i < 12; ++i) planted += "t" + std::to_string(i) + "\t" + std::to_string(12 - i) + "\n";
    testing::write_text(dir / "planted.tsv", planted);
    const auto rho = cli({"--quiet", "spearman", "--x", (dir / "bws.tsv").string(), "--y",
                          (dir / "planted.tsv").string(), "--y-column", "planted"});
    ASSERT_EQ(rho.code, 0) << rho.err;
    EXPECT_TRUE(rho.out.starts_with("rho\tn\n"));
    EXPECT_NE(rho.out.find("\t12\n"), std::string::npos);

    std::vector<RatingResponse> ratings;
    for (int t = 0; t < 4; ++t) {
        for (int r = 0; r < 3; ++r) {
            ratings.push_back({"t" + std::to_string(t), "r" + std::to_string(r), 10.0 * t + r, ""});
        }
    }
    {
        std::ofstream out(dir / "ratings.jsonl");
        write_ratings_jsonl(out, ratings);
    }
    const auto icc = cli({"--quiet", "icc", "--ratings", (dir / "ratings.jsonl").string()});
    ASSERT_EQ(icc.code, 0) << icc.err;
    EXPECT_TRUE(icc.out.starts_with("icc2\ttargets\traters\n"));
    EXPECT_NE(icc.out.find("\t4\t3\n"), std::string::npos);

    // bad design parameters are input errors
    EXPECT_EQ(cli({"--quiet", "bws-design", "--texts", (dir / "ids.txt").string(), "--e", "5", "--k", "7", "--a", "1"})
                  .code,
              1);
}

struct Pipeline {
    std::string dataset;
    std::string model;
    std::string scores;
    std::string report;
};

Pipeline run_pipeline(const fs::path& dir, const std::string& seed) {
    auto ok = [](const Result& r) {
        EXPECT_EQ(r.code, 0) << r.err;
        return r;
    };
    const std::string root = dir.string();
    ok(cli({"--quiet", "--seed", seed, "synth-corpus", "--out", root + "/c", "--pairs", "20"}));
    const std::vector<std::string> lex = {"--graded-lexicon", root + "/c/lexicons/graded.tsv", "--connectives-lexicon",
                                          root + "/c/lexicons/connectives.tsv"};
    ok(cli(std::vector<std::string>{"--quiet", "build-corpus", "--simple", root + "/c/synth/simple", "--complex",
                                    root + "/c/synth/complex", "--aligned", "--out", root + "/ds.tsv", "--stats",
                                    root + "/stats.json"} +
           lex));
    ok(cli({"--quiet", "--seed", seed, "split", "--dataset", root + "/ds.tsv", "--train-out", root + "/train.tsv",
            "--valid-out", root + "/valid.tsv"}));
    ok(cli(std::vector<std::string>{"--quiet", "--seed", seed, "train", "--model", "forest", "--trees", "20", "--train",
                                    root + "/train.tsv", "--out", root + "/m.model"} +
           lex));
    const auto v = ok(cli({"--quiet", "validate", "--model", root + "/m.model", "--valid", root + "/valid.tsv"}));
    EXPECT_TRUE(v.out.starts_with("model\taccuracy\tn\n"));
    const auto s = ok(cli({"--quiet", "score", "--model", root + "/m.model", "--in", root + "/c/synth/simple", "--in",
                            root + "/c/synth/complex"}));
    const auto r = ok(cli({"--quiet", "report", "--human", root + "/c/planted.tsv", "--human-column", "simplicity",
                           "--in", root + "/c/synth/simple", "--in", root + "/c/synth/complex", "--model", root + "/m.model",
                           "--baselines"}));
    return {slurp(dir / "ds.tsv"), slurp(dir / "m.model"), s.out, r.out};
}

TEST(Cli, PipelineIsDeterministic) {
    testing::TempDir a;
    testing::TempDir b;
    const auto first = run_pipeline(a.path(), "3");
    const auto second = run_pipeline(b.path(), "3");
    EXPECT_EQ(first.model, second.model);
    EXPECT_EQ(first.scores, second.scores);
    EXPECT_EQ(first.report, second.report);
    EXPECT_NE(first.report.find("random_forest"), std::string::npos);
    EXPECT_NE(first.report.find("fkgl"), std::string::npos);
    // every scored line is "<id>\t<score in [0, 100]>"
    std::istringstream lines(first.scores);
    std::string line;
    std::size_t n = 0;
    while (std::getline(lines, line)) {
        const auto tab = line.find('\t');
        ASSERT_NE(tab, std::string::npos);
        const double v = std::stod(line.substr(tab + 1));
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 100.0);
        ++n;
    }
    EXPECT_EQ(n, 40u);
    const auto stats = nlohmann::json::parse(slurp(a / "stats.json"));
    EXPECT_TRUE(stats.contains("simple"));
    EXPECT_TRUE(stats.contains("complex"));
}

TEST(Cli, ConfigFileSuppliesOptions) {
    testing::TempDir dir;
    testing::write_text(dir / "ids.txt", "a\nb\nc\nd\n");
    testing::write_text(dir / "cfg.toml", "seed = 9\n[bws-design]\ne = 3\nk = 2\na = 1\n");
    const auto r = cli({"--quiet", "--config", (dir / "cfg.toml").string(), "bws-design", "--texts",
                        (dir / "ids.txt").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    const auto design = read_design_jsonl(in);
    EXPECT_EQ(design.e, 3u);
    EXPECT_EQ(design.seed, 9u);
}

}  // namespace
}  // namespace lisible
