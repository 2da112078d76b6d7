#include "lisible/digest.hpp"
#include "lisible/error.hpp"
#include "lisible/models.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>

namespace lisible {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kMagic = "LISIBLE-MODEL";
constexpr int kVersion = 1;

Json vec(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd unvec(const Json& a) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a.at(i).get<double>();
    return v;
}

Json tree_json(const DecisionTree& t) {
    Json feature = Json::array(), threshold = Json::array(), left = Json::array(), right = Json::array(),
         value = Json::array(), samples = Json::array();
    for (const auto& n : t.nodes) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        value.push_back(n.value);
        samples.push_back(n.samples);
    }
    return Json{{"feature", feature}, {"threshold", threshold}, {"left", left},
                {"right", right},     {"value", value},         {"samples", samples}};
}

DecisionTree tree_from(const Json& j) {
    DecisionTree t;
    const auto& feature = j.at("feature");
    t.nodes.resize(feature.size());
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        auto& n = t.nodes[i];
        n.feature = feature.at(i).get<int>();
        n.threshold = j.at("threshold").at(i).get<double>();
        n.left = j.at("left").at(i).get<int>();
        n.right = j.at("right").at(i).get<int>();
        n.value = j.at("value").at(i).get<double>();
        n.samples = j.at("samples").at(i).get<std::size_t>();
        const auto limit = static_cast<int>(t.nodes.size());
        if (!n.is_leaf() && (n.left <= static_cast<int>(i) || n.right <= static_cast<int>(i) || n.left >= limit ||
                             n.right >= limit)) {
            throw CorruptionError("tree node " + std::to_string(i) + " has invalid children");
        }
    }
    if (t.nodes.empty()) throw CorruptionError("empty tree");
    return t;
}

Json model_json(const ScoringModel& m) {
    Json j;
    j["kind"] = std::string(to_string(m.kind));
    j["seed"] = m.seed;
    Json hp = Json::object();
    for (const auto& [k, v] : m.hyperparameters) hp[k] = v;
    j["hyperparameters"] = hp;
    j["standardizer"] = {{"mean", vec(m.standardizer.mean)}, {"scale", vec(m.standardizer.scale)}};
    switch (m.kind) {
        case ModelKind::ridge:
        case ModelKind::linear_svc:
            j["weights"] = vec(m.weights);
            j["intercept"] = m.intercept;
            if (m.calibration) j["calibration"] = {{"a", m.calibration->a}, {"b", m.calibration->b}};
            break;
        case ModelKind::random_forest: {
            Json trees = Json::array();
            for (const auto& t : m.trees) trees.push_back(tree_json(t));
            j["trees"] = trees;
            break;
        }
        case ModelKind::mlp: {
            Json w1 = Json::array();
            for (Eigen::Index r = 0; r < m.mlp.w1.rows(); ++r) w1.push_back(vec(m.mlp.w1.row(r).transpose()));
            j["mlp"] = {{"w1", w1}, {"b1", vec(m.mlp.b1)}, {"w2", vec(m.mlp.w2)}, {"b2", m.mlp.b2}};
            break;
        }
    }
    if (m.lexicons) {
        Json graded = Json::array();
        for (const auto& lex : m.lexicons->graded) {
            std::vector<std::pair<std::string, int>> entries(lex.entries().begin(), lex.entries().end());
            std::sort(entries.begin(), entries.end());
            Json e = Json::array();
            for (const auto& [lemma, level] : entries) e.push_back(Json::array({lemma, level}));
            graded.push_back({{"name", lex.source_name()}, {"n_levels", lex.n_levels()}, {"entries", e}});
        }
        std::vector<std::pair<std::string, ConnectiveEntry>> conn(m.lexicons->connectives.entries().begin(),
                                                                  m.lexicons->connectives.entries().end());
        std::sort(conn.begin(), conn.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        Json c = Json::array();
        for (const auto& [text, entry] : conn) {
            c.push_back(Json::array({text, std::string(to_string(entry.category)), std::string(to_string(entry.complexity))}));
        }
        j["lexicons"] = {{"graded", graded}, {"connectives", c}};
    }
    j["stats"] = {{"n_train", m.stats.n_train},         {"n_simple", m.stats.n_simple},
                  {"n_complex", m.stats.n_complex},     {"epochs_run", m.stats.epochs_run},
                  {"final_loss", m.stats.final_loss}, {"warnings", m.stats.warnings}};
    return j;
}

ScoringModel model_from(const Json& j) {
    ScoringModel m;
    m.kind = parse_model_kind(j.at("kind").get<std::string>());
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : j.at("hyperparameters").items()) m.hyperparameters[k] = v.get<double>();
    m.standardizer.mean = unvec(j.at("standardizer").at("mean"));
    m.standardizer.scale = unvec(j.at("standardizer").at("scale"));
    const auto d = m.standardizer.mean.size();
    if (m.standardizer.scale.size() != d || d == 0) throw CorruptionError("standardizer shape mismatch");
    switch (m.kind) {
        case ModelKind::ridge:
        case ModelKind::linear_svc:
            m.weights = unvec(j.at("weights"));
            m.intercept = j.at("intercept").get<double>();
            if (j.contains("calibration")) {
                m.calibration = Calibration{j["calibration"].at("a").get<double>(), j["calibration"].at("b").get<double>()};
            }
            if (m.weights.size() != d) throw CorruptionError("weight vector shape mismatch");
            break;
        case ModelKind::random_forest:
            for (const auto& t : j.at("trees")) {
                m.trees.push_back(tree_from(t));
                for (const auto& n : m.trees.back().nodes) {
                    if (n.feature >= static_cast<int>(d)) throw CorruptionError("tree feature index out of range");
                }
            }
            if (m.trees.empty()) throw CorruptionError("forest has no trees");
            break;
        case ModelKind::mlp: {
            const auto& mj = j.at("mlp");
            const auto& rows = mj.at("w1");
            const auto h = static_cast<Eigen::Index>(rows.size());
            m.mlp.w1.resize(h, d);
            for (Eigen::Index r = 0; r < h; ++r) {
                const auto row = unvec(rows.at(static_cast<std::size_t>(r)));
                if (row.size() != d) throw CorruptionError("mlp weight shape mismatch");
                m.mlp.w1.row(r) = row.transpose();
            }
            m.mlp.b1 = unvec(mj.at("b1"));
            m.mlp.w2 = unvec(mj.at("w2"));
            m.mlp.b2 = mj.at("b2").get<double>();
            if (m.mlp.b1.size() != h || m.mlp.w2.size() != h) throw CorruptionError("mlp bias shape mismatch");
            break;
        }
    }
    if (j.contains("lexicons")) {
        Lexicons lex;
        for (const auto& g : j["lexicons"].at("graded")) {
            GradedLexicon graded(g.at("n_levels").get<int>(), g.at("name").get<std::string>());
            for (const auto& e : g.at("entries")) graded.add(e.at(0).get<std::string>(), e.at(1).get<int>());
            lex.graded.push_back(std::move(graded));
        }
        for (const auto& c : j["lexicons"].at("connectives")) {
            ConnectiveEntry entry;
            const auto cat = c.at(1).get<std::string>();
            entry.category = cat == "conjunction" ? ConnectiveCategory::conjunction
                             : cat == "adverbial" ? ConnectiveCategory::adverbial
                                                  : ConnectiveCategory::other;
            entry.complexity = c.at(2).get<std::string>() == "complex" ? ConnectiveComplexity::complex
                                                                      : ConnectiveComplexity::simple;
            lex.connectives.add(c.at(0).get<std::string>(), entry);
        }
        m.lexicons = std::move(lex);
    }
    const auto& s = j.at("stats");
    m.stats.n_train = s.at("n_train").get<std::size_t>();
    m.stats.n_simple = s.at("n_simple").get<std::size_t>();
    m.stats.n_complex = s.at("n_complex").get<std::size_t>();
    m.stats.epochs_run = s.at("epochs_run").get<std::size_t>();
    m.stats.final_loss = s.at("final_loss").get<double>();
    m.stats.warnings = s.at("warnings").get<std::vector<std::string>>();
    return m;
}

}  // namespace

std::string serialize_model(const ScoringModel& model) {
    const std::string body = model_json(model).dump(1) + "\n";
    return std::string(kMagic) + " v" + std::to_string(kVersion) + " sha256=" + sha256_hex(body) + "\n" + body;
}

ScoringModel deserialize_model(std::string_view data) {
    const auto eol = data.find('\n');
    if (eol == std::string_view::npos || !data.starts_with(kMagic)) {
        throw CorruptionError("not a model file (missing header)");
    }
    const std::string_view header = data.substr(0, eol);
    const std::string_view body = data.substr(eol + 1);

    // "LISIBLE-MODEL v<N> sha256=<hex>"
    const auto vpos = header.find(" v");
    const auto spos = header.find(" sha256=");
    if (vpos == std::string_view::npos || spos == std::string_view::npos || spos < vpos) {
        throw CorruptionError("malformed model header");
    }
    const std::string_view version = header.substr(vpos + 2, spos - vpos - 2);
    if (version != std::to_string(kVersion)) {
        throw VersionError("model format version " + std::string(version) + " is not supported (expected " +
                           std::to_string(kVersion) + ")");
    }
    const std::string_view expected = header.substr(spos + 8);
    if (sha256_hex(body) != expected) throw CorruptionError("model checksum mismatch (file truncated or modified)");

    const auto j = Json::parse(body, nullptr, false);
    if (j.is_discarded()) throw CorruptionError("model body is not valid JSON");
    try {
        return model_from(j);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptionError(std::string("model body is incomplete: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const ScoringModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NotFoundError("cannot write " + path.string());
    out << serialize_model(model);
    if (!out) throw NotFoundError("cannot write " + path.string());
}

ScoringModel load_model(const std::filesystem::path& path) { return deserialize_model(read_file(path)); }

}  // namespace lisible
