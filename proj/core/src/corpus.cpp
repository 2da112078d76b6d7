#include "lisible/corpus.hpp"

#include "lisible/error.hpp"
#include "lisible/rng.hpp"
#include "lisible/text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

namespace lisible {

namespace fs = std::filesystem;

std::size_t LabeledDataset::count(Label label) const {
    return static_cast<std::size_t>(
        std::count_if(items.begin(), items.end(), [&](const LabeledItem& it) { return it.label == label; }));
}

void check_pairs(const LabeledDataset& ds) {
    std::map<std::string, std::pair<int, int>> seen;
    for (const auto& item : ds.items) {
        if (!item.pair_id) continue;
        auto& [simple, complex] = seen[*item.pair_id];
        (item.label == Label::simple ? simple : complex) += 1;
    }
    for (const auto& [id, counts] : seen) {
        if (counts.first != 1 || counts.second != 1) {
            throw ValidationError("pair '" + id + "' has " + std::to_string(counts.first) + " simple and " +
                                  std::to_string(counts.second) + " complex items; expected one of each");
        }
    }
}

CorpusStats corpus_stats(std::span<const Document> docs) {
    if (docs.empty()) throw DegenerateError("corpus statistics need at least one document");
    std::size_t words = 0;
    std::size_t sentences = 0;
    for (const Document& d : docs) {
        words += d.word_count();
        sentences += d.sentences.size();
    }
    if (words == 0 || sentences == 0) throw DegenerateError("corpus has no words");
    CorpusStats s;
    s.n_texts = docs.size();
    s.mean_words_per_text = static_cast<double>(words) / static_cast<double>(docs.size());
    s.mean_words_per_sentence = static_cast<double>(words) / static_cast<double>(sentences);
    return s;
}

std::vector<fs::path> list_conllu(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw NotFoundError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".conllu") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ValidationError("directory has no .conllu files: " + dir.string());
    return files;
}

namespace {

struct Loaded {
    std::string stem;
    std::vector<Document> docs;
};

std::vector<Loaded> load_dir(const fs::path& dir) {
    std::vector<Loaded> out;
    for (const auto& file : list_conllu(dir)) {
        out.push_back({file.stem().string(), load_parsed(file)});
        if (out.back().docs.empty()) throw ValidationError("file holds no sentences: " + file.string());
    }
    return out;
}

void featurize(const std::vector<Loaded>& files, Label label, bool aligned, const Lexicons& lexicons,
               const BuildOptions& options, LabeledDataset& ds) {
    const std::string prefix(to_string(label));
    for (const auto& f : files) {
        if (aligned && f.docs.size() != 1) {
            throw ValidationError("aligned mode needs one document per file; " + prefix + "/" + f.stem + " has " +
                                  std::to_string(f.docs.size()));
        }
        for (const Document& doc : f.docs) {
            LabeledItem item;
            item.doc_id = prefix + "/" + f.stem;
            if (f.docs.size() > 1) item.doc_id += "/" + doc.id;
            auto report = extract_features(doc, lexicons);
            item.features = report.features;
            item.label = label;
            if (aligned) item.pair_id = f.stem;
            if (options.warnings) {
                for (auto& w : report.warnings) options.warnings->push_back(item.doc_id + ": " + w);
            }
            ds.items.push_back(std::move(item));
        }
    }
}

}  // namespace

LabeledDataset build_dataset(const fs::path& simple_dir, const fs::path& complex_dir, const Lexicons& lexicons,
                             const BuildOptions& options) {
    const auto simple = load_dir(simple_dir);
    const auto complex = load_dir(complex_dir);

    if (options.aligned) {
        std::set<std::string> s_stems;
        std::set<std::string> c_stems;
        for (const auto& f : simple) s_stems.insert(f.stem);
        for (const auto& f : complex) c_stems.insert(f.stem);
        std::vector<std::string> orphans;
        for (const auto& s : s_stems) {
            if (!c_stems.contains(s)) orphans.push_back((simple_dir / (s + ".conllu")).string());
        }
        for (const auto& c : c_stems) {
            if (!s_stems.contains(c)) orphans.push_back((complex_dir / (c + ".conllu")).string());
        }
        if (!orphans.empty()) {
            std::string msg = "unaligned files:";
            for (const auto& o : orphans) msg += " " + o;
            throw ValidationError(msg);
        }
    }

    LabeledDataset ds;
    ds.provenance = {simple_dir.string(), complex_dir.string()};
    featurize(simple, Label::simple, options.aligned, lexicons, options, ds);
    featurize(complex, Label::complex, options.aligned, lexicons, options, ds);
    return ds;
}

DatasetSplit split_train_valid(const LabeledDataset& ds, double valid_fraction, std::uint64_t seed) {
    if (!(valid_fraction > 0.0 && valid_fraction < 0.5)) {
        throw ParameterError("valid_fraction must lie in (0, 0.5), got " + text::format_double(valid_fraction));
    }
    if (ds.size() < 10) {
        throw ValidationError("dataset too small to split: " + std::to_string(ds.size()) + " items, need 10");
    }

    // Units are complete pairs or single items; a pair_id without its twin
    // degrades to a singleton.
    std::map<std::string, std::vector<std::size_t>> by_pair;
    for (std::size_t i = 0; i < ds.items.size(); ++i) {
        if (ds.items[i].pair_id) by_pair[*ds.items[i].pair_id].push_back(i);
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> single_s;
    std::vector<std::size_t> single_c;
    auto add_single = [&](std::size_t i) {
        (ds.items[i].label == Label::simple ? single_s : single_c).push_back(i);
    };
    std::set<std::size_t> in_pair;
    for (const auto& [id, members] : by_pair) {
        if (members.size() == 2 && ds.items[members[0]].label != ds.items[members[1]].label) {
            pairs.emplace_back(members[0], members[1]);
            in_pair.insert(members.begin(), members.end());
        }
    }
    for (std::size_t i = 0; i < ds.items.size(); ++i) {
        if (!in_pair.contains(i)) add_single(i);
    }
    std::sort(pairs.begin(), pairs.end());

    Rng rng(seed);
    rng.shuffle(std::span(pairs));
    rng.shuffle(std::span(single_s));
    rng.shuffle(std::span(single_c));

    const std::size_t n_s = ds.count(Label::simple);
    const std::size_t n_c = ds.count(Label::complex);
    auto target = [&](std::size_t n) {
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(valid_fraction * static_cast<double>(n))));
    };
    const std::size_t t_s = target(n_s);
    const std::size_t t_c = target(n_c);
    if (n_s == 0 || n_c == 0 || t_s >= n_s || t_c >= n_c) {
        throw ValidationError("cannot stratify: " + std::to_string(n_s) + " simple and " + std::to_string(n_c) +
                              " complex items");
    }

    std::vector<bool> valid(ds.items.size(), false);
    std::size_t got_s = 0;
    std::size_t got_c = 0;
    std::size_t next_pair = 0;
    auto take_pair = [&] {
        valid[pairs[next_pair].first] = valid[pairs[next_pair].second] = true;
        ++next_pair;
        ++got_s;
        ++got_c;
    };
    while (next_pair < pairs.size() && got_s < std::min(t_s, t_c)) take_pair();
    for (std::size_t k = 0; got_s < t_s && k < single_s.size(); ++k, ++got_s) valid[single_s[k]] = true;
    for (std::size_t k = 0; got_c < t_c && k < single_c.size(); ++k, ++got_c) valid[single_c[k]] = true;
    while (next_pair < pairs.size() && got_s < t_s && got_c < t_c) take_pair();
    if (got_s != t_s || got_c != t_c) {
        throw ValidationError("dataset too small to stratify: validation needs " + std::to_string(t_s) + " simple and " +
                              std::to_string(t_c) + " complex items without splitting pairs");
    }

    DatasetSplit split;
    split.train.provenance = ds.provenance;
    split.valid.provenance = ds.provenance;
    for (std::size_t i = 0; i < ds.items.size(); ++i) {
        (valid[i] ? split.valid : split.train).items.push_back(ds.items[i]);
    }
    if (!split.train.has_both_labels()) throw ValidationError("training fold would lack a label");
    return split;
}

void write_dataset_tsv(std::ostream& out, const LabeledDataset& ds) {
    if (!ds.provenance.empty()) {
        out << "# provenance =";
        for (const auto& p : ds.provenance) out << ' ' << p;
        out << '\n';
    }
    out << "doc_id\tlabel\tpair_id";
    for (auto name : feature_names()) out << '\t' << name;
    out << '\n';
    for (const auto& item : ds.items) {
        out << item.doc_id << '\t' << (item.label == Label::simple ? '1' : '0') << '\t' << item.pair_id.value_or("_");
        for (double v : item.features.values()) out << '\t' << text::format_double(v);
        out << '\n';
    }
}

LabeledDataset read_dataset_tsv(std::istream& in) {
    LabeledDataset ds;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.starts_with("# provenance =")) {
            for (auto part : text::split(text::trim(std::string_view(line).substr(14)), ' ')) {
                if (!part.empty()) ds.provenance.emplace_back(part);
            }
            continue;
        }
        if (line.starts_with("#")) continue;
        const auto cols = text::split(line, '\t');
        if (!header) {
            if (cols.size() != kFeatureCount + 3 || cols[0] != "doc_id" || cols[1] != "label" || cols[2] != "pair_id") {
                throw FormatError("dataset header must be doc_id, label, pair_id and the 28 feature names");
            }
            for (std::size_t k = 0; k < kFeatureCount; ++k) {
                if (cols[k + 3] != feature_name(k)) {
                    throw FormatError("dataset column " + std::to_string(k + 4) + " is '" + std::string(cols[k + 3]) +
                                      "', expected '" + std::string(feature_name(k)) + "'");
                }
            }
            header = true;
            continue;
        }
        if (cols.size() != kFeatureCount + 3) {
            throw ParseError("expected " + std::to_string(kFeatureCount + 3) + " columns, found " +
                                 std::to_string(cols.size()),
                             lineno);
        }
        LabeledItem item;
        item.doc_id = std::string(cols[0]);
        try {
            item.label = parse_label(cols[1]);
        } catch (const InputError&) {
            throw ParseError("bad label '" + std::string(cols[1]) + "'", lineno);
        }
        if (cols[2] != "_") item.pair_id = std::string(cols[2]);
        for (std::size_t k = 0; k < kFeatureCount; ++k) {
            const auto cell = cols[k + 3];
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size()) {
                throw ParseError("bad number '" + std::string(cell) + "' in column " + std::string(feature_name(k)),
                                 lineno);
            }
            item.features[k] = v;
        }
        ds.items.push_back(std::move(item));
    }
    if (!header) throw FormatError("dataset file has no header");
    return ds;
}

void save_dataset(const fs::path& path, const LabeledDataset& ds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NotFoundError("cannot write " + path.string());
    write_dataset_tsv(out, ds);
}

LabeledDataset load_dataset(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("cannot read " + path.string());
    return read_dataset_tsv(in);
}

}  // namespace lisible
