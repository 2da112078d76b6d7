#pragma once

#include "lisible/indicators.hpp"
#include "lisible/ingest.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lisible {

struct LabeledItem {
    std::string doc_id;
    FeatureVector features;
    Label label = Label::complex;
    std::optional<std::string> pair_id;

    bool operator==(const LabeledItem&) const = default;
};

struct LabeledDataset {
    std::vector<LabeledItem> items;
    /// Source names (directories or files) the items came from.
    std::vector<std::string> provenance;

    std::size_t size() const { return items.size(); }
    std::size_t count(Label label) const;
    bool has_both_labels() const { return count(Label::simple) > 0 && count(Label::complex) > 0; }

    bool operator==(const LabeledDataset&) const = default;
};

/// Throws ValidationError unless every pair_id names exactly one simple and
/// one complex item.
void check_pairs(const LabeledDataset& ds);

struct CorpusStats {
    std::size_t n_texts = 0;
    double mean_words_per_text = 0.0;
    double mean_words_per_sentence = 0.0;
};

/// Totals-based: words/texts and words/sentences over the whole collection,
/// punctuation excluded.
CorpusStats corpus_stats(std::span<const Document> docs);

/// `*.conllu` files of a directory, sorted by name.
std::vector<std::filesystem::path> list_conllu(const std::filesystem::path& dir);

struct BuildOptions {
    bool aligned = false;
    /// Collects extraction warnings, prefixed with the doc id.
    std::vector<std::string>* warnings = nullptr;
};

/// Featurizes every document of both directories. Item ids are
/// "simple/<stem>" (or "simple/<stem>/<newdoc id>" for files holding several
/// documents). Aligned mode requires one document per file and matching stems.
LabeledDataset build_dataset(const std::filesystem::path& simple_dir, const std::filesystem::path& complex_dir,
                             const Lexicons& lexicons, const BuildOptions& options = {});

struct DatasetSplit {
    LabeledDataset train;
    LabeledDataset valid;
};

/// Pair-aware, label-stratified hold-out split. Items keep their original
/// relative order inside each fold.
DatasetSplit split_train_valid(const LabeledDataset& ds, double valid_fraction, std::uint64_t seed);

/// Columns: doc_id, label (1 simple / 0 complex), pair_id ("_" if none), then
/// the 28 features. Provenance goes in a leading `# provenance = ` comment.
void write_dataset_tsv(std::ostream& out, const LabeledDataset& ds);
LabeledDataset read_dataset_tsv(std::istream& in);
void save_dataset(const std::filesystem::path& path, const LabeledDataset& ds);
LabeledDataset load_dataset(const std::filesystem::path& path);

}  // namespace lisible
