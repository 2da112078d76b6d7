#pragma once

#include "lisible/ingest.hpp"
#include "lisible/lexicons.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lisible {

/// The 28 indicators, in catalog order. The order is part of every output
/// format (TSV columns, JSON keys, model inputs) and must not change.
enum class Feature : std::size_t {
    // lexical
    lexical_difficulty,
    abbreviation_rate,
    acronym_rate,
    named_entity_rate,
    numeric_expression_rate,
    // length
    words_per_sentence,
    mean_dependency_tree_height,
    mean_constituency_tree_height,
    // syntactic
    coordinate_clause_rate,
    relative_clause_rate,
    adverbial_clause_rate,
    participle_clause_rate,
    cleft_rate,
    interpolated_clause_rate,
    apposition_rate,
    enumeration_rate,
    nonfinite_clause_rate,
    passive_rate,
    complex_tense_rate,
    conditional_mood_rate,
    negation_rate,
    complex_np_rate,
    bracketed_span_rate,
    completive_clause_rate,
    inversion_rate,
    // structure
    connective_rate,
    complex_connective_rate,
    temporal_break_rate,
};

inline constexpr std::size_t kFeatureCount = 28;
inline constexpr std::size_t kLexicalCount = 5;
inline constexpr std::size_t kLengthCount = 3;
inline constexpr std::size_t kSyntacticCount = 17;
inline constexpr std::size_t kStructureCount = 3;

std::span<const std::string_view, kFeatureCount> feature_names();
std::string_view feature_name(Feature f);
std::string_view feature_name(std::size_t index);
/// Throws FormatError for names outside the catalog.
Feature feature_from_name(std::string_view name);
/// Features normalized per 100 words (everything except L1 and S1-S3).
bool is_rate_feature(Feature f);

constexpr std::size_t index_of(Feature f) { return static_cast<std::size_t>(f); }

class FeatureVector {
public:
    FeatureVector() { values_.fill(0.0); }
    explicit FeatureVector(const std::array<double, kFeatureCount>& values) : values_(values) {}

    double& operator[](Feature f) { return values_[index_of(f)]; }
    double operator[](Feature f) const { return values_[index_of(f)]; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    std::span<const double, kFeatureCount> values() const { return values_; }
    const std::array<double, kFeatureCount>& array() const { return values_; }

    bool operator==(const FeatureVector&) const = default;

private:
    std::array<double, kFeatureCount> values_;
};

/// Lexicons the extractors consult. L1 averages over every graded lexicon.
struct Lexicons {
    std::vector<GradedLexicon> graded;
    ConnectivesLexicon connectives;
};

template <std::size_t N>
struct IndicatorGroup {
    std::array<double, N> values{};
    std::vector<std::string> warnings;
};

struct LengthIndicators : IndicatorGroup<kLengthCount> {
    bool missing_trees = false;
};

/// Raw (unnormalized) per-sentence occurrence counts, Y1..Y17 order.
using SyntacticCounts = std::array<std::size_t, kSyntacticCount>;

struct StructureCounts {
    std::size_t connectives = 0;
    std::size_t complex_connectives = 0;
    std::size_t temporal_breaks = 0;
};

IndicatorGroup<kLexicalCount> extract_lexical(const Document& doc, std::span<const GradedLexicon> graded);
LengthIndicators extract_length(const Document& doc);
IndicatorGroup<kSyntacticCount> extract_syntactic(const Document& doc);
IndicatorGroup<kStructureCount> extract_structure(const Document& doc, const ConnectivesLexicon& connectives);

/// Occurrences in one sentence; all zero when the sentence has no heads.
SyntacticCounts syntactic_occurrences(const Sentence& sentence);
StructureCounts structure_occurrences(const Document& doc, const ConnectivesLexicon& connectives);

/// Root depth 0; 0 for sentences without heads.
std::size_t dependency_tree_height(const Sentence& sentence);

struct FeatureReport {
    FeatureVector features;
    std::vector<std::string> warnings;
    bool missing_trees = false;
};

FeatureReport extract_features(const Document& doc, const Lexicons& lexicons);

struct NamedFeatures {
    std::string doc_id;
    FeatureVector features;
};

/// Header `doc_id` + catalog names; values in shortest round-trip form.
void write_features_tsv(std::ostream& out, std::span<const NamedFeatures> rows);
/// JSON object keyed by catalog names, in catalog order.
std::string features_to_json(const FeatureVector& fv);
FeatureVector features_from_json(std::string_view json);

}  // namespace lisible
