#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lisible {

/// Lemma -> lowest level at which the lemma is attested (1 = easiest).
class GradedLexicon {
public:
    static constexpr int kDefaultLevels = 6;

    explicit GradedLexicon(int n_levels = kDefaultLevels, std::string source_name = {});

    /// Keeps the minimum level for repeated lemmas.
    void add(std::string_view lemma, int level);

    /// Attested level, or n_levels + 1 for unknown lemmas.
    int level(std::string_view lemma) const;
    std::optional<int> find(std::string_view lemma) const;

    int n_levels() const { return n_levels_; }
    int oov_level() const { return n_levels_ + 1; }
    const std::string& source_name() const { return source_name_; }
    std::size_t size() const { return entries_.size(); }
    const std::unordered_map<std::string, int>& entries() const { return entries_; }

private:
    std::unordered_map<std::string, int> entries_;
    int n_levels_;
    std::string source_name_;
};

/// TSV with header `lemma<TAB>level`.
GradedLexicon load_graded_lexicon(std::istream& in, int n_levels = GradedLexicon::kDefaultLevels,
                                  std::string source_name = {});
GradedLexicon load_graded_lexicon(const std::filesystem::path& path, int n_levels = GradedLexicon::kDefaultLevels);

inline int word_level(const GradedLexicon& lex, std::string_view lemma) { return lex.level(lemma); }

enum class ConnectiveCategory { conjunction, adverbial, other };
enum class ConnectiveComplexity { simple, complex };

struct ConnectiveEntry {
    ConnectiveCategory category = ConnectiveCategory::other;
    ConnectiveComplexity complexity = ConnectiveComplexity::simple;

    bool operator==(const ConnectiveEntry&) const = default;
};

struct ConnectiveMatch {
    std::size_t begin = 0;
    std::size_t length = 0;
    std::string text;
    ConnectiveEntry entry;
};

class ConnectivesLexicon {
public:
    /// `connective` may span several words; whitespace is normalized to single spaces.
    void add(std::string_view connective, ConnectiveEntry entry);

    std::optional<ConnectiveEntry> find(std::string_view connective) const;

    /// Longest entry starting at `pos` in a sequence of word forms. Forms are
    /// lowercased; an elided form such as "qu'" also tries "que".
    std::optional<ConnectiveMatch> match_at(std::span<const std::string> forms, std::size_t pos) const;

    /// Greedy left-to-right, non-overlapping longest matches.
    std::vector<ConnectiveMatch> match_all(std::span<const std::string> forms) const;

    std::size_t size() const { return entries_.size(); }
    std::size_t max_words() const { return max_words_; }
    const std::unordered_map<std::string, ConnectiveEntry>& entries() const { return entries_; }

private:
    std::unordered_map<std::string, ConnectiveEntry> entries_;
    std::size_t max_words_ = 0;
};

/// TSV with header `connective<TAB>category<TAB>complexity`.
ConnectivesLexicon load_connectives(std::istream& in);
ConnectivesLexicon load_connectives(const std::filesystem::path& path);

std::string_view to_string(ConnectiveCategory c);
std::string_view to_string(ConnectiveComplexity c);

}  // namespace lisible
