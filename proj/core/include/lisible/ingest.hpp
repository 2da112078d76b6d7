#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lisible {

/// Binary class of a text in the simple-vs-complex proxy task.
enum class Label { complex = 0, simple = 1 };

std::string_view to_string(Label label);
Label parse_label(std::string_view s);

/// One word of a parsed sentence (a CoNLL-U token line).
struct Token {
    std::string form;
    std::string lemma;
    std::string upos = "X";
    std::string xpos = "_";
    std::map<std::string, std::string> morph;
    /// 0-based index of the governor in the sentence; empty for the root or
    /// when the sentence carries no dependency analysis.
    std::optional<std::size_t> head;
    std::string deprel = "_";
    std::string deps = "_";
    std::string misc = "_";

    bool is_bracket_open() const { return form == "(" || form == "["; }
    bool is_bracket_close() const { return form == ")" || form == "]"; }

    /// Value of a morphological feature, or empty.
    std::string_view feat(std::string_view key) const;
    bool has_feat(std::string_view key, std::string_view value) const { return feat(key) == value; }

    /// Universal relation without its subtype ("acl:relcl" -> "acl").
    std::string_view base_deprel() const;

    bool operator==(const Token&) const = default;
};

/// Phrase-structure node. Preterminals such as `(DET Le)` are leaves carrying
/// both a label and the terminal form.
struct ConstituencyNode {
    std::string label;
    std::vector<ConstituencyNode> children;
    std::optional<std::string> leaf_form;

    bool is_leaf() const { return children.empty(); }
    /// Leaf = 0.
    std::size_t height() const;
    std::vector<std::string> leaves() const;
    /// Penn-style bracketing; parse_bracketed_tree(n.to_string()) == n.
    std::string to_string() const;

    bool operator==(const ConstituencyNode&) const = default;
};

struct Sentence {
    std::vector<Token> tokens;
    std::optional<ConstituencyNode> const_tree;
    std::size_t paragraph_id = 0;
    std::string sent_id;
    /// Every token carries a dependency analysis: exactly one root, all
    /// other heads valid. False for segmented plain text.
    bool has_heads = false;

    bool operator==(const Sentence&) const = default;
};

struct Document {
    std::string id;
    std::vector<Sentence> sentences;
    std::optional<Label> source_label;

    std::size_t token_count() const;
    /// Tokens that are not punctuation.
    std::size_t word_count() const;

    bool operator==(const Document&) const = default;
};

/// Whether a token counts as a word (anything but punctuation/symbols).
bool is_word(const Token& token);

/// Reads CoNLL-U. Returns one Document per `# newdoc` block; without markers,
/// a single Document named `default_id`. Range lines ("3-4") and empty nodes
/// ("3.1") are skipped.
std::vector<Document> parse_conllu(std::istream& in, std::string_view default_id = "doc");
std::vector<Document> parse_conllu(std::string_view text, std::string_view default_id = "doc");
std::vector<Document> read_conllu_file(const std::filesystem::path& path);

void write_conllu(std::ostream& out, const std::vector<Document>& docs);
std::string to_conllu(const Document& doc);

ConstituencyNode parse_bracketed_tree(std::string_view input);

/// Attaches trees from a sidecar file (`sent_id<TAB>(tree)` per line). Each
/// tree's leaves must match its sentence's token forms.
void attach_trees(std::span<Document> docs, std::istream& sidecar);
void attach_trees_file(std::span<Document> docs, const std::filesystem::path& sidecar);

/// Loads `path` and, if present, the `.trees` sidecar with the same stem.
std::vector<Document> load_parsed(const std::filesystem::path& path);

/// Heuristic sentence segmentation and tokenization for baselines on
/// unparsed text. Tokens have upos "X" and no heads.
Document segment_plain_text(std::string_view input, std::string_view id = "doc");

/// Vowel-group syllable count with a silent-final-schwa correction.
int count_syllables_fr(std::string_view word);

}  // namespace lisible
