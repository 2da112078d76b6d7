#include "lisible/indicators.hpp"

#include "lisible/error.hpp"
#include "lisible/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <set>

namespace lisible {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kNames = {
    "lexical_difficulty",
    "abbreviation_rate",
    "acronym_rate",
    "named_entity_rate",
    "numeric_expression_rate",
    "words_per_sentence",
    "mean_dependency_tree_height",
    "mean_constituency_tree_height",
    "coordinate_clause_rate",
    "relative_clause_rate",
    "adverbial_clause_rate",
    "participle_clause_rate",
    "cleft_rate",
    "interpolated_clause_rate",
    "apposition_rate",
    "enumeration_rate",
    "nonfinite_clause_rate",
    "passive_rate",
    "complex_tense_rate",
    "conditional_mood_rate",
    "negation_rate",
    "complex_np_rate",
    "bracketed_span_rate",
    "completive_clause_rate",
    "inversion_rate",
    "connective_rate",
    "complex_connective_rate",
    "temporal_break_rate",
};

enum Syn : std::size_t {
    kCoordinate,
    kRelative,
    kAdverbial,
    kParticiple,
    kCleft,
    kInterpolated,
    kApposition,
    kEnumeration,
    kNonfinite,
    kPassive,
    kComplexTense,
    kConditional,
    kNegation,
    kComplexNp,
    kBracketed,
    kCompletive,
    kInversion,
};

double per_hundred(std::size_t count, std::size_t words) {
    return words == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(words);
}

std::string lemma_of(const Token& t) {
    if (t.lemma.empty() || t.lemma == "_") return text::lowercase(t.form);
    return text::lowercase(t.lemma);
}

bool is_content(const Token& t) {
    return t.upos == "NOUN" || t.upos == "VERB" || t.upos == "ADJ" || t.upos == "ADV";
}

bool is_finite(const Token& t) {
    const auto vf = t.feat("VerbForm");
    return vf == "Fin" || (vf.empty() && !t.feat("Mood").empty());
}

bool is_verbal(const Token& t) { return t.upos == "VERB" || t.upos == "AUX"; }

bool is_comma_or_dash(std::string_view form) {
    return form == "," || form == "-" || form == "\xE2\x80\x94" || form == "\xE2\x80\x93";
}

bool is_relative_pronoun(const Token& t) {
    if (t.has_feat("PronType", "Rel")) return true;
    static const std::set<std::string, std::less<>> kRel = {
        "qui", "que", "dont", "où", "lequel", "laquelle", "lesquels", "lesquelles", "auquel", "duquel"};
    return t.upos == "PRON" && kRel.contains(lemma_of(t));
}

/// Parse-tree adjacency for one sentence.
struct Tree {
    explicit Tree(const Sentence& s) : tokens(s.tokens), children(s.tokens.size()) {
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (tokens[i].head) children[*tokens[i].head].push_back(i);
        }
    }

    bool has_child(std::size_t i, auto&& pred) const {
        return std::any_of(children[i].begin(), children[i].end(), [&](std::size_t c) { return pred(tokens[c]); });
    }

    /// [lo, hi] of the subtree rooted at i.
    std::pair<std::size_t, std::size_t> span(std::size_t i) const {
        std::size_t lo = i;
        std::size_t hi = i;
        std::vector<std::size_t> stack{i};
        while (!stack.empty()) {
            const std::size_t c = stack.back();
            stack.pop_back();
            lo = std::min(lo, c);
            hi = std::max(hi, c);
            for (std::size_t g : children[c]) stack.push_back(g);
        }
        return {lo, hi};
    }

    /// Finite token among i and its aux/cop dependents, leftmost first.
    std::optional<std::size_t> finite_carrier(std::size_t i) const {
        std::vector<std::size_t> candidates;
        for (std::size_t c : children[i]) {
            const auto rel = tokens[c].base_deprel();
            if (rel == "aux" || rel == "cop") candidates.push_back(c);
        }
        candidates.push_back(i);
        std::sort(candidates.begin(), candidates.end());
        for (std::size_t c : candidates) {
            if (is_finite(tokens[c])) return c;
        }
        return std::nullopt;
    }

    bool heads_clause(std::size_t i) const {
        return tokens[i].upos == "VERB" || has_child(i, [](const Token& t) { return t.base_deprel() == "cop"; });
    }

    const std::vector<Token>& tokens;
    std::vector<std::vector<std::size_t>> children;
};

bool is_simple_tense(const Tree& tree, std::size_t predicate, std::size_t carrier) {
    const Token& c = tree.tokens[carrier];
    std::string_view mood = c.feat("Mood");
    if (mood.empty()) mood = "Ind";
    const std::string_view tense = c.feat("Tense");
    const bool compound = tree.has_child(predicate, [](const Token& t) {
        if (t.deprel != "aux" && t.deprel != "aux:tense") return false;
        const std::string l = lemma_of(t);
        return l == "avoir" || l == "être";
    });
    if (compound) {
        // passé composé: present-indicative auxiliary + participle
        return mood == "Ind" && tense == "Pres";
    }
    return (mood == "Ind" || mood == "Imp") && (tense.empty() || tense == "Pres" || tense == "Imp" || tense == "Fut");
}

std::size_t count_enumerations(const Tree& tree) {
    std::size_t n = 0;
    for (std::size_t h = 0; h < tree.tokens.size(); ++h) {
        const auto& kids = tree.children[h];
        std::size_t conj = 0;
        std::map<std::string, std::vector<std::size_t>> by_rel;
        for (std::size_t c : kids) {
            const Token& t = tree.tokens[c];
            if (t.base_deprel() == "conj") ++conj;
            if (t.base_deprel() != "punct") by_rel[t.deprel].push_back(c);
        }
        bool found = conj >= 3;
        for (const auto& [rel, members] : by_rel) {
            if (found) break;
            std::size_t run = 1;
            for (std::size_t k = 1; k < members.size(); ++k) {
                bool comma = false;
                for (std::size_t p = members[k - 1] + 1; p < members[k]; ++p) {
                    if (tree.tokens[p].form == ",") comma = true;
                }
                run = comma ? run + 1 : 1;
                if (run >= 3) found = true;
            }
        }
        if (found) ++n;
    }
    return n;
}

std::size_t count_negation_scopes(const Tree& tree) {
    static const std::set<std::string, std::less<>> kAlways = {"ne", "pas", "jamais", "rien", "guère", "nullement"};
    static const std::set<std::string, std::less<>> kWithNe = {"plus", "personne", "aucun", "aucune", "point"};
    std::map<std::size_t, std::pair<bool, bool>> scopes;  // scope -> (has strong marker, has weak marker)
    for (std::size_t i = 0; i < tree.tokens.size(); ++i) {
        const Token& t = tree.tokens[i];
        const std::string l = lemma_of(t);
        const std::size_t scope = t.head.value_or(i);
        std::string form = text::lowercase(t.form);
        const bool strong = t.has_feat("Polarity", "Neg") || kAlways.contains(l) || form == "n'";
        if (strong) {
            scopes[scope].first = true;
        } else if (kWithNe.contains(l)) {
            scopes[scope].second = true;
        }
    }
    std::size_t n = 0;
    for (const auto& [scope, markers] : scopes) {
        if (markers.first) ++n;
    }
    return n;
}

std::size_t count_clefts(const std::vector<Token>& tokens) {
    std::size_t n = 0;
    std::size_t i = 0;
    while (i + 2 < tokens.size()) {
        if (lemma_of(tokens[i]) == "ce" && lemma_of(tokens[i + 1]) == "être") {
            const std::size_t last = std::min(tokens.size() - 1, i + 1 + 4);
            std::optional<std::size_t> rel;
            for (std::size_t k = i + 2; k <= last; ++k) {
                const std::string l = lemma_of(tokens[k]);
                if (l == "qui" || l == "que" || l == "qu'" || tokens[k].has_feat("PronType", "Rel")) {
                    rel = k;
                    break;
                }
            }
            if (rel) {
                ++n;
                i = *rel + 1;
                continue;
            }
        }
        ++i;
    }
    return n;
}

std::size_t count_brackets(const std::vector<Token>& tokens) {
    std::vector<char> stack;
    std::size_t n = 0;
    for (const Token& t : tokens) {
        if (t.form == "(" || t.form == "[") {
            stack.push_back(t.form[0]);
        } else if (t.form == ")" || t.form == "]") {
            const char open = t.form == ")" ? '(' : '[';
            auto it = std::find(stack.rbegin(), stack.rend(), open);
            if (it != stack.rend()) {
                stack.erase(std::next(it).base(), stack.end());
                ++n;
            }
        }
    }
    return n;
}

}  // namespace

std::span<const std::string_view, kFeatureCount> feature_names() { return kNames; }
std::string_view feature_name(Feature f) { return kNames[index_of(f)]; }
std::string_view feature_name(std::size_t index) { return kNames.at(index); }

Feature feature_from_name(std::string_view name) {
    auto it = std::find(kNames.begin(), kNames.end(), name);
    if (it == kNames.end()) throw FormatError("unknown feature '" + std::string(name) + "'");
    return static_cast<Feature>(it - kNames.begin());
}

bool is_rate_feature(Feature f) {
    return f != Feature::lexical_difficulty && f != Feature::words_per_sentence &&
           f != Feature::mean_dependency_tree_height && f != Feature::mean_constituency_tree_height;
}

// ---------------------------------------------------------------------------

IndicatorGroup<kLexicalCount> extract_lexical(const Document& doc, std::span<const GradedLexicon> graded) {
    if (graded.empty()) throw ParameterError("lexical indicators need at least one graded lexicon");
    static const std::set<std::string, std::less<>> kAbbrevWithPeriod = {
        "chap.", "coll.", "env.", "apr.", "fig.", "vol.", "hab.", "tél.", "mlle.", "mmes.", "boul."};
    static const std::set<std::string, std::less<>> kAbbrevBare = {
        "mme", "mmes", "mlle", "mlles", "dr", "pr", "ste", "n°", "bd", "cie", "qqn", "qqch"};

    IndicatorGroup<kLexicalCount> out;
    double level_sum = 0.0;
    std::size_t content = 0;
    std::size_t abbreviations = 0;
    std::size_t acronyms = 0;
    std::size_t entities = 0;
    std::size_t numerics = 0;
    const std::size_t words = doc.word_count();
    int oov = 0;
    for (const auto& lex : graded) oov = std::max(oov, lex.oov_level());

    for (const Sentence& s : doc.sentences) {
        bool in_entity = false;
        for (const Token& t : s.tokens) {
            if (is_content(t)) {
                const std::string lemma = lemma_of(t);
                double mean = 0.0;
                for (const auto& lex : graded) mean += lex.level(lemma);
                level_sum += mean / static_cast<double>(graded.size());
                ++content;
            }
            const std::string lower = text::lowercase(t.form);
            if (!text::is_punctuation_only(t.form)) {
                const bool period = t.form.ends_with(".");
                if ((period && (text::length(t.form) <= 4 || kAbbrevWithPeriod.contains(lower))) ||
                    kAbbrevBare.contains(lower)) {
                    ++abbreviations;
                }
            }
            std::size_t letters = 0;
            bool all_caps = true;
            for (char32_t c : text::decode_utf8(t.form)) {
                if (text::is_letter(c)) {
                    ++letters;
                    if (!text::is_upper(c)) all_caps = false;
                } else if (!(text::is_digit(c) || c == U'.' || c == U'-' || c == U'&')) {
                    all_caps = false;
                }
            }
            if (letters >= 2 && all_caps) ++acronyms;
            if (t.upos == "PROPN") {
                if (!in_entity) ++entities;
                in_entity = true;
            } else {
                in_entity = false;
            }
            if (t.upos == "NUM" || text::has_digit(t.form)) ++numerics;
        }
    }
    if (content == 0) {
        out.values[0] = oov;
        out.warnings.push_back("no content words: lexical_difficulty set to " + std::to_string(oov));
    } else {
        out.values[0] = level_sum / static_cast<double>(content);
    }
    out.values[1] = per_hundred(abbreviations, words);
    out.values[2] = per_hundred(acronyms, words);
    out.values[3] = per_hundred(entities, words);
    out.values[4] = per_hundred(numerics, words);
    return out;
}

std::size_t dependency_tree_height(const Sentence& s) {
    if (!s.has_heads) return 0;
    std::size_t height = 0;
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        std::size_t depth = 0;
        std::size_t cur = i;
        while (s.tokens[cur].head && depth <= s.tokens.size()) {
            cur = *s.tokens[cur].head;
            ++depth;
        }
        height = std::max(height, depth);
    }
    return height;
}

LengthIndicators extract_length(const Document& doc) {
    LengthIndicators out;
    if (doc.sentences.empty()) {
        out.warnings.push_back("document has no sentences");
        out.missing_trees = true;
        return out;
    }
    out.values[0] = static_cast<double>(doc.token_count()) / static_cast<double>(doc.sentences.size());

    double dep_sum = 0.0;
    std::size_t dep_n = 0;
    double const_sum = 0.0;
    std::size_t const_n = 0;
    for (const Sentence& s : doc.sentences) {
        if (s.has_heads) {
            dep_sum += static_cast<double>(dependency_tree_height(s));
            ++dep_n;
        }
        if (s.const_tree) {
            const_sum += static_cast<double>(s.const_tree->height());
            ++const_n;
        }
    }
    if (dep_n == 0) {
        out.warnings.push_back("no dependency analyses: mean_dependency_tree_height set to 0");
    } else {
        out.values[1] = dep_sum / static_cast<double>(dep_n);
    }
    if (const_n == 0) {
        out.missing_trees = true;
        out.warnings.push_back("missing trees: mean_constituency_tree_height set to 0");
    } else {
        out.values[2] = const_sum / static_cast<double>(const_n);
    }
    return out;
}

SyntacticCounts syntactic_occurrences(const Sentence& s) {
    SyntacticCounts c{};
    if (!s.has_heads) return c;
    const Tree tree(s);
    const auto& tok = s.tokens;
    const std::size_t n = tok.size();

    for (std::size_t i = 0; i < n; ++i) {
        const Token& t = tok[i];
        const std::string_view rel = t.base_deprel();
        const Token* head = t.head ? &tok[*t.head] : nullptr;

        if (rel == "conj" && t.upos == "VERB" && head && head->upos == "VERB") ++c[kCoordinate];
        if (t.deprel == "acl:relcl" || (rel == "acl" && tree.has_child(i, is_relative_pronoun))) ++c[kRelative];
        if (rel == "advcl") ++c[kAdverbial];
        if ((rel == "acl" || rel == "advcl") && t.has_feat("VerbForm", "Part") && !tree.finite_carrier(i)) {
            ++c[kParticiple];
        }
        if (rel == "appos") ++c[kApposition];
        if ((rel == "xcomp" || rel == "ccomp" || rel == "acl") && t.has_feat("VerbForm", "Inf")) ++c[kNonfinite];
        if (tree.has_child(i, [](const Token& d) { return d.deprel == "nsubj:pass" || d.deprel == "aux:pass"; })) {
            ++c[kPassive];
        }
        if (t.has_feat("Mood", "Cnd")) ++c[kConditional];
        if (rel == "ccomp" && tree.finite_carrier(i)) ++c[kCompletive];
        if (rel == "nsubj" && head && *t.head < i && (is_verbal(*head) || tree.heads_clause(*t.head))) {
            ++c[kInversion];
        }

        if (tree.heads_clause(i)) {
            if (auto carrier = tree.finite_carrier(i); carrier && !is_simple_tense(tree, i, *carrier)) {
                ++c[kComplexTense];
            }
        }

        if (rel == "parataxis") {
            ++c[kInterpolated];
        } else if (head && rel != "acl" && tree.heads_clause(i) && tree.finite_carrier(i)) {
            // delimiters may hang off the clause itself or sit just outside it
            const auto [lo, hi] = tree.span(i);
            std::optional<std::size_t> open;
            std::optional<std::size_t> close;
            if (is_comma_or_dash(tok[lo].form) && lo < i) {
                open = lo;
            } else if (lo > 0 && is_comma_or_dash(tok[lo - 1].form)) {
                open = lo - 1;
            }
            if (is_comma_or_dash(tok[hi].form) && hi > i) {
                close = hi;
            } else if (hi + 1 < n && is_comma_or_dash(tok[hi + 1].form)) {
                close = hi + 1;
            }
            if (open && close) {
                bool continues = false;
                for (std::size_t k = *close + 1; k < n; ++k) {
                    if (is_word(tok[k])) continues = true;
                }
                if (continues) ++c[kInterpolated];
            }
        }

        if (t.upos == "NOUN") {
            std::size_t modifiers = 0;
            bool chain = false;
            for (std::size_t m : tree.children[i]) {
                const auto mrel = tok[m].base_deprel();
                if (mrel == "amod" || mrel == "nmod" || mrel == "acl") ++modifiers;
                if (mrel == "nmod" && tree.has_child(m, [](const Token& d) { return d.base_deprel() == "nmod"; })) {
                    chain = true;
                }
            }
            if (modifiers >= 2 || chain) ++c[kComplexNp];
        }
    }
    c[kCleft] = count_clefts(tok);
    c[kEnumeration] = count_enumerations(tree);
    c[kNegation] = count_negation_scopes(tree);
    c[kBracketed] = count_brackets(tok);
    return c;
}

IndicatorGroup<kSyntacticCount> extract_syntactic(const Document& doc) {
    IndicatorGroup<kSyntacticCount> out;
    SyntacticCounts total{};
    for (const Sentence& s : doc.sentences) {
        if (!s.has_heads) {
            out.warnings.push_back("sentence " + (s.sent_id.empty() ? std::string("?") : s.sent_id) +
                                   " has no dependency analysis; it contributes 0 to syntactic indicators");
            continue;
        }
        const auto c = syntactic_occurrences(s);
        for (std::size_t k = 0; k < kSyntacticCount; ++k) total[k] += c[k];
    }
    const std::size_t words = doc.word_count();
    for (std::size_t k = 0; k < kSyntacticCount; ++k) out.values[k] = per_hundred(total[k], words);
    return out;
}

StructureCounts structure_occurrences(const Document& doc, const ConnectivesLexicon& connectives) {
    StructureCounts c;
    for (const Sentence& s : doc.sentences) {
        std::vector<std::string> forms;
        forms.reserve(s.tokens.size());
        for (const Token& t : s.tokens) forms.push_back(t.form);
        std::size_t first_word = 0;
        while (first_word < s.tokens.size() && !is_word(s.tokens[first_word])) ++first_word;

        for (const ConnectiveMatch& m : connectives.match_all(forms)) {
            ++c.connectives;
            bool complex = m.entry.complexity == ConnectiveComplexity::complex;
            if (!complex && m.entry.category == ConnectiveCategory::adverbial) {
                complex = m.begin != first_word;
            }
            if (!complex && m.entry.category == ConnectiveCategory::conjunction) {
                if (s.has_heads) {
                    // Climb out of the connective itself to the clause it introduces.
                    std::size_t clause = m.begin;
                    while (s.tokens[clause].head && *s.tokens[clause].head >= m.begin &&
                           *s.tokens[clause].head < m.begin + m.length) {
                        clause = *s.tokens[clause].head;
                    }
                    if (s.tokens[clause].head) {
                        clause = *s.tokens[clause].head;
                        const auto& governor = s.tokens[clause].head;
                        complex = governor && clause < *governor;
                    }
                } else {
                    complex = m.begin == first_word;
                }
            }
            if (complex) ++c.complex_connectives;
        }
    }

    std::optional<std::size_t> paragraph;
    std::string_view previous;
    for (const Sentence& s : doc.sentences) {
        if (paragraph != s.paragraph_id) {
            paragraph = s.paragraph_id;
            previous = {};
        }
        for (const Token& t : s.tokens) {
            if (!is_verbal(t) || !is_finite(t)) continue;
            const std::string_view tense = t.feat("Tense");
            if (tense.empty()) continue;
            if (!previous.empty() && previous != tense) ++c.temporal_breaks;
            previous = tense;
        }
    }
    return c;
}

IndicatorGroup<kStructureCount> extract_structure(const Document& doc, const ConnectivesLexicon& connectives) {
    IndicatorGroup<kStructureCount> out;
    const auto c = structure_occurrences(doc, connectives);
    const std::size_t words = doc.word_count();
    out.values[0] = per_hundred(c.connectives, words);
    out.values[1] = per_hundred(c.complex_connectives, words);
    out.values[2] = per_hundred(c.temporal_breaks, words);
    return out;
}

FeatureReport extract_features(const Document& doc, const Lexicons& lexicons) {
    FeatureReport report;
    std::size_t k = 0;
    auto take = [&](const auto& group) {
        for (double v : group.values) report.features[k++] = v;
        report.warnings.insert(report.warnings.end(), group.warnings.begin(), group.warnings.end());
    };
    if (doc.word_count() == 0) report.warnings.push_back("document has no words: rates set to 0");
    take(extract_lexical(doc, lexicons.graded));
    const auto length = extract_length(doc);
    report.missing_trees = length.missing_trees;
    take(length);
    take(extract_syntactic(doc));
    take(extract_structure(doc, lexicons.connectives));
    return report;
}

void write_features_tsv(std::ostream& out, std::span<const NamedFeatures> rows) {
    out << "doc_id";
    for (auto name : kNames) out << '\t' << name;
    out << '\n';
    for (const auto& row : rows) {
        out << row.doc_id;
        for (double v : row.features.values()) out << '\t' << text::format_double(v);
        out << '\n';
    }
}

std::string features_to_json(const FeatureVector& fv) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < kFeatureCount; ++i) j[std::string(kNames[i])] = fv[i];
    return j.dump();
}

FeatureVector features_from_json(std::string_view json) {
    const auto j = nlohmann::json::parse(json, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw FormatError("feature JSON is not an object");
    FeatureVector fv;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        auto it = j.find(std::string(kNames[i]));
        if (it == j.end() || !it->is_number()) {
            throw FormatError("feature JSON lacks numeric '" + std::string(kNames[i]) + "'");
        }
        fv[i] = it->get<double>();
    }
    return fv;
}

}  // namespace lisible
