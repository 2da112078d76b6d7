#include "lisible/error.hpp"
#include "lisible/indicators.hpp"
#include "lisible/rng.hpp"
#include "lisible/synth.hpp"
#include "lisible/text.hpp"

#include "testing.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace lisible {
namespace {

using testing::doc_from;
using testing::Row;
using testing::sentence_from;

constexpr const char* kFin = "Mood=Ind|Tense=Pres|VerbForm=Fin";

std::size_t occ(const std::vector<Row>& rows, Feature f) {
    return syntactic_occurrences(sentence_from(rows))[index_of(f) - index_of(Feature::coordinate_clause_rate)];
}

Lexicons lexicons() {
    Lexicons lex;
    std::istringstream g("lemma\tlevel\nchat\t1\ndormir\t1\nmanger\t1\ngrand\t2\n");
    lex.graded.push_back(load_graded_lexicon(g));
    std::istringstream c(
        "connective\tcategory\tcomplexity\ncependant\tadverbial\tsimple\nquand\tconjunction\tsimple\n"
        "bien que\tconjunction\tcomplex\net\tconjunction\tsimple\n");
    lex.connectives = load_connectives(c);
    return lex;
}

// ---------------------------------------------------------------------------
// Catalog

TEST(Catalog, OrderAndNames) {
    const auto names = feature_names();
    ASSERT_EQ(names.size(), 28u);
    EXPECT_EQ(names[0], "lexical_difficulty");
    EXPECT_EQ(names[5], "words_per_sentence");
    EXPECT_EQ(names[8], "coordinate_clause_rate");
    EXPECT_EQ(names[24], "inversion_rate");
    EXPECT_EQ(names[27], "temporal_break_rate");
    for (std::size_t i = 0; i < names.size(); ++i) EXPECT_EQ(index_of(feature_from_name(names[i])), i);
    EXPECT_THROW(feature_from_name("nope"), FormatError);
    EXPECT_EQ(kLexicalCount + kLengthCount + kSyntacticCount + kStructureCount, kFeatureCount);
}

TEST(Catalog, RateFeatures) {
    EXPECT_FALSE(is_rate_feature(Feature::lexical_difficulty));
    EXPECT_FALSE(is_rate_feature(Feature::mean_constituency_tree_height));
    EXPECT_TRUE(is_rate_feature(Feature::passive_rate));
    EXPECT_TRUE(is_rate_feature(Feature::temporal_break_rate));
}

// ---------------------------------------------------------------------------
// Lexical

std::vector<std::vector<Row>> filler(std::size_t sentences, std::size_t words_each) {
    std::vector<std::vector<Row>> out;
    for (std::size_t s = 0; s < sentences; ++s) {
        std::vector<Row> rows;
        for (std::size_t w = 0; w < words_each; ++w) {
            rows.push_back({"mot", "mot", w == 0 ? "VERB" : "NOUN", w == 0 ? 0 : 1, w == 0 ? "root" : "obj"});
        }
        out.push_back(rows);
    }
    return out;
}

TEST(Lexical, OneAcronymPerHundredWords) {
    auto sents = filler(10, 10);
    sents[3][4].form = "SNCF";
    const auto lex = lexicons();
    const auto v = extract_lexical(doc_from(sents), lex.graded).values;
    EXPECT_DOUBLE_EQ(v[2], 1.0);
}

TEST(Lexical, AllLevelOneGivesOne) {
    const auto d = doc_from({{{"Chat", "chat", "NOUN", 2, "nsubj"}, {"dort", "dormir", "VERB", 0, "root"}}});
    EXPECT_DOUBLE_EQ(extract_lexical(d, lexicons().graded).values[0], 1.0);
}

TEST(Lexical, AveragesOverLexicons) {
    Lexicons lex = lexicons();
    GradedLexicon other;
    other.add("chat", 3);
    lex.graded.push_back(other);
    // chat: (1 + 3) / 2, dormir: (1 + 7) / 2
    const auto d = doc_from({{{"Chat", "chat", "NOUN", 2, "nsubj"}, {"dort", "dormir", "VERB", 0, "root"}}});
    EXPECT_DOUBLE_EQ(extract_lexical(d, lex.graded).values[0], (2.0 + 4.0) / 2.0);
}

TEST(Lexical, NumberInFiftyWords) {
    auto sents = filler(5, 10);
    sents[2][3] = {"trois", "trois", "NUM", 1, "nummod"};
    EXPECT_DOUBLE_EQ(extract_lexical(doc_from(sents), lexicons().graded).values[4], 2.0);
}

TEST(Lexical, DigitsCountAsNumeric) {
    auto sents = filler(5, 10);
    sents[0][2].form = "2021";
    sents[1][2].form = "A4";
    EXPECT_DOUBLE_EQ(extract_lexical(doc_from(sents), lexicons().graded).values[4], 4.0);
}

TEST(Lexical, ProperNounRunsAreOneEntity) {
    auto sents = filler(5, 10);
    sents[0][2] = {"Jean", "Jean", "PROPN", 1, "obj"};
    sents[0][3] = {"Paul", "Paul", "PROPN", 3, "flat"};
    sents[0][4] = {"Sartre", "Sartre", "PROPN", 3, "flat"};
    sents[1][2] = {"Paris", "Paris", "PROPN", 1, "obl"};
    EXPECT_DOUBLE_EQ(extract_lexical(doc_from(sents), lexicons().graded).values[3], 4.0);
}

TEST(Lexical, Abbreviations) {
    auto sents = filler(5, 10);
    sents[0][2].form = "M.";
    sents[1][2].form = "etc.";
    sents[2][2].form = "Mme";
    sents[3][2].form = "chap.";
    sents[4][2].form = "maison.";  // too long, not listed
    EXPECT_DOUBLE_EQ(extract_lexical(doc_from(sents), lexicons().graded).values[1], 8.0);
}

TEST(Lexical, NoContentWordsGivesOovLevel) {
    const auto d = doc_from({{{"Il", "il", "PRON", 0, "root"}}});
    const auto g = extract_lexical(d, lexicons().graded);
    EXPECT_DOUBLE_EQ(g.values[0], 7.0);
    EXPECT_FALSE(g.warnings.empty());
}

TEST(Lexical, NeedsALexicon) {
    const auto d = doc_from({{{"Il", "il", "PRON", 0, "root"}}});
    EXPECT_THROW(extract_lexical(d, {}), ParameterError);
}

// ---------------------------------------------------------------------------
// Length

TEST(Length, WordsPerSentence) {
    const auto v = extract_length(doc_from(filler(1, 10)));
    EXPECT_DOUBLE_EQ(v.values[0], 10.0);
    auto sents = filler(1, 10);
    sents.push_back(filler(1, 20)[0]);
    EXPECT_DOUBLE_EQ(extract_length(doc_from(sents)).values[0], 15.0);
}

TEST(Length, ChainHeight) {
    const auto s = sentence_from({{"r", "r", "X", 0, "root"}, {"a", "a", "X", 1, "dep"}, {"b", "b", "X", 2, "dep"},
                                  {"c", "c", "X", 3, "dep"}});
    EXPECT_EQ(dependency_tree_height(s), 3u);
    // the flat filler: every dependent hangs off the root
    EXPECT_EQ(dependency_tree_height(sentence_from(filler(1, 5)[0])), 1u);
}

TEST(Length, MissingTreesFlag) {
    const auto v = extract_length(doc_from(filler(2, 4)));
    EXPECT_TRUE(v.missing_trees);
    EXPECT_DOUBLE_EQ(v.values[2], 0.0);
    EXPECT_FALSE(v.warnings.empty());
}

TEST(Length, ConstituencyMeanOverTreedSentences) {
    Document d = doc_from(filler(2, 2));
    d.sentences[0].const_tree = parse_bracketed_tree("(SENT (NP (N mot)) (N mot))");
    const auto v = extract_length(d);
    EXPECT_FALSE(v.missing_trees);
    EXPECT_DOUBLE_EQ(v.values[2], 2.0);
}

// ---------------------------------------------------------------------------
// Syntactic

TEST(Syntactic, RelativeClause) {
    const std::vector<Row> s = {{"Le", "le", "DET", 2, "det"},
                                {"chat", "chat", "NOUN", 6, "nsubj"},
                                {"que", "que", "PRON", 5, "obj", "PronType=Rel"},
                                {"je", "je", "PRON", 5, "nsubj"},
                                {"vois", "voir", "VERB", 2, "acl:relcl", kFin},
                                {"dort", "dormir", "VERB", 0, "root", kFin},
                                {".", ".", "PUNCT", 6, "punct"}};
    EXPECT_EQ(occ(s, Feature::relative_clause_rate), 1u);
    EXPECT_EQ(occ(s, Feature::inversion_rate), 0u);
    EXPECT_EQ(occ(s, Feature::complex_tense_rate), 0u);
    EXPECT_EQ(occ(s, Feature::complex_np_rate), 0u);
}

TEST(Syntactic, AclWithRelativePronoun) {
    const std::vector<Row> s = {{"livre", "livre", "NOUN", 0, "root"},
                                {"dont", "dont", "PRON", 4, "obl"},
                                {"il", "il", "PRON", 4, "nsubj"},
                                {"parle", "parler", "VERB", 1, "acl", kFin}};
    EXPECT_EQ(occ(s, Feature::relative_clause_rate), 1u);
}

const std::vector<Row> kPassive = {{"Le", "le", "DET", 2, "det"},
                                   {"livre", "livre", "NOUN", 4, "nsubj:pass"},
                                   {"est", "être", "AUX", 4, "aux:pass", kFin},
                                   {"écrit", "écrire", "VERB", 0, "root", "Tense=Past|VerbForm=Part|Voice=Pass"},
                                   {"par", "par", "ADP", 6, "case"},
                                   {"Paul", "Paul", "PROPN", 4, "obl:agent"},
                                   {".", ".", "PUNCT", 4, "punct"}};

TEST(Syntactic, PassiveCountsOncePerVerb) {
    EXPECT_EQ(occ(kPassive, Feature::passive_rate), 1u);
    EXPECT_EQ(occ(kPassive, Feature::complex_tense_rate), 0u);
    const auto v = extract_syntactic(doc_from({kPassive})).values;
    EXPECT_DOUBLE_EQ(v[index_of(Feature::passive_rate) - 8], 100.0 / 6.0);
}

TEST(Syntactic, NegationScopes) {
    const std::vector<Row> ne_pas = {{"Il", "il", "PRON", 3, "nsubj"},
                                     {"ne", "ne", "ADV", 3, "advmod", "Polarity=Neg"},
                                     {"mange", "manger", "VERB", 0, "root", kFin},
                                     {"pas", "pas", "ADV", 3, "advmod", "Polarity=Neg"}};
    EXPECT_EQ(occ(ne_pas, Feature::negation_rate), 1u);
    const std::vector<Row> plus_rien = {{"Il", "il", "PRON", 3, "nsubj"},
                                        {"n'", "ne", "ADV", 3, "advmod"},
                                        {"a", "avoir", "VERB", 0, "root", kFin},
                                        {"plus", "plus", "ADV", 3, "advmod"},
                                        {"rien", "rien", "PRON", 3, "obj"}};
    EXPECT_EQ(occ(plus_rien, Feature::negation_rate), 1u);
    const std::vector<Row> comparative = {{"Il", "il", "PRON", 2, "nsubj"},
                                          {"mange", "manger", "VERB", 0, "root", kFin},
                                          {"plus", "plus", "ADV", 2, "advmod"}};
    EXPECT_EQ(occ(comparative, Feature::negation_rate), 0u);
    const std::vector<Row> two = {{"Il", "il", "PRON", 3, "nsubj"},
                                  {"ne", "ne", "ADV", 3, "advmod"},
                                  {"dort", "dormir", "VERB", 0, "root", kFin},
                                  {"pas", "pas", "ADV", 3, "advmod"},
                                  {"et", "et", "CCONJ", 7, "cc"},
                                  {"ne", "ne", "ADV", 7, "advmod"},
                                  {"mange", "manger", "VERB", 3, "conj", kFin},
                                  {"jamais", "jamais", "ADV", 7, "advmod"}};
    EXPECT_EQ(occ(two, Feature::negation_rate), 2u);
    EXPECT_EQ(occ(two, Feature::coordinate_clause_rate), 1u);
}

TEST(Syntactic, Cleft) {
    const std::vector<Row> s = {{"C'", "ce", "PRON", 3, "nsubj"},
                                {"est", "être", "AUX", 3, "cop", kFin},
                                {"Marie", "Marie", "PROPN", 0, "root"},
                                {"qui", "qui", "PRON", 5, "nsubj", "PronType=Rel"},
                                {"chante", "chanter", "VERB", 3, "acl:relcl", kFin},
                                {".", ".", "PUNCT", 3, "punct"}};
    EXPECT_EQ(occ(s, Feature::cleft_rate), 1u);
    const std::vector<Row> far = {{"C'", "ce", "PRON", 2, "nsubj"},      {"est", "être", "AUX", 0, "root"},
                                  {"a", "a", "X", 2, "dep"},              {"b", "b", "X", 2, "dep"},
                                  {"c", "c", "X", 2, "dep"},              {"d", "d", "X", 2, "dep"},
                                  {"qui", "qui", "PRON", 2, "dep", "PronType=Rel"}};
    EXPECT_EQ(occ(far, Feature::cleft_rate), 0u);
}

TEST(Syntactic, EnumerationOfConjuncts) {
    const std::vector<Row> s = {{"Il", "il", "PRON", 2, "nsubj"},
                                {"achète", "acheter", "VERB", 0, "root", kFin},
                                {"pommes", "pomme", "NOUN", 2, "obj"},
                                {",", ",", "PUNCT", 5, "punct"},
                                {"poires", "poire", "NOUN", 3, "conj"},
                                {",", ",", "PUNCT", 7, "punct"},
                                {"prunes", "prune", "NOUN", 3, "conj"},
                                {"et", "et", "CCONJ", 9, "cc"},
                                {"figues", "figue", "NOUN", 3, "conj"}};
    EXPECT_EQ(occ(s, Feature::enumeration_rate), 1u);
    EXPECT_EQ(occ(s, Feature::coordinate_clause_rate), 0u);
}

TEST(Syntactic, EnumerationOfCommaSiblings) {
    const std::vector<Row> s = {{"dort", "dormir", "VERB", 0, "root", kFin},
                                {"ici", "ici", "ADV", 1, "advmod"},
                                {",", ",", "PUNCT", 4, "punct"},
                                {"là", "là", "ADV", 1, "advmod"},
                                {",", ",", "PUNCT", 6, "punct"},
                                {"partout", "partout", "ADV", 1, "advmod"}};
    EXPECT_EQ(occ(s, Feature::enumeration_rate), 1u);
}

TEST(Syntactic, ParticipleAdverbialClause) {
    const std::vector<Row> s = {{"Arrivé", "arriver", "VERB", 5, "advcl", "Tense=Past|VerbForm=Part"},
                                {"à", "à", "ADP", 3, "case"},
                                {"Paris", "Paris", "PROPN", 1, "obl"},
                                {"il", "il", "PRON", 5, "nsubj"},
                                {"dort", "dormir", "VERB", 0, "root", kFin}};
    EXPECT_EQ(occ(s, Feature::adverbial_clause_rate), 1u);
    EXPECT_EQ(occ(s, Feature::participle_clause_rate), 1u);
}

TEST(Syntactic, NonfiniteAndCompletive) {
    const std::vector<Row> inf = {{"Il", "il", "PRON", 2, "nsubj"},
                                  {"décide", "décider", "VERB", 0, "root", kFin},
                                  {"de", "de", "ADP", 4, "mark"},
                                  {"partir", "partir", "VERB", 2, "xcomp", "VerbForm=Inf"}};
    EXPECT_EQ(occ(inf, Feature::nonfinite_clause_rate), 1u);
    EXPECT_EQ(occ(inf, Feature::completive_clause_rate), 0u);
    const std::vector<Row> fin = {{"Il", "il", "PRON", 2, "nsubj"},
                                  {"dit", "dire", "VERB", 0, "root", kFin},
                                  {"qu'", "que", "SCONJ", 5, "mark"},
                                  {"il", "il", "PRON", 5, "nsubj"},
                                  {"part", "partir", "VERB", 2, "ccomp", kFin}};
    EXPECT_EQ(occ(fin, Feature::completive_clause_rate), 1u);
    EXPECT_EQ(occ(fin, Feature::nonfinite_clause_rate), 0u);
}

TEST(Syntactic, Inversion) {
    const std::vector<Row> s = {{"Dans", "dans", "ADP", 3, "case"},
                                {"la", "le", "DET", 3, "det"},
                                {"ville", "ville", "NOUN", 4, "obl"},
                                {"vivait", "vivre", "VERB", 0, "root", "Mood=Ind|Tense=Imp|VerbForm=Fin"},
                                {"un", "un", "DET", 6, "det"},
                                {"homme", "homme", "NOUN", 4, "nsubj"}};
    EXPECT_EQ(occ(s, Feature::inversion_rate), 1u);
    EXPECT_EQ(occ(s, Feature::complex_tense_rate), 0u);
}

TEST(Syntactic, ComplexTenses) {
    auto one = [](const std::string& feats) {
        return std::vector<Row>{{"Il", "il", "PRON", 2, "nsubj"}, {"vient", "venir", "VERB", 0, "root", feats}};
    };
    EXPECT_EQ(occ(one("Mood=Cnd|Tense=Pres|VerbForm=Fin"), Feature::complex_tense_rate), 1u);
    EXPECT_EQ(occ(one("Mood=Cnd|Tense=Pres|VerbForm=Fin"), Feature::conditional_mood_rate), 1u);
    EXPECT_EQ(occ(one("Mood=Ind|Tense=Past|VerbForm=Fin"), Feature::complex_tense_rate), 1u);
    EXPECT_EQ(occ(one("Mood=Sub|Tense=Pres|VerbForm=Fin"), Feature::complex_tense_rate), 1u);
    EXPECT_EQ(occ(one("Mood=Ind|Tense=Imp|VerbForm=Fin"), Feature::complex_tense_rate), 0u);
    EXPECT_EQ(occ(one("Mood=Ind|Tense=Fut|VerbForm=Fin"), Feature::complex_tense_rate), 0u);
    EXPECT_EQ(occ(one("Mood=Imp|Tense=Pres|VerbForm=Fin"), Feature::complex_tense_rate), 0u);

    auto compound = [](const std::string& aux_feats) {
        return std::vector<Row>{{"Il", "il", "PRON", 3, "nsubj"},
                                {"a", "avoir", "AUX", 3, "aux", aux_feats},
                                {"mangé", "manger", "VERB", 0, "root", "Tense=Past|VerbForm=Part"}};
    };
    EXPECT_EQ(occ(compound("Mood=Ind|Tense=Pres|VerbForm=Fin"), Feature::complex_tense_rate), 0u);  // passé composé
    EXPECT_EQ(occ(compound("Mood=Ind|Tense=Imp|VerbForm=Fin"), Feature::complex_tense_rate), 1u);   // plus-que-parfait
    EXPECT_EQ(occ(compound("Mood=Ind|Tense=Fut|VerbForm=Fin"), Feature::complex_tense_rate), 1u);   // futur antérieur
}

TEST(Syntactic, ComplexNounPhrases) {
    const std::vector<Row> stacked = {{"Le", "le", "DET", 3, "det"},
                                      {"grand", "grand", "ADJ", 3, "amod"},
                                      {"chat", "chat", "NOUN", 5, "nsubj"},
                                      {"noir", "noir", "ADJ", 3, "amod"},
                                      {"dort", "dormir", "VERB", 0, "root", kFin}};
    EXPECT_EQ(occ(stacked, Feature::complex_np_rate), 1u);
    const std::vector<Row> chain = {{"livre", "livre", "NOUN", 0, "root"},
                                    {"de", "de", "ADP", 4, "case"},
                                    {"la", "le", "DET", 4, "det"},
                                    {"fille", "fille", "NOUN", 1, "nmod"},
                                    {"du", "de", "ADP", 6, "case"},
                                    {"voisin", "voisin", "NOUN", 4, "nmod"}};
    EXPECT_EQ(occ(chain, Feature::complex_np_rate), 1u);
    const std::vector<Row> single = {{"grand", "grand", "ADJ", 2, "amod"}, {"chat", "chat", "NOUN", 0, "root"}};
    EXPECT_EQ(occ(single, Feature::complex_np_rate), 0u);
}

TEST(Syntactic, BracketsAppositionParataxis) {
    const std::vector<Row> s = {{"Paul", "Paul", "PROPN", 8, "nsubj"},
                                {",", ",", "PUNCT", 4, "punct"},
                                {"mon", "mon", "DET", 4, "det"},
                                {"ami", "ami", "NOUN", 1, "appos"},
                                {",", ",", "PUNCT", 4, "punct"},
                                {"(", "(", "PUNCT", 7, "punct"},
                                {"1990", "1990", "NUM", 4, "nmod"},
                                {"dort", "dormir", "VERB", 0, "root", kFin},
                                {")", ")", "PUNCT", 7, "punct"}};
    // the bracket pair is matched by form, independently of the tree
    EXPECT_EQ(occ(s, Feature::bracketed_span_rate), 1u);
    EXPECT_EQ(occ(s, Feature::apposition_rate), 1u);
    const std::vector<Row> p = {{"Il", "il", "PRON", 5, "nsubj"},
                                {",", ",", "PUNCT", 4, "punct"},
                                {"dit", "dire", "VERB", 4, "nsubj"},
                                {"-il", "il", "PRON", 5, "parataxis"},
                                {"dort", "dormir", "VERB", 0, "root", kFin}};
    EXPECT_EQ(occ(p, Feature::interpolated_clause_rate), 1u);
}

TEST(Syntactic, CommaDelimitedFiniteClause) {
    const std::vector<Row> s = {{"Le", "le", "DET", 2, "det"},
                                {"chat", "chat", "NOUN", 8, "nsubj"},
                                {",", ",", "PUNCT", 5, "punct"},
                                {"il", "il", "PRON", 5, "nsubj"},
                                {"pleut", "pleuvoir", "VERB", 8, "dep", kFin},
                                {",", ",", "PUNCT", 5, "punct"},
                                {"encore", "encore", "ADV", 8, "advmod"},
                                {"dort", "dormir", "VERB", 0, "root", kFin}};
    EXPECT_EQ(occ(s, Feature::interpolated_clause_rate), 1u);
}

TEST(Syntactic, SentenceWithoutHeadsContributesNothing) {
    Document d = segment_plain_text("Le chat que je vois dort.");
    const auto g = extract_syntactic(d);
    for (double v : g.values) EXPECT_EQ(v, 0.0);
    EXPECT_FALSE(g.warnings.empty());
}

// ---------------------------------------------------------------------------
// Structure

TEST(Structure, InitialAdverbialIsSimple) {
    const auto d = doc_from({{{"Cependant", "cependant", "ADV", 4, "advmod"},
                              {",", ",", "PUNCT", 1, "punct"},
                              {"il", "il", "PRON", 4, "nsubj"},
                              {"dort", "dormir", "VERB", 0, "root", kFin}}});
    const auto c = structure_occurrences(d, lexicons().connectives);
    EXPECT_EQ(c.connectives, 1u);
    EXPECT_EQ(c.complex_connectives, 0u);
}

TEST(Structure, NonInitialAdverbialIsComplex) {
    const auto d = doc_from({{{"Il", "il", "PRON", 2, "nsubj"},
                              {"dort", "dormir", "VERB", 0, "root", kFin},
                              {"cependant", "cependant", "ADV", 2, "advmod"}}});
    const auto c = structure_occurrences(d, lexicons().connectives);
    EXPECT_EQ(c.complex_connectives, 1u);
}

TEST(Structure, FrontedConjunctionClauseIsComplex) {
    const std::vector<Row> fronted = {{"Quand", "quand", "SCONJ", 3, "mark"},
                                      {"il", "il", "PRON", 3, "nsubj"},
                                      {"pleut", "pleuvoir", "VERB", 6, "advcl", kFin},
                                      {",", ",", "PUNCT", 3, "punct"},
                                      {"il", "il", "PRON", 6, "nsubj"},
                                      {"dort", "dormir", "VERB", 0, "root", kFin}};
    auto c = structure_occurrences(doc_from({fronted}), lexicons().connectives);
    EXPECT_EQ(c.connectives, 1u);
    EXPECT_EQ(c.complex_connectives, 1u);
    const std::vector<Row> after = {{"Il", "il", "PRON", 2, "nsubj"},
                                    {"dort", "dormir", "VERB", 0, "root", kFin},
                                    {"quand", "quand", "SCONJ", 5, "mark"},
                                    {"il", "il", "PRON", 5, "nsubj"},
                                    {"pleut", "pleuvoir", "VERB", 2, "advcl", kFin}};
    c = structure_occurrences(doc_from({after}), lexicons().connectives);
    EXPECT_EQ(c.connectives, 1u);
    EXPECT_EQ(c.complex_connectives, 0u);
}

TEST(Structure, LexiconComplexBienQue) {
    const std::vector<Row> s = {{"Bien", "bien", "ADV", 4, "mark"},
                                {"qu'", "que", "SCONJ", 1, "fixed"},
                                {"il", "il", "PRON", 4, "nsubj"},
                                {"pleuve", "pleuvoir", "VERB", 7, "advcl", "Mood=Sub|Tense=Pres|VerbForm=Fin"},
                                {",", ",", "PUNCT", 4, "punct"},
                                {"il", "il", "PRON", 7, "nsubj"},
                                {"sort", "sortir", "VERB", 0, "root", kFin}};
    const auto c = structure_occurrences(doc_from({s}), lexicons().connectives);
    EXPECT_EQ(c.connectives, 1u);
    EXPECT_EQ(c.complex_connectives, 1u);
}

TEST(Structure, TemporalBreaksWithinParagraph) {
    auto verb = [](const std::string& tense) {
        return std::vector<Row>{{"Il", "il", "PRON", 2, "nsubj"},
                                {"part", "partir", "VERB", 0, "root", "Mood=Ind|Tense=" + tense + "|VerbForm=Fin"}};
    };
    std::string text = "# newpar\n" + testing::conllu_sentence(verb("Pres")) + testing::conllu_sentence(verb("Pres")) +
                       testing::conllu_sentence(verb("Past"));
    auto d = parse_conllu(text).at(0);
    EXPECT_EQ(structure_occurrences(d, {}).temporal_breaks, 1u);
    // a paragraph boundary resets the comparison
    text = "# newpar\n" + testing::conllu_sentence(verb("Pres")) + "# newpar\n" + testing::conllu_sentence(verb("Past"));
    d = parse_conllu(text).at(0);
    EXPECT_EQ(structure_occurrences(d, {}).temporal_breaks, 0u);
}

// ---------------------------------------------------------------------------
// Whole vector

TEST(Features, TrivialDocument) {
    const auto d = doc_from({{{"Chat", "chat", "NOUN", 2, "nsubj"},
                              {"dort", "dormir", "VERB", 0, "root", kFin},
                              {".", ".", "PUNCT", 2, "punct"}}});
    const auto r = extract_features(d, lexicons());
    EXPECT_DOUBLE_EQ(r.features[Feature::words_per_sentence], 3.0);
    for (std::size_t i = index_of(Feature::coordinate_clause_rate); i < kFeatureCount; ++i) {
        EXPECT_EQ(r.features[i], 0.0) << feature_name(i);
    }
    EXPECT_TRUE(r.missing_trees);
}

Document concat_with_itself(const Document& d) {
    Document out = d;
    std::size_t offset = 0;
    for (const auto& s : d.sentences) offset = std::max(offset, s.paragraph_id + 1);
    for (Sentence s : d.sentences) {
        s.paragraph_id += offset;
        out.sentences.push_back(std::move(s));
    }
    return out;
}

TEST(Features, ScaleInvarianceOnGeneratedDocuments) {
    const auto lex = synthetic_lexicons();
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const Document d = synthesize_document(static_cast<double>(seed) / 40.0, seed);
        const auto a = extract_features(d, lex).features;
        const auto b = extract_features(concat_with_itself(d), lex).features;
        for (std::size_t i = 0; i < kFeatureCount; ++i) EXPECT_NEAR(a[i], b[i], 1e-9) << feature_name(i);
    }
}

TEST(Features, PassiveProbeChangesOnlySyntax) {
    const auto lex = lexicons();
    const std::vector<Row> active = {{"Paul", "Paul", "PROPN", 2, "nsubj"},
                                     {"écrit", "écrire", "VERB", 0, "root", kFin},
                                     {"le", "le", "DET", 4, "det"},
                                     {"livre", "livre", "NOUN", 2, "obj"}};
    auto probe = active;
    probe[0].deprel = "nsubj:pass";
    const auto before = extract_features(doc_from({active, active}), lex).features;
    const auto after = extract_features(doc_from({active, probe}), lex).features;
    EXPECT_GT(after[Feature::passive_rate], before[Feature::passive_rate]);
    for (std::size_t i = 0; i < kLexicalCount; ++i) EXPECT_EQ(after[i], before[i]) << feature_name(i);
}

TEST(Features, DeterministicBitForBit) {
    const auto lex = synthetic_lexicons();
    const Document d = synthesize_document(0.8, 12);
    EXPECT_EQ(extract_features(d, lex).features, extract_features(d, lex).features);
}

Document random_document(Rng& rng) {
    static const std::vector<std::string> upos = {"NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "PUNCT",
                                                  "PROPN", "NUM", "AUX", "CCONJ", "SCONJ", "X"};
    static const std::vector<std::string> rels = {"nsubj", "obj", "conj", "acl:relcl", "advcl", "acl", "appos",
                                                  "xcomp", "ccomp", "parataxis", "nmod", "amod", "aux",
                                                  "aux:pass", "nsubj:pass", "cop", "punct", "mark", "cc"};
    static const std::vector<std::string> forms = {"le", "(", ")", ",", "ne", "pas", "ce", "est", "qui", "SNCF",
                                                   "M.", "12", "et", "quand", "cependant", "-", "[", "]", "plus"};
    static const std::vector<std::string> feats = {"_", "Mood=Ind|Tense=Pres|VerbForm=Fin",
                                                   "Mood=Cnd|Tense=Pres|VerbForm=Fin", "VerbForm=Inf",
                                                   "Tense=Past|VerbForm=Part", "Polarity=Neg", "PronType=Rel",
                                                   "Mood=Sub|Tense=Imp|VerbForm=Fin"};
    std::string text;
    const auto n_sent = 1 + rng.below(4);
    for (std::uint64_t s = 0; s < n_sent; ++s) {
        if (rng.bernoulli(0.3)) text += "# newpar\n";
        const auto n = 1 + rng.below(15);
        std::vector<Row> rows;
        const auto root = rng.below(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            Row r;
            r.form = forms[rng.below(forms.size())];
            r.lemma = r.form;
            r.upos = upos[rng.below(upos.size())];
            r.feats = feats[rng.below(feats.size())];
            if (i == root) {
                r.head = 0;
                r.deprel = "root";
            } else {
                // attach to an earlier token or the root, which keeps the graph a tree
                const auto target = i > 0 && rng.bernoulli(0.6) ? rng.below(i) : root;
                r.head = static_cast<int>((target == i ? root : target) + 1);
                r.deprel = rels[rng.below(rels.size())];
            }
            rows.push_back(r);
        }
        // earlier tokens may hang off the root which may come later; ensure acyclicity
        for (std::uint64_t i = 0; i < n; ++i) {
            if (i != root && static_cast<std::uint64_t>(rows[i].head - 1) >= i) rows[i].head = static_cast<int>(root + 1);
        }
        text += testing::conllu_sentence(rows);
    }
    return parse_conllu(text).at(0);
}

TEST(Features, FuzzFiniteAndNonNegative) {
    Rng rng(99);
    const auto lex = lexicons();
    for (int i = 0; i < 10000; ++i) {
        const Document d = random_document(rng);
        const auto f = extract_features(d, lex).features;
        for (std::size_t k = 0; k < kFeatureCount; ++k) {
            ASSERT_TRUE(std::isfinite(f[k]) && f[k] >= 0.0) << "doc " << i << " " << feature_name(k);
        }
        ASSERT_GE(f[Feature::lexical_difficulty], 1.0);
        ASSERT_LE(f[Feature::lexical_difficulty], 7.0);
    }
}

TEST(Features, GoldenFixture) {
    auto docs = load_parsed(testing::fixtures() / "complex_01.conllu");
    ASSERT_EQ(docs.size(), 1u);
    Lexicons lex;
    lex.graded.push_back(load_graded_lexicon(testing::lexicon_dir() / "school_grades.tsv"));
    lex.graded.push_back(load_graded_lexicon(testing::lexicon_dir() / "cefr.tsv"));
    lex.connectives = load_connectives(testing::lexicon_dir() / "connectives.tsv");
    const auto got = extract_features(docs[0], lex);
    EXPECT_FALSE(got.missing_trees);

    // hand counts: 45 words, 56 tokens, 3 sentences
    const double per100 = 100.0 / 45.0;
    EXPECT_NEAR(got.features[Feature::words_per_sentence], 56.0 / 3.0, 1e-12);
    EXPECT_NEAR(got.features[Feature::mean_dependency_tree_height], 4.0, 1e-12);
    EXPECT_NEAR(got.features[Feature::relative_clause_rate], 2 * per100, 1e-12);
    EXPECT_NEAR(got.features[Feature::passive_rate], per100, 1e-12);
    EXPECT_NEAR(got.features[Feature::complex_tense_rate], 4 * per100, 1e-12);
    EXPECT_NEAR(got.features[Feature::acronym_rate], per100, 1e-12);
    EXPECT_NEAR(got.features[Feature::complex_connective_rate], 2 * per100, 1e-12);
    EXPECT_NEAR(got.features[Feature::temporal_break_rate], 5 * per100, 1e-12);

    std::ifstream in(testing::fixtures() / "complex_01.features.json");
    std::stringstream golden;
    golden << in.rdbuf();
    const auto want = features_from_json(golden.str());
    for (std::size_t i = 0; i < kFeatureCount; ++i) EXPECT_NEAR(got.features[i], want[i], 1e-12) << feature_name(i);
}

TEST(Features, JsonAndTsvFormats) {
    FeatureVector fv;
    for (std::size_t i = 0; i < kFeatureCount; ++i) fv[i] = 0.1 * static_cast<double>(i);
    EXPECT_EQ(features_from_json(features_to_json(fv)), fv);
    const auto json = features_to_json(fv);
    EXPECT_LT(json.find("lexical_difficulty"), json.find("temporal_break_rate"));
    EXPECT_THROW(features_from_json("{\"lexical_difficulty\": 1}"), FormatError);

    std::ostringstream out;
    const std::vector<NamedFeatures> rows{{"a", fv}};
    write_features_tsv(out, rows);
    const std::string tsv = out.str();
    const auto lines = text::split(tsv, '\n');
    EXPECT_EQ(text::split(lines[0], '\t').size(), 29u);
    EXPECT_TRUE(lines[0].starts_with("doc_id\tlexical_difficulty\t"));
    EXPECT_TRUE(lines[1].starts_with("a\t0\t0.1\t0.2"));
}

}  // namespace
}  // namespace lisible
