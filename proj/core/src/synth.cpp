#include "lisible/synth.hpp"

#include "lisible/error.hpp"
#include "lisible/rng.hpp"
#include "lisible/text.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace lisible {

namespace fs = std::filesystem;

namespace {

struct Word {
    const char* lemma;
    int level;
};

// Easy vocabulary sits at levels 1-2, rare vocabulary at 4-6.
constexpr Word kEasyNouns[] = {{"chat", 1}, {"chien", 1}, {"pain", 1}, {"lit", 1},    {"jeu", 1},
                               {"train", 1}, {"parc", 1}, {"livre", 1}, {"sac", 1},   {"bus", 1},
                               {"ballon", 1}, {"jardin", 1}, {"vélo", 1}, {"gâteau", 2}, {"bateau", 2}};
constexpr Word kRareNouns[] = {{"règlement", 4},     {"dispositif", 5},     {"amendement", 5},  {"législateur", 6},
                               {"contentieux", 6},   {"établissement", 4},  {"fonctionnement", 4},
                               {"aménagement", 5},   {"ministère", 4},      {"organisme", 5},
                               {"recouvrement", 6},  {"investissement", 5}, {"arbitrage", 6}};
constexpr Word kEasyVerbs[] = {{"aimer", 1}, {"jouer", 1},  {"regarder", 1}, {"parler", 1}, {"chercher", 1},
                               {"trouver", 1}, {"porter", 1}, {"donner", 1},  {"garder", 1}, {"montrer", 2}};
constexpr Word kRareVerbs[] = {{"entériner", 6}, {"promulguer", 6}, {"corroborer", 6}, {"stipuler", 5},
                               {"préconiser", 5}, {"amender", 5},    {"ratifier", 5},   {"consolider", 4},
                               {"réglementer", 5}, {"appréhender", 5}};
constexpr Word kEasyAdjs[] = {{"grand", 1}, {"petit", 1}, {"bon", 1}, {"beau", 1}, {"rouge", 1}};
constexpr Word kRareAdjs[] = {{"considérable", 4}, {"préalable", 5}, {"réglementaire", 5}, {"substantiel", 6},
                              {"administratif", 4}};
constexpr Word kEasyAdvs[] = {{"bien", 1}, {"vite", 1}, {"souvent", 1}};
constexpr Word kRareAdvs[] = {{"préalablement", 6}, {"conformément", 5}, {"substantiellement", 6}};
constexpr Word kFunctionWords[] = {{"décider", 1}, {"affirmer", 2}, {"être", 1}, {"avoir", 1}, {"ville", 1}};

constexpr const char* kNames[] = {"Marie", "Pierre", "Paris", "Lyon", "Lucie", "Marseille"};
constexpr const char* kSurnames[] = {"Dupont", "Martin", "Bernard"};
constexpr const char* kAcronyms[] = {"ONU", "SNCF", "CNRS", "INSEE", "OCDE"};

struct ConnectiveSpec {
    const char* text;
    const char* category;
    const char* complexity;
};
constexpr ConnectiveSpec kConnectives[] = {
    {"et", "conjunction", "simple"},        {"mais", "conjunction", "simple"},
    {"quand", "conjunction", "simple"},     {"parce que", "conjunction", "simple"},
    {"bien que", "conjunction", "complex"}, {"afin que", "conjunction", "complex"},
    {"puis", "adverbial", "simple"},        {"ensuite", "adverbial", "simple"},
    {"néanmoins", "adverbial", "complex"},  {"toutefois", "adverbial", "complex"},
    {"en outre", "adverbial", "complex"},
};

using Feats = std::map<std::string, std::string>;

bool starts_with_vowel(std::string_view s) {
    const auto u = text::decode_utf8(s);
    if (u.empty()) return false;
    const char32_t c = text::to_lower(u[0]);
    return std::u32string_view(U"aeiouyhéèêàâîôû").find(c) != std::u32string_view::npos;
}

std::string capitalize(std::string_view s) {
    auto u = text::decode_utf8(s);
    if (!u.empty()) u[0] = text::to_upper(u[0]);
    return text::encode_utf8(u);
}

enum class Tense { pres, imp, fut, cnd, past_simple, pluperfect };

class Builder {
public:
    std::size_t add(std::string form, std::string lemma, std::string upos, std::string deprel, Feats feats = {}) {
        Token t;
        t.form = std::move(form);
        t.lemma = std::move(lemma);
        t.upos = std::move(upos);
        t.deprel = std::move(deprel);
        t.morph = std::move(feats);
        tokens_.push_back(std::move(t));
        return tokens_.size() - 1;
    }
    void attach(std::size_t dep, std::size_t head) { tokens_[dep].head = head; }
    void relabel(std::size_t i, std::string deprel) { tokens_[i].deprel = std::move(deprel); }
    std::size_t size() const { return tokens_.size(); }
    Token& operator[](std::size_t i) { return tokens_[i]; }
    std::vector<Token> take() { return std::move(tokens_); }

private:
    std::vector<Token> tokens_;
};

class Generator {
public:
    Generator(double difficulty, std::uint64_t seed) : d_(difficulty), rng_(seed) {}

    Document document(std::string id, std::size_t min_sentences, std::size_t max_sentences) {
        Document doc;
        doc.id = std::move(id);
        const std::size_t n = min_sentences + rng_.below(max_sentences - min_sentences + 1);
        const std::size_t paragraphs = 2 + rng_.below(2);
        base_tense_ = Tense::pres;
        for (std::size_t i = 0; i < n; ++i) {
            Sentence s;
            s.paragraph_id = i * paragraphs / n;
            s.sent_id = doc.id + "-s" + std::to_string(i + 1);
            s.tokens = sentence();
            s.has_heads = true;
            doc.sentences.push_back(std::move(s));
        }
        for (Sentence& s : doc.sentences) s.const_tree = constituency(s.tokens);
        return doc;
    }

private:
    bool chance(double weight) { return rng_.bernoulli(std::clamp(weight * d_, 0.0, 1.0)); }

    template <std::size_t N>
    const char* pick(const Word (&list)[N]) {
        return list[rng_.below(N)].lemma;
    }
    template <std::size_t N>
    const char* pick(const char* const (&list)[N]) {
        return list[rng_.below(N)];
    }

    std::string noun_lemma() { return rng_.bernoulli(d_) ? pick(kRareNouns) : pick(kEasyNouns); }
    std::string verb_lemma() { return rng_.bernoulli(d_) ? pick(kRareVerbs) : pick(kEasyVerbs); }
    std::string adj_lemma() { return rng_.bernoulli(d_) ? pick(kRareAdjs) : pick(kEasyAdjs); }
    std::string adv_lemma() { return rng_.bernoulli(d_) ? pick(kRareAdvs) : pick(kEasyAdvs); }

    Tense sentence_tense() {
        if (chance(0.5)) {
            const std::uint64_t r = rng_.below(3);
            return r == 0 ? Tense::cnd : r == 1 ? Tense::past_simple : Tense::pluperfect;
        }
        // Difficult texts drift between simple tenses too.
        if (chance(0.4)) base_tense_ = rng_.bernoulli(0.5) ? Tense::imp : Tense::fut;
        return base_tense_;
    }

    /// Finite verb group with lemma `lemma`; returns the index of the lexical verb.
    std::size_t finite_verb(Builder& b, const std::string& lemma, Tense tense, bool passive) {
        const std::string stem = lemma.substr(0, lemma.size() - 2);
        if (passive || tense == Tense::pluperfect) {
            std::size_t aux = 0;
            if (tense == Tense::pluperfect) {
                aux = b.add("avait", "avoir", "AUX", "aux:tense",
                            {{"Mood", "Ind"}, {"Tense", "Imp"}, {"VerbForm", "Fin"}});
                if (passive) {
                    const std::size_t ete = b.add("été", "être", "AUX", "aux:pass", {{"VerbForm", "Part"}});
                    const std::size_t v = b.add(stem + "é", lemma, "VERB", "", {{"VerbForm", "Part"}, {"Voice", "Pass"}});
                    b.attach(aux, v);
                    b.attach(ete, v);
                    return v;
                }
            } else {
                static const std::map<Tense, std::pair<const char*, Feats>> kEtre = {
                    {Tense::pres, {"est", {{"Mood", "Ind"}, {"Tense", "Pres"}}}},
                    {Tense::imp, {"était", {{"Mood", "Ind"}, {"Tense", "Imp"}}}},
                    {Tense::fut, {"sera", {{"Mood", "Ind"}, {"Tense", "Fut"}}}},
                    {Tense::cnd, {"serait", {{"Mood", "Cnd"}, {"Tense", "Pres"}}}},
                    {Tense::past_simple, {"fut", {{"Mood", "Ind"}, {"Tense", "Past"}}}},
                };
                const auto& [form, feats] = kEtre.at(tense);
                Feats f = feats;
                f["VerbForm"] = "Fin";
                aux = b.add(form, "être", "AUX", "aux:pass", f);
            }
            Feats vf{{"VerbForm", "Part"}};
            if (passive) vf["Voice"] = "Pass";
            const std::size_t v = b.add(stem + "é", lemma, "VERB", "", vf);
            b.attach(aux, v);
            return v;
        }
        std::string form;
        Feats f{{"VerbForm", "Fin"}, {"Mood", "Ind"}, {"Person", "3"}};
        switch (tense) {
            case Tense::pres: form = stem + "e"; f["Tense"] = "Pres"; break;
            case Tense::imp: form = stem + "ait"; f["Tense"] = "Imp"; break;
            case Tense::fut: form = lemma + "a"; f["Tense"] = "Fut"; break;
            case Tense::cnd: form = lemma + "ait"; f["Tense"] = "Pres"; f["Mood"] = "Cnd"; break;
            case Tense::past_simple: form = stem + "a"; f["Tense"] = "Past"; break;
            case Tense::pluperfect: break;
        }
        return b.add(form, lemma, "VERB", "", f);
    }

    std::size_t determiner_noun(Builder& b, const std::string& lemma, bool capital = false) {
        std::string det = starts_with_vowel(lemma) ? "l'" : "le";
        if (capital) det = capitalize(det);
        const std::size_t dt = b.add(det, "le", "DET", "det", {{"Definite", "Def"}, {"PronType", "Art"}});
        const std::size_t n = b.add(lemma, lemma, "NOUN", "", {{"Gender", "Masc"}, {"Number", "Sing"}});
        b.attach(dt, n);
        return n;
    }

    std::size_t proper_name(Builder& b) {
        if (chance(0.5)) {
            const std::size_t m = b.add("M.", "monsieur", "NOUN", "");
            const std::size_t p = b.add(pick(kSurnames), "", "PROPN", "flat:name");
            b[p].lemma = b[p].form;
            b.attach(p, m);
            return m;
        }
        const std::size_t p = b.add(pick(kNames), "", "PROPN", "");
        b[p].lemma = b[p].form;
        if (rng_.bernoulli(0.3)) {
            const std::size_t q = b.add(pick(kSurnames), "", "PROPN", "flat:name");
            b[q].lemma = b[q].form;
            b.attach(q, p);
        }
        return p;
    }

    /// Subject or object phrase; `rich` allows modifiers.
    std::size_t noun_phrase(Builder& b, bool rich, bool capital = false) {
        if (rng_.bernoulli(0.1 + 0.25 * d_)) {
            if (capital || !chance(0.6)) return proper_name(b);
            const std::size_t dt = b.add("l'", "le", "DET", "det");
            const std::size_t a = b.add(pick(kAcronyms), "", "PROPN", "");
            b[a].lemma = b[a].form;
            b.attach(dt, a);
            return a;
        }
        const std::size_t n = determiner_noun(b, noun_lemma(), capital);
        if (!rich) return n;

        if (chance(0.7)) {
            const std::string adj = adj_lemma();
            const std::size_t a = b.add(adj, adj, "ADJ", "amod");
            b.attach(a, n);
            std::size_t anchor = n;
            const int depth = chance(0.5) ? 2 : 1;
            for (int k = 0; k < depth; ++k) {
                const std::size_t du = b.add("du", "de", "ADP", "case");
                const std::string lemma = noun_lemma();
                const std::size_t m = b.add(lemma, lemma, "NOUN", "nmod");
                b.attach(du, m);
                b.attach(m, anchor);
                anchor = m;
            }
        } else if (rng_.bernoulli(0.2)) {
            const std::string adj = pick(kEasyAdjs);
            const std::size_t a = b.add(adj, adj, "ADJ", "amod");
            b.attach(a, n);
        }
        if (chance(0.5)) {
            const std::size_t qui = b.add("qui", "qui", "PRON", "nsubj", {{"PronType", "Rel"}});
            const std::size_t v = finite_verb(b, verb_lemma(), Tense::pres, false);
            b.relabel(v, "acl:relcl");
            b.attach(v, n);
            b.attach(qui, v);
            const std::size_t o = noun_phrase(b, false);
            b.relabel(o, "obj");
            b.attach(o, v);
        }
        if (chance(0.35)) {
            const std::size_t c1 = b.add(",", ",", "PUNCT", "punct");
            const std::size_t ap = determiner_noun(b, noun_lemma());
            b.relabel(ap, "appos");
            b.attach(ap, n);
            b.attach(c1, ap);
            const std::size_t c2 = b.add(",", ",", "PUNCT", "punct");
            b.attach(c2, ap);
        }
        if (chance(0.3)) {
            const std::size_t open = b.add("(", "(", "PUNCT", "punct");
            std::size_t inner = 0;
            if (rng_.bernoulli(0.5)) {
                inner = b.add(std::to_string(1950 + rng_.below(70)), "", "NUM", "nmod", {{"NumType", "Card"}});
                b[inner].lemma = b[inner].form;
            } else {
                inner = b.add(pick(kAcronyms), "", "PROPN", "appos");
                b[inner].lemma = b[inner].form;
            }
            const std::size_t close = b.add(")", ")", "PUNCT", "punct");
            b.attach(inner, n);
            b.attach(open, inner);
            b.attach(close, inner);
        }
        return n;
    }

    /// Subordinate clause "NP V NP" headed by its verb.
    std::size_t small_clause(Builder& b, Tense tense) {
        const std::size_t s = noun_phrase(b, false);
        const std::size_t v = finite_verb(b, verb_lemma(), tense, false);
        b.relabel(s, "nsubj");
        b.attach(s, v);
        const std::size_t o = noun_phrase(b, false);
        b.relabel(o, "obj");
        b.attach(o, v);
        return v;
    }

    std::vector<Token> sentence() {
        Builder b;
        const Tense tense = sentence_tense();
        std::vector<std::size_t> pre;  // dependents of the main verb placed before it
        bool capital = true;

        if (rng_.bernoulli(0.25)) {
            const char* w = rng_.bernoulli(0.5) ? "Puis" : "Ensuite";
            pre.push_back(b.add(w, text::lowercase(w), "ADV", "advmod"));
            pre.push_back(b.add(",", ",", "PUNCT", "punct"));
            capital = false;
        } else if (chance(0.35)) {
            const char* w = rng_.bernoulli(0.5) ? "Néanmoins" : "Toutefois";
            pre.push_back(b.add(w, text::lowercase(w), "ADV", "advmod"));
            pre.push_back(b.add(",", ",", "PUNCT", "punct"));
            capital = false;
        }

        if (chance(0.3)) {
            // fronted concessive clause
            const std::size_t bien = b.add(capital ? "Bien" : "bien", "bien", "SCONJ", "mark");
            const std::size_t que = b.add("que", "que", "SCONJ", "fixed");
            b.attach(que, bien);
            const std::size_t s = noun_phrase(b, false);
            const std::string lemma = verb_lemma();
            const std::size_t v = b.add(lemma.substr(0, lemma.size() - 2) + "e", lemma, "VERB", "advcl",
                                        {{"Mood", "Sub"}, {"Tense", "Pres"}, {"VerbForm", "Fin"}});
            b.attach(bien, v);
            b.relabel(s, "nsubj");
            b.attach(s, v);
            const std::size_t comma = b.add(",", ",", "PUNCT", "punct");
            b.attach(comma, v);
            pre.push_back(v);
            capital = false;
        }

        bool cleft = false;
        if (chance(0.25)) {
            pre.push_back(b.add(capital ? "C'" : "c'", "ce", "PRON", "dep", {{"PronType", "Dem"}}));
            pre.push_back(b.add("est", "être", "AUX", "dep", {{"Mood", "Ind"}, {"Tense", "Pres"}, {"VerbForm", "Fin"}}));
            pre.push_back(b.add("ainsi", "ainsi", "ADV", "advmod"));
            pre.push_back(b.add("que", "que", "SCONJ", "mark", {{"PronType", "Rel"}}));
            capital = false;
            cleft = true;
        }

        const bool inversion = !cleft && chance(0.25);
        const bool passive = !inversion && chance(0.5);
        std::optional<std::size_t> subject;
        std::size_t verb = 0;
        std::vector<std::size_t> post;

        if (inversion) {
            const std::size_t dans = b.add(capital ? "Dans" : "dans", "dans", "ADP", "case");
            const std::size_t loc = determiner_noun(b, "ville");
            b.attach(dans, loc);
            b.relabel(loc, "obl");
            pre.push_back(loc);
            verb = finite_verb(b, verb_lemma(), tense, false);
            subject = noun_phrase(b, true);
            b.relabel(*subject, "nsubj");
        } else {
            subject = noun_phrase(b, true, capital);
            b.relabel(*subject, passive ? "nsubj:pass" : "nsubj");
            if (chance(0.25)) {
                // interpolated clause between subject and verb
                const std::size_t c1 = b.add(",", ",", "PUNCT", "punct");
                const std::size_t v = small_clause(b, Tense::pres);
                const std::size_t c2 = b.add(",", ",", "PUNCT", "punct");
                b.relabel(v, "parataxis");
                b.attach(c1, v);
                b.attach(c2, v);
                pre.push_back(v);
            }
            const bool negated = chance(0.4);
            std::optional<std::size_t> ne;
            if (negated) ne = b.add("ne", "ne", "ADV", "advmod", {{"Polarity", "Neg"}});
            const bool control = !passive && chance(0.4);
            const bool report = !passive && !control && chance(0.4);
            if (control) {
                verb = finite_verb(b, "décider", tense, false);
            } else if (report) {
                verb = finite_verb(b, "affirmer", tense, false);
            } else {
                verb = finite_verb(b, verb_lemma(), tense, passive);
            }
            if (ne) b.attach(*ne, verb);
            if (negated) {
                const std::size_t pas = b.add("pas", "pas", "ADV", "advmod", {{"Polarity", "Neg"}});
                b.attach(pas, verb);
            }
            if (control) {
                const std::size_t de = b.add("de", "de", "ADP", "mark");
                const std::string lemma = verb_lemma();
                const std::size_t inf = b.add(lemma, lemma, "VERB", "xcomp", {{"VerbForm", "Inf"}});
                b.attach(de, inf);
                b.attach(inf, verb);
                const std::size_t o = noun_phrase(b, true);
                b.relabel(o, "obj");
                b.attach(o, inf);
            } else if (report) {
                const std::size_t que = b.add("que", "que", "SCONJ", "mark");
                const std::size_t v = small_clause(b, sentence_tense());
                b.relabel(v, "ccomp");
                b.attach(que, v);
                b.attach(v, verb);
            } else if (passive) {
                const std::size_t par = b.add("par", "par", "ADP", "case");
                const std::size_t agent = noun_phrase(b, true);
                b.relabel(agent, "obl:agent");
                b.attach(par, agent);
                b.attach(agent, verb);
            } else {
                const std::size_t o = noun_phrase(b, true);
                b.relabel(o, "obj");
                b.attach(o, verb);
                if (chance(0.3)) {
                    for (int k = 0; k < 3; ++k) {
                        const std::size_t sep = b.add(k == 2 ? "et" : ",", k == 2 ? "et" : ",",
                                                      k == 2 ? "CCONJ" : "PUNCT", k == 2 ? "cc" : "punct");
                        const std::size_t c = determiner_noun(b, noun_lemma());
                        b.relabel(c, "conj");
                        b.attach(sep, c);
                        b.attach(c, o);
                    }
                }
            }
        }
        if (subject) b.attach(*subject, verb);

        if (chance(0.4)) {
            const std::size_t adv_index = b.add("", "", "ADV", "advmod");
            const std::string adv = adv_lemma();
            b[adv_index].form = adv;
            b[adv_index].lemma = adv;
            post.push_back(adv_index);
        }
        if (chance(0.35)) {
            const std::size_t en = b.add("en", "en", "ADP", "case");
            const std::size_t year = b.add(std::to_string(1950 + rng_.below(70)), "", "NUM", "obl", {{"NumType", "Card"}});
            b[year].lemma = b[year].form;
            b.attach(en, year);
            post.push_back(year);
        }
        if (chance(0.35)) {
            const std::size_t comma = b.add(",", ",", "PUNCT", "punct");
            const std::string lemma = verb_lemma();
            const std::size_t part = b.add(lemma.substr(0, lemma.size() - 2) + "ant", lemma, "VERB", "advcl",
                                           {{"VerbForm", "Part"}, {"Tense", "Pres"}});
            b.attach(comma, part);
            const std::size_t o = noun_phrase(b, false);
            b.relabel(o, "obj");
            b.attach(o, part);
            post.push_back(part);
        }
        if (chance(0.5)) {
            const std::size_t quand = b.add("quand", "quand", "SCONJ", "mark");
            const std::size_t v = small_clause(b, tense == Tense::pluperfect ? Tense::imp : tense);
            b.relabel(v, "advcl");
            b.attach(quand, v);
            post.push_back(v);
        }
        if (chance(0.5)) {
            const std::size_t et = b.add("et", "et", "CCONJ", "cc");
            const std::size_t v = finite_verb(b, verb_lemma(), tense == Tense::pluperfect ? Tense::imp : tense, false);
            b.relabel(v, "conj");
            b.attach(et, v);
            const std::size_t o = noun_phrase(b, false);
            b.relabel(o, "obj");
            b.attach(o, v);
            post.push_back(v);
        }
        const std::size_t stop = b.add(".", ".", "PUNCT", "punct");
        post.push_back(stop);

        for (std::size_t i : pre) b.attach(i, verb);
        for (std::size_t i : post) b.attach(i, verb);
        b.relabel(verb, "root");
        auto tokens = b.take();
        tokens[verb].head.reset();
        tokens[0].form = capitalize(tokens[0].form);
        return tokens;
    }

    static std::string phrase_label(const Token& t) {
        if (t.upos == "NOUN" || t.upos == "PROPN" || t.upos == "PRON" || t.upos == "NUM") return "NP";
        if (t.upos == "VERB" || t.upos == "AUX") return t.head ? "VP" : "SENT";
        if (t.upos == "ADJ") return "AP";
        if (t.upos == "ADV") return "AdP";
        return "XP";
    }

    static ConstituencyNode constituent(const std::vector<Token>& tokens,
                                        const std::vector<std::vector<std::size_t>>& children, std::size_t i) {
        ConstituencyNode leaf;
        leaf.label = tokens[i].upos;
        leaf.leaf_form = tokens[i].form;
        if (children[i].empty()) return leaf;
        ConstituencyNode node;
        node.label = phrase_label(tokens[i]);
        bool placed = false;
        for (std::size_t c : children[i]) {
            if (!placed && c > i) {
                node.children.push_back(leaf);
                placed = true;
            }
            node.children.push_back(constituent(tokens, children, c));
        }
        if (!placed) node.children.push_back(leaf);
        return node;
    }

    static ConstituencyNode constituency(const std::vector<Token>& tokens) {
        std::vector<std::vector<std::size_t>> children(tokens.size());
        std::size_t root = 0;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (tokens[i].head) {
                children[*tokens[i].head].push_back(i);
            } else {
                root = i;
            }
        }
        return constituent(tokens, children, root);
    }

    double d_;
    Rng rng_;
    Tense base_tense_ = Tense::pres;
};

template <std::size_t N>
void put_words(GradedLexicon& lex, const Word (&list)[N]) {
    for (const Word& w : list) lex.add(w.lemma, w.level);
}

}  // namespace

Document synthesize_document(double difficulty, std::uint64_t seed, std::string id) {
    if (!(difficulty >= 0.0 && difficulty <= 1.0)) throw ParameterError("difficulty must lie in [0, 1]");
    return Generator(difficulty, seed).document(std::move(id), 8, 12);
}

std::vector<SynthDocument> generate_synthetic(const SynthOptions& options) {
    if (options.n_pairs == 0) throw ParameterError("n_pairs must be at least 1");
    if (options.min_sentences == 0 || options.max_sentences < options.min_sentences) {
        throw ParameterError("sentence range must satisfy 1 <= min <= max");
    }
    if (!(0.0 <= options.simple_max && options.simple_max <= options.complex_min && options.complex_min <= 1.0)) {
        throw ParameterError("difficulty bands must satisfy 0 <= simple_max <= complex_min <= 1");
    }
    std::vector<SynthDocument> out;
    out.reserve(2 * options.n_pairs);
    Rng rng(options.seed);
    const int width = std::max<int>(4, static_cast<int>(std::to_string(options.n_pairs).size()));
    for (std::size_t p = 0; p < options.n_pairs; ++p) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "p%0*zu", width, p + 1);
        const std::string stem = buf;
        for (Label label : {Label::simple, Label::complex}) {
            SynthDocument sd;
            sd.stem = stem;
            sd.label = label;
            sd.difficulty = label == Label::simple ? rng.uniform(0.0, options.simple_max)
                                                   : rng.uniform(options.complex_min, 1.0);
            const std::uint64_t doc_seed = Rng::derive(options.seed, 2 * p + (label == Label::simple ? 0 : 1));
            sd.doc = Generator(sd.difficulty, doc_seed)
                         .document(std::string(to_string(label)) + "-" + stem, options.min_sentences,
                                   options.max_sentences);
            sd.doc.source_label = label;
            out.push_back(std::move(sd));
        }
    }
    return out;
}

Lexicons synthetic_lexicons() {
    Lexicons lex;
    GradedLexicon graded(GradedLexicon::kDefaultLevels, "synthetic");
    put_words(graded, kEasyNouns);
    put_words(graded, kRareNouns);
    put_words(graded, kEasyVerbs);
    put_words(graded, kRareVerbs);
    put_words(graded, kEasyAdjs);
    put_words(graded, kRareAdjs);
    put_words(graded, kEasyAdvs);
    put_words(graded, kRareAdvs);
    put_words(graded, kFunctionWords);
    lex.graded.push_back(std::move(graded));
    for (const auto& c : kConnectives) {
        ConnectiveEntry e;
        e.category = std::string_view(c.category) == "conjunction" ? ConnectiveCategory::conjunction
                                                                   : ConnectiveCategory::adverbial;
        e.complexity = std::string_view(c.complexity) == "complex" ? ConnectiveComplexity::complex
                                                                   : ConnectiveComplexity::simple;
        lex.connectives.add(c.text, e);
    }
    return lex;
}

void write_synthetic_lexicons(const fs::path& dir) {
    fs::create_directories(dir);
    std::ofstream graded(dir / "graded.tsv", std::ios::binary);
    graded << "lemma\tlevel\n";
    auto dump = [&](const auto& list) {
        for (const Word& w : list) graded << w.lemma << '\t' << w.level << '\n';
    };
    dump(kEasyNouns);
    dump(kRareNouns);
    dump(kEasyVerbs);
    dump(kRareVerbs);
    dump(kEasyAdjs);
    dump(kRareAdjs);
    dump(kEasyAdvs);
    dump(kRareAdvs);
    dump(kFunctionWords);
    std::ofstream conn(dir / "connectives.tsv", std::ios::binary);
    conn << "connective\tcategory\tcomplexity\n";
    for (const auto& c : kConnectives) conn << c.text << '\t' << c.category << '\t' << c.complexity << '\n';
    if (!graded || !conn) throw NotFoundError("cannot write lexicons under " + dir.string());
}

double planted_simplicity(double difficulty) { return 100.0 * (1.0 - difficulty); }

void write_synthetic_corpus(const fs::path& dir, const SynthOptions& options) {
    const auto docs = generate_synthetic(options);
    const fs::path simple_dir = dir / "synth" / "simple";
    const fs::path complex_dir = dir / "synth" / "complex";
    fs::create_directories(simple_dir);
    fs::create_directories(complex_dir);
    write_synthetic_lexicons(dir / "lexicons");

    std::ofstream planted(dir / "planted.tsv", std::ios::binary);
    planted << "doc_id\tlabel\tdifficulty\tsimplicity\n";
    for (const auto& sd : docs) {
        const fs::path base = (sd.label == Label::simple ? simple_dir : complex_dir) / sd.stem;
        {
            std::ofstream out(fs::path(base).replace_extension(".conllu"), std::ios::binary);
            write_conllu(out, {sd.doc});
            if (!out) throw NotFoundError("cannot write " + base.string() + ".conllu");
        }
        std::ofstream trees(fs::path(base).replace_extension(".trees"), std::ios::binary);
        for (const Sentence& s : sd.doc.sentences) trees << s.sent_id << '\t' << s.const_tree->to_string() << '\n';
        planted << to_string(sd.label) << '/' << sd.stem << '\t' << (sd.label == Label::simple ? 1 : 0) << '\t'
                << text::format_double(sd.difficulty) << '\t' << text::format_double(planted_simplicity(sd.difficulty))
                << '\n';
    }
    if (!planted) throw NotFoundError("cannot write " + (dir / "planted.tsv").string());
}

}  // namespace lisible
