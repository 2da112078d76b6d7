#include "lisible/ingest.hpp"

#include "lisible/error.hpp"
#include "lisible/text.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace lisible {

std::string_view to_string(Label label) {
    return label == Label::simple ? "simple" : "complex";
}

Label parse_label(std::string_view s) {
    if (s == "simple" || s == "1") return Label::simple;
    if (s == "complex" || s == "0") return Label::complex;
    throw FormatError("unknown label '" + std::string(s) + "'");
}

std::string_view Token::feat(std::string_view key) const {
    auto it = morph.find(std::string(key));
    return it == morph.end() ? std::string_view{} : std::string_view(it->second);
}

std::string_view Token::base_deprel() const {
    std::string_view d = deprel;
    return d.substr(0, d.find(':'));
}

bool is_word(const Token& token) {
    return token.upos != "PUNCT" && !text::is_punctuation_only(token.form);
}

std::size_t Document::token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.tokens.size();
    return n;
}

std::size_t Document::word_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) {
        n += static_cast<std::size_t>(std::count_if(s.tokens.begin(), s.tokens.end(), is_word));
    }
    return n;
}

// ---------------------------------------------------------------------------
// CoNLL-U

namespace {

constexpr std::array<std::string_view, 17> kUposTags = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

bool valid_upos(std::string_view tag) {
    return std::find(kUposTags.begin(), kUposTags.end(), tag) != kUposTags.end();
}

std::optional<std::size_t> parse_index(std::string_view s) {
    std::size_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

std::string comment_value(std::string_view body, std::string_view key) {
    // "newdoc id = x" / "sent_id = x" / "sent_id x"
    body.remove_prefix(key.size());
    body = text::trim(body);
    if (body.starts_with("id")) {
        std::string_view rest = text::trim(body.substr(2));
        if (rest.starts_with("=")) body = rest;
    }
    if (body.starts_with("=")) body.remove_prefix(1);
    return std::string(text::trim(body));
}

struct PendingToken {
    Token token;
    std::string head;
    std::size_t line;
};

class ConlluReader {
public:
    explicit ConlluReader(std::string_view default_id) : default_id_(default_id) {
        current_.id = default_id_;
    }

    void feed(std::string_view line, std::size_t line_no) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (text::trim(line).empty()) {
            finish_sentence();
            return;
        }
        if (line.front() == '#') {
            comment(text::trim(line.substr(1)));
            return;
        }
        token_line(line, line_no);
    }

    std::vector<Document> finish() {
        finish_sentence();
        flush_document();
        return std::move(docs_);
    }

private:
    void comment(std::string_view body) {
        if (body.starts_with("newdoc")) {
            finish_sentence();
            flush_document();
            std::string id = comment_value(body, "newdoc");
            ++newdoc_count_;
            current_ = Document{};
            current_.id = id.empty() ? default_id_ + "-" + std::to_string(newdoc_count_) : id;
            pending_newpar_ = false;
        } else if (body.starts_with("newpar")) {
            pending_newpar_ = true;
        } else if (body.starts_with("sent_id")) {
            sent_id_ = comment_value(body, "sent_id");
        }
    }

    void token_line(std::string_view line, std::size_t line_no) {
        const auto cols = text::split(line, '\t');
        if (cols.size() != 10) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 10 tab-separated columns, found " +
                                 std::to_string(cols.size()),
                             line_no);
        }
        const std::string_view id = cols[0];
        if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) {
            return;  // multiword range or empty node
        }
        const auto index = parse_index(id);
        if (!index || *index != pending_.size() + 1) {
            throw ParseError("line " + std::to_string(line_no) + ": token id '" + std::string(id) +
                                 "' is not the next integer id",
                             line_no);
        }
        PendingToken p;
        p.line = line_no;
        Token& t = p.token;
        t.form = std::string(cols[1]);
        t.lemma = std::string(cols[2]);
        t.upos = cols[3] == "_" ? "X" : std::string(cols[3]);
        if (!valid_upos(t.upos)) {
            throw ParseError("line " + std::to_string(line_no) + ": unknown UPOS tag '" + t.upos + "'", line_no);
        }
        t.xpos = std::string(cols[4]);
        if (cols[5] != "_") {
            for (std::string_view kv : text::split(cols[5], '|')) {
                const auto eq = kv.find('=');
                if (eq == std::string_view::npos || eq == 0) {
                    throw ParseError("line " + std::to_string(line_no) + ": malformed feature '" + std::string(kv) + "'",
                                     line_no);
                }
                t.morph[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
            }
        }
        p.head = std::string(cols[6]);
        t.deprel = std::string(cols[7]);
        t.deps = std::string(cols[8]);
        t.misc = std::string(cols[9]);
        pending_.push_back(std::move(p));
    }

    void finish_sentence() {
        if (pending_.empty()) return;
        Sentence s;
        s.sent_id = std::move(sent_id_);
        sent_id_.clear();
        const std::size_t n = pending_.size();
        const bool all_blank = std::all_of(pending_.begin(), pending_.end(),
                                           [](const PendingToken& p) { return p.head == "_"; });
        std::size_t roots = 0;
        for (std::size_t i = 0; i < n; ++i) {
            PendingToken& p = pending_[i];
            if (!all_blank) {
                const auto h = parse_index(p.head);
                if (!h) {
                    throw StructureError("line " + std::to_string(p.line) + ": HEAD '" + p.head +
                                         "' is not a token id");
                }
                if (*h > n) {
                    throw StructureError("line " + std::to_string(p.line) + ": HEAD " + p.head +
                                         " references a nonexistent token id");
                }
                if (*h == i + 1) {
                    throw StructureError("line " + std::to_string(p.line) + ": token is its own head");
                }
                if (*h == 0) {
                    ++roots;
                } else {
                    p.token.head = *h - 1;
                }
            }
            s.tokens.push_back(std::move(p.token));
        }
        const std::size_t first_line = pending_.front().line;
        pending_.clear();
        if (!all_blank) {
            if (roots != 1) {
                throw StructureError("sentence starting at line " + std::to_string(first_line) + " has " +
                                     std::to_string(roots) + " roots");
            }
            // Walking up from every token must reach the root within n steps.
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t cur = i;
                std::size_t steps = 0;
                while (s.tokens[cur].head) {
                    cur = *s.tokens[cur].head;
                    if (++steps > n) {
                        throw StructureError("sentence starting at line " + std::to_string(first_line) +
                                             " contains a head cycle");
                    }
                }
            }
            s.has_heads = true;
        }
        if (pending_newpar_ && !current_.sentences.empty()) {
            ++paragraph_;
        }
        pending_newpar_ = false;
        s.paragraph_id = current_.sentences.empty() ? 0 : paragraph_;
        if (current_.sentences.empty()) paragraph_ = 0;
        current_.sentences.push_back(std::move(s));
    }

    void flush_document() {
        if (!current_.sentences.empty()) {
            docs_.push_back(std::move(current_));
        }
        current_ = Document{};
        current_.id = default_id_;
        paragraph_ = 0;
    }

    std::string default_id_;
    std::vector<Document> docs_;
    Document current_;
    std::vector<PendingToken> pending_;
    std::string sent_id_;
    std::size_t paragraph_ = 0;
    std::size_t newdoc_count_ = 0;
    bool pending_newpar_ = false;
};

}  // namespace

std::vector<Document> parse_conllu(std::istream& in, std::string_view default_id) {
    ConlluReader reader(default_id);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        reader.feed(line, ++line_no);
    }
    return reader.finish();
}

std::vector<Document> parse_conllu(std::string_view text, std::string_view default_id) {
    std::istringstream in{std::string(text)};
    return parse_conllu(in, default_id);
}

std::vector<Document> read_conllu_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open " + path.string());
    return parse_conllu(in, path.stem().string());
}

void write_conllu(std::ostream& out, const std::vector<Document>& docs) {
    for (const Document& doc : docs) {
        out << "# newdoc id = " << doc.id << '\n';
        std::optional<std::size_t> paragraph;
        for (const Sentence& s : doc.sentences) {
            if (paragraph != s.paragraph_id) {
                out << "# newpar\n";
                paragraph = s.paragraph_id;
            }
            if (!s.sent_id.empty()) out << "# sent_id = " << s.sent_id << '\n';
            for (std::size_t i = 0; i < s.tokens.size(); ++i) {
                const Token& t = s.tokens[i];
                out << (i + 1) << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << '\t' << t.xpos << '\t';
                if (t.morph.empty()) {
                    out << '_';
                } else {
                    bool first = true;
                    for (const auto& [k, v] : t.morph) {
                        out << (first ? "" : "|") << k << '=' << v;
                        first = false;
                    }
                }
                out << '\t';
                if (!s.has_heads) {
                    out << '_';
                } else {
                    out << (t.head ? *t.head + 1 : 0);
                }
                out << '\t' << t.deprel << '\t' << t.deps << '\t' << t.misc << '\n';
            }
            out << '\n';
        }
    }
}

std::string to_conllu(const Document& doc) {
    std::ostringstream out;
    write_conllu(out, {doc});
    return out.str();
}

// ---------------------------------------------------------------------------
// Bracketed trees

std::size_t ConstituencyNode::height() const {
    std::size_t h = 0;
    for (const auto& c : children) h = std::max(h, c.height() + 1);
    return h;
}

std::vector<std::string> ConstituencyNode::leaves() const {
    std::vector<std::string> out;
    std::vector<const ConstituencyNode*> stack{this};
    while (!stack.empty()) {
        const ConstituencyNode* n = stack.back();
        stack.pop_back();
        if (n->is_leaf()) {
            out.push_back(n->leaf_form.value_or(""));
        } else {
            for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
        }
    }
    return out;
}

std::string ConstituencyNode::to_string() const {
    std::string out = "(" + label;
    if (is_leaf()) {
        const std::string form = leaf_form.value_or("");
        // Parentheses inside a tree use the Penn escapes.
        out += " " + (form == "(" ? std::string("-LRB-") : form == ")" ? std::string("-RRB-") : form);
    } else {
        for (const auto& c : children) out += " " + c.to_string();
    }
    return out + ")";
}

namespace {

class TreeParser {
public:
    explicit TreeParser(std::string_view in) : in_(in) {}

    ConstituencyNode parse() {
        skip_ws();
        if (pos_ == in_.size()) throw ParseError("empty tree input", 0, 0);
        ConstituencyNode root = node();
        skip_ws();
        if (pos_ != in_.size()) {
            throw ParseError("unbalanced parentheses: unexpected '" + std::string(1, in_[pos_]) + "' at offset " +
                                 std::to_string(pos_),
                             0, pos_);
        }
        // PTB-style unlabeled wrapper "( (S ...))"
        if (root.label.empty() && root.children.size() == 1 && !root.children.front().is_leaf()) {
            ConstituencyNode inner = std::move(root.children.front());
            return inner;
        }
        return root;
    }

private:
    void skip_ws() {
        while (pos_ < in_.size() && (in_[pos_] == ' ' || in_[pos_] == '\t' || in_[pos_] == '\n' || in_[pos_] == '\r'))
            ++pos_;
    }

    std::string atom() {
        const std::size_t start = pos_;
        while (pos_ < in_.size() && in_[pos_] != '(' && in_[pos_] != ')' && in_[pos_] != ' ' && in_[pos_] != '\t' &&
               in_[pos_] != '\n' && in_[pos_] != '\r')
            ++pos_;
        return std::string(in_.substr(start, pos_ - start));
    }

    ConstituencyNode node() {
        if (pos_ >= in_.size() || in_[pos_] != '(') {
            throw ParseError("expected '(' at offset " + std::to_string(pos_), 0, pos_);
        }
        const std::size_t open_at = pos_;
        ++pos_;
        ConstituencyNode n;
        skip_ws();
        n.label = atom();
        std::vector<ConstituencyNode> children;
        std::vector<std::string> terminals;
        while (true) {
            skip_ws();
            if (pos_ >= in_.size()) {
                throw ParseError("unbalanced parentheses: '(' at offset " + std::to_string(open_at) + " is never closed",
                                 0, in_.size());
            }
            if (in_[pos_] == ')') {
                ++pos_;
                break;
            }
            if (in_[pos_] == '(') {
                children.push_back(node());
            } else {
                ConstituencyNode leaf;
                leaf.leaf_form = atom();
                if (*leaf.leaf_form == "-LRB-") leaf.leaf_form = "(";
                if (*leaf.leaf_form == "-RRB-") leaf.leaf_form = ")";
                terminals.push_back(*leaf.leaf_form);
                children.push_back(std::move(leaf));
            }
        }
        if (children.empty()) {
            throw ParseError("empty constituent at offset " + std::to_string(open_at), 0, open_at);
        }
        if (children.size() == 1 && terminals.size() == 1) {
            n.leaf_form = std::move(terminals.front());
        } else {
            n.children = std::move(children);
        }
        return n;
    }

    std::string_view in_;
    std::size_t pos_ = 0;
};

std::string_view normalize_leaf(std::string_view leaf) {
    if (leaf == "-LRB-") return "(";
    if (leaf == "-RRB-") return ")";
    if (leaf == "-LSB-") return "[";
    if (leaf == "-RSB-") return "]";
    return leaf;
}

}  // namespace

ConstituencyNode parse_bracketed_tree(std::string_view input) {
    return TreeParser(input).parse();
}

void attach_trees(std::span<Document> docs, std::istream& sidecar) {
    std::unordered_map<std::string, Sentence*> by_id;
    for (Document& d : docs) {
        for (Sentence& s : d.sentences) {
            if (!s.sent_id.empty()) by_id[s.sent_id] = &s;
        }
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(sidecar, line)) {
        ++line_no;
        std::string_view view = text::trim(line);
        if (view.empty() || view.front() == '#') continue;
        const auto tab = view.find('\t');
        if (tab == std::string_view::npos) {
            throw ParseError("tree sidecar line " + std::to_string(line_no) + ": expected 'sent_id<TAB>tree'", line_no);
        }
        const std::string sent_id(text::trim(view.substr(0, tab)));
        auto it = by_id.find(sent_id);
        if (it == by_id.end()) {
            throw StructureError("tree sidecar line " + std::to_string(line_no) + ": unknown sent_id '" + sent_id + "'");
        }
        ConstituencyNode tree;
        try {
            tree = parse_bracketed_tree(view.substr(tab + 1));
        } catch (const ParseError& e) {
            throw ParseError("tree sidecar line " + std::to_string(line_no) + ": " + e.what(), line_no, e.offset());
        }
        const auto leaves = tree.leaves();
        const auto& tokens = it->second->tokens;
        bool match = leaves.size() == tokens.size();
        for (std::size_t i = 0; match && i < leaves.size(); ++i) {
            match = normalize_leaf(leaves[i]) == tokens[i].form;
        }
        if (!match) {
            throw StructureError("tree for sent_id '" + sent_id + "' does not match the sentence tokens");
        }
        it->second->const_tree = std::move(tree);
    }
}

void attach_trees_file(std::span<Document> docs, const std::filesystem::path& sidecar) {
    std::ifstream in(sidecar);
    if (!in) throw NotFoundError("cannot open " + sidecar.string());
    attach_trees(docs, in);
}

std::vector<Document> load_parsed(const std::filesystem::path& path) {
    auto docs = read_conllu_file(path);
    auto sidecar = path;
    sidecar.replace_extension(".trees");
    if (std::filesystem::exists(sidecar)) {
        attach_trees_file(docs, sidecar);
    }
    return docs;
}

// ---------------------------------------------------------------------------
// Plain text

namespace {

bool is_space(char32_t c) { return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == 0xA0 || c == 0x202F; }
bool is_terminal(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == 0x2026; }
bool is_closer(char32_t c) { return c == U'"' || c == 0xBB || c == U')' || c == U']' || c == 0x2019 || c == 0x201D; }
bool is_opener(char32_t c) { return c == U'"' || c == 0xAB || c == U'(' || c == U'[' || c == 0x2018 || c == 0x201C || c == 0x2014; }
bool is_apostrophe(char32_t c) { return c == U'\'' || c == 0x2019; }

bool is_abbreviation_stem(std::u32string_view w) {
    static const std::array<std::u32string_view, 22> kStems = {
        U"M", U"MM", U"Mme", U"Mmes", U"Mlle", U"Mlles", U"Dr", U"Pr", U"Me", U"St", U"Ste",
        U"etc", U"cf", U"ex", U"p", U"av", U"apr", U"env", U"vol", U"chap", U"fig", U"art"};
    if (w.size() == 1 && text::is_upper(w.front())) return true;
    return std::find(kStems.begin(), kStems.end(), w) != kStems.end();
}

/// "S.N.C.F." style dotted initials.
bool is_dotted_initials(std::u32string_view w) {
    if (w.size() < 4 || w.back() != U'.') return false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const bool want_letter = i % 2 == 0;
        if (want_letter ? !text::is_letter(w[i]) : w[i] != U'.') return false;
    }
    return true;
}

std::vector<std::u32string> split_sentences(std::u32string_view para) {
    std::vector<std::u32string> out;
    std::size_t start = 0;
    std::size_t i = 0;
    const std::size_t n = para.size();
    while (i < n) {
        if (!is_terminal(para[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && (is_terminal(para[j]) || is_closer(para[j]))) ++j;
        bool boundary = false;
        std::size_t next = j;
        if (j >= n) {
            boundary = true;
        } else if (is_space(para[j])) {
            std::size_t k = j;
            while (k < n && is_space(para[k])) ++k;
            next = k;
            while (k < n && is_opener(para[k])) ++k;
            if (k < n && (text::is_upper(para[k]) || text::is_digit(para[k]))) {
                boundary = true;
            }
        }
        if (boundary && para[i] == U'.' && j == i + 1) {
            std::size_t b = i;
            while (b > start && (text::is_letter(para[b - 1]) || para[b - 1] == U'.')) --b;
            std::u32string_view word = para.substr(b, i - b);
            const bool dotted = is_dotted_initials(para.substr(b, i - b + 1));
            if (is_abbreviation_stem(word) || dotted) boundary = false;
        }
        if (boundary) {
            out.emplace_back(para.substr(start, j - start));
            start = next;
        }
        i = j;
    }
    if (start < n) out.emplace_back(para.substr(start));
    return out;
}

void push_piece(std::vector<std::string>& out, std::u32string_view piece) {
    if (piece.empty()) return;
    std::string s = text::encode_utf8(piece);
    if (!text::is_punctuation_only(s)) out.push_back(std::move(s));
}

std::vector<std::string> tokenize_sentence(std::u32string_view sent) {
    static const std::array<std::u32string_view, 3> kApostropheWords = {U"aujourd'hui", U"presqu'île", U"prud'homme"};
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < sent.size()) {
        while (i < sent.size() && is_space(sent[i])) ++i;
        std::size_t j = i;
        while (j < sent.size() && !is_space(sent[j])) ++j;
        std::u32string_view chunk = sent.substr(i, j - i);
        i = j;
        while (!chunk.empty() && !text::is_letter(chunk.front()) && !text::is_digit(chunk.front())) {
            chunk.remove_prefix(1);
        }
        if (chunk.empty()) continue;
        bool keep_period = false;
        if (chunk.back() == U'.') {
            std::u32string_view stem = chunk.substr(0, chunk.size() - 1);
            keep_period = is_abbreviation_stem(stem) || is_dotted_initials(chunk);
        }
        if (!keep_period) {
            while (!chunk.empty() && !text::is_letter(chunk.back()) && !text::is_digit(chunk.back())) {
                chunk.remove_suffix(1);
            }
        }
        std::u32string lowered(chunk);
        for (char32_t& c : lowered) c = text::to_lower(c);
        for (char32_t& c : lowered) if (c == 0x2019) c = U'\'';
        if (std::find(kApostropheWords.begin(), kApostropheWords.end(), lowered) != kApostropheWords.end()) {
            push_piece(out, chunk);
            continue;
        }
        std::size_t piece_start = 0;
        for (std::size_t k = 0; k + 1 < chunk.size(); ++k) {
            if (is_apostrophe(chunk[k]) && text::is_letter(chunk[k + 1])) {
                push_piece(out, chunk.substr(piece_start, k + 1 - piece_start));
                piece_start = k + 1;
            }
        }
        push_piece(out, chunk.substr(piece_start));
    }
    return out;
}

}  // namespace

Document segment_plain_text(std::string_view input, std::string_view id) {
    Document doc;
    doc.id = std::string(id);
    std::vector<std::string> paragraphs;
    std::string current;
    std::istringstream in{std::string(input)};
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) {
            if (!current.empty()) paragraphs.push_back(std::move(current));
            current.clear();
        } else {
            if (!current.empty()) current += ' ';
            current += text::trim(line);
        }
    }
    if (!current.empty()) paragraphs.push_back(std::move(current));

    std::size_t paragraph = 0;
    std::size_t sent_no = 0;
    for (const std::string& p : paragraphs) {
        bool any = false;
        for (const std::u32string& sent : split_sentences(text::decode_utf8(p))) {
            auto forms = tokenize_sentence(sent);
            if (forms.empty()) continue;
            Sentence s;
            s.paragraph_id = paragraph;
            s.sent_id = "s" + std::to_string(++sent_no);
            for (std::string& f : forms) {
                Token t;
                t.lemma = text::lowercase(f);
                t.form = std::move(f);
                s.tokens.push_back(std::move(t));
            }
            doc.sentences.push_back(std::move(s));
            any = true;
        }
        if (any) ++paragraph;
    }
    if (doc.sentences.empty()) throw DegenerateError("empty document");
    return doc;
}

// ---------------------------------------------------------------------------
// Syllables

namespace {

bool is_vowel(char32_t c) {
    switch (c) {
        case U'a': case U'e': case U'i': case U'o': case U'u': case U'y':
        case U'é': case U'è': case U'ê': case U'ë': case U'à': case U'â':
        case U'î': case U'ï': case U'ô': case U'û': case U'ù': case U'ü':
            return true;
        default:
            return false;
    }
}

bool is_consonant(char32_t c) { return text::is_letter(c) && !is_vowel(c); }

bool ends_with(std::u32string_view w, std::u32string_view suffix) {
    return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

}  // namespace

int count_syllables_fr(std::string_view word) {
    std::u32string w;
    for (char32_t c : text::decode_utf8(word)) {
        if (text::is_letter(c) || text::is_digit(c)) w.push_back(text::to_lower(c));
    }
    if (w.empty()) throw ParameterError("cannot count syllables of '" + std::string(word) + "': no letters");

    int groups = 0;
    bool in_group = false;
    for (char32_t c : w) {
        const bool v = is_vowel(c);
        if (v && !in_group) ++groups;
        in_group = v;
    }
    bool schwa = false;
    for (std::u32string_view suffix : {std::u32string_view(U"e"), std::u32string_view(U"es"), std::u32string_view(U"ent")}) {
        if (ends_with(w, suffix) && w.size() > suffix.size() && is_consonant(w[w.size() - suffix.size() - 1])) {
            schwa = true;
        }
    }
    if (schwa && groups >= 2) --groups;
    return std::max(groups, 1);
}

}  // namespace lisible
