#include "lisible/lexicons.hpp"

#include "lisible/error.hpp"
#include "lisible/text.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

namespace lisible {

namespace {

std::string row_error(std::size_t line, const std::string& msg) {
    return "line " + std::to_string(line) + ": " + msg;
}

std::string normalize_phrase(std::string_view s) {
    std::string out;
    for (std::string_view w : text::split(text::trim(s), ' ')) {
        w = text::trim(w);
        if (w.empty()) continue;
        if (!out.empty()) out += ' ';
        out += text::lowercase(w);
    }
    return out;
}

bool read_header(std::istream& in, std::string_view expected) {
    std::string line;
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    return line == expected;
}

}  // namespace

GradedLexicon::GradedLexicon(int n_levels, std::string source_name)
    : n_levels_(n_levels), source_name_(std::move(source_name)) {
    if (n_levels < 1) throw ParameterError("graded lexicon needs at least one level");
}

void GradedLexicon::add(std::string_view lemma, int level) {
    std::string key = text::lowercase(text::trim(lemma));
    if (key.empty()) throw ValidationError("empty lemma");
    if (level < 1 || level > n_levels_) {
        throw ValidationError("level " + std::to_string(level) + " outside [1, " + std::to_string(n_levels_) + "]");
    }
    auto [it, inserted] = entries_.try_emplace(std::move(key), level);
    if (!inserted) it->second = std::min(it->second, level);
}

std::optional<int> GradedLexicon::find(std::string_view lemma) const {
    auto it = entries_.find(text::lowercase(lemma));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

int GradedLexicon::level(std::string_view lemma) const {
    return find(lemma).value_or(oov_level());
}

GradedLexicon load_graded_lexicon(std::istream& in, int n_levels, std::string source_name) {
    if (!read_header(in, "lemma\tlevel")) {
        throw FormatError("graded lexicon: missing header 'lemma<TAB>level'");
    }
    GradedLexicon lex(n_levels, std::move(source_name));
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        const auto cols = text::split(line, '\t');
        if (cols.size() != 2) {
            throw ParseError(row_error(line_no, "expected 2 columns"), line_no);
        }
        int level = 0;
        const std::string_view v = text::trim(cols[1]);
        auto res = std::from_chars(v.data(), v.data() + v.size(), level);
        if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || v.empty()) {
            throw ParseError(row_error(line_no, "level '" + std::string(cols[1]) + "' is not an integer"), line_no);
        }
        try {
            lex.add(cols[0], level);
        } catch (const ValidationError& e) {
            throw ParseError(row_error(line_no, e.what()), line_no);
        }
    }
    return lex;
}

GradedLexicon load_graded_lexicon(const std::filesystem::path& path, int n_levels) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open " + path.string());
    try {
        return load_graded_lexicon(in, n_levels, path.stem().string());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::string_view to_string(ConnectiveCategory c) {
    switch (c) {
        case ConnectiveCategory::conjunction: return "conjunction";
        case ConnectiveCategory::adverbial: return "adverbial";
        case ConnectiveCategory::other: return "other";
    }
    return "other";
}

std::string_view to_string(ConnectiveComplexity c) {
    return c == ConnectiveComplexity::complex ? "complex" : "simple";
}

void ConnectivesLexicon::add(std::string_view connective, ConnectiveEntry entry) {
    std::string key = normalize_phrase(connective);
    if (key.empty()) throw ValidationError("empty connective");
    const std::size_t words = static_cast<std::size_t>(std::count(key.begin(), key.end(), ' ')) + 1;
    max_words_ = std::max(max_words_, words);
    entries_[std::move(key)] = entry;
}

std::optional<ConnectiveEntry> ConnectivesLexicon::find(std::string_view connective) const {
    auto it = entries_.find(normalize_phrase(connective));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::optional<ConnectiveMatch> ConnectivesLexicon::match_at(std::span<const std::string> forms, std::size_t pos) const {
    if (pos >= forms.size()) return std::nullopt;
    const std::size_t longest = std::min(max_words_, forms.size() - pos);
    // Each word may be matched as written or, when elided ("qu'"), with its
    // full vowel restored ("que").
    for (std::size_t len = longest; len >= 1; --len) {
        std::vector<std::string> variants{""};
        for (std::size_t k = 0; k < len; ++k) {
            std::string w = text::lowercase(forms[pos + k]);
            std::vector<std::string> options{w};
            std::string bare = w;
            if (bare.ends_with("\xE2\x80\x99")) {
                bare.resize(bare.size() - 3);
                options.push_back(bare + "'");
                options.push_back(bare + "e");
            } else if (bare.ends_with("'")) {
                bare.pop_back();
                options.push_back(bare + "e");
            }
            std::vector<std::string> next;
            for (const auto& v : variants) {
                for (const auto& o : options) next.push_back(v.empty() ? o : v + " " + o);
            }
            variants = std::move(next);
        }
        for (const auto& v : variants) {
            auto it = entries_.find(v);
            if (it != entries_.end()) {
                return ConnectiveMatch{pos, len, it->first, it->second};
            }
        }
    }
    return std::nullopt;
}

std::vector<ConnectiveMatch> ConnectivesLexicon::match_all(std::span<const std::string> forms) const {
    std::vector<ConnectiveMatch> out;
    std::size_t pos = 0;
    while (pos < forms.size()) {
        if (auto m = match_at(forms, pos)) {
            pos += m->length;
            out.push_back(std::move(*m));
        } else {
            ++pos;
        }
    }
    return out;
}

ConnectivesLexicon load_connectives(std::istream& in) {
    if (!read_header(in, "connective\tcategory\tcomplexity")) {
        throw FormatError("connectives lexicon: missing header 'connective<TAB>category<TAB>complexity'");
    }
    ConnectivesLexicon lex;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        const auto cols = text::split(line, '\t');
        if (cols.size() != 3) throw ParseError(row_error(line_no, "expected 3 columns"), line_no);
        ConnectiveEntry e;
        const std::string_view cat = text::trim(cols[1]);
        if (cat == "conjunction") e.category = ConnectiveCategory::conjunction;
        else if (cat == "adverbial") e.category = ConnectiveCategory::adverbial;
        else if (cat == "other") e.category = ConnectiveCategory::other;
        else throw ParseError(row_error(line_no, "unknown category '" + std::string(cat) + "'"), line_no);
        const std::string_view cx = text::trim(cols[2]);
        if (cx == "simple") e.complexity = ConnectiveComplexity::simple;
        else if (cx == "complex") e.complexity = ConnectiveComplexity::complex;
        else throw ParseError(row_error(line_no, "unknown complexity '" + std::string(cx) + "'"), line_no);
        try {
            lex.add(cols[0], e);
        } catch (const ValidationError& err) {
            throw ParseError(row_error(line_no, err.what()), line_no);
        }
    }
    return lex;
}

ConnectivesLexicon load_connectives(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open " + path.string());
    try {
        return load_connectives(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace lisible
