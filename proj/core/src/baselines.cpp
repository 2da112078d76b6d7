#include "lisible/baselines.hpp"

#include "lisible/error.hpp"

#include <cmath>

namespace lisible {

ReadabilityCounts compute_counts(const Document& doc) {
    ReadabilityCounts c;
    for (const Sentence& s : doc.sentences) {
        bool any = false;
        for (const Token& t : s.tokens) {
            if (!is_word(t)) continue;
            any = true;
            ++c.words;
            const auto n = static_cast<std::size_t>(count_syllables_fr(t.form));
            c.syllables += n;
            if (n >= 3) {
                ++c.polysyllables;
                if (t.upos != "PROPN") ++c.complex_words;
            }
        }
        if (any) ++c.sentences;
    }
    if (c.words == 0 || c.sentences == 0) throw DegenerateError("degenerate document");
    return c;
}

double fkgl(const ReadabilityCounts& c) {
    const auto w = static_cast<double>(c.words);
    return 0.39 * (w / static_cast<double>(c.sentences)) + 11.8 * (static_cast<double>(c.syllables) / w) - 15.59;
}

double smog(const ReadabilityCounts& c) {
    return 1.0430 * std::sqrt(static_cast<double>(c.polysyllables) * 30.0 / static_cast<double>(c.sentences)) +
           3.1291;
}

double gunning_fog(const ReadabilityCounts& c) {
    const auto w = static_cast<double>(c.words);
    return 0.4 * (w / static_cast<double>(c.sentences) + 100.0 * static_cast<double>(c.complex_words) / w);
}

BaselineScores baseline_scores(const Document& doc) {
    const auto c = compute_counts(doc);
    return {fkgl(c), smog(c), gunning_fog(c)};
}

}  // namespace lisible
