#pragma once

#include "lisible/ingest.hpp"

#include <cstddef>

namespace lisible {

struct ReadabilityCounts {
    std::size_t words = 0;
    std::size_t sentences = 0;
    std::size_t syllables = 0;
    /// Words with three or more syllables.
    std::size_t polysyllables = 0;
    /// Polysyllables that are not proper nouns.
    std::size_t complex_words = 0;

    bool operator==(const ReadabilityCounts&) const = default;
};

/// Sentences count only when they hold at least one word. Throws
/// DegenerateError when the document has no words.
ReadabilityCounts compute_counts(const Document& doc);

double fkgl(const ReadabilityCounts& c);
double smog(const ReadabilityCounts& c);
double gunning_fog(const ReadabilityCounts& c);

struct BaselineScores {
    double fkgl = 0.0;
    double smog = 0.0;
    double gunning_fog = 0.0;
};

BaselineScores baseline_scores(const Document& doc);

}  // namespace lisible
