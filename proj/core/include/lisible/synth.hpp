#pragma once

#include "lisible/indicators.hpp"
#include "lisible/ingest.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lisible {

/// Generator of aligned simple/complex document pairs with a planted
/// difficulty in [0, 1]. Phenomenon rates and rare-word use grow with the
/// difficulty; simple documents draw it from [0, 0.45], complex ones from
/// [0.55, 1].
struct SynthOptions {
    std::size_t n_pairs = 500;
    std::uint64_t seed = 1;
    std::size_t min_sentences = 8;
    std::size_t max_sentences = 12;
    double simple_max = 0.45;
    double complex_min = 0.55;
};

struct SynthDocument {
    std::string stem;
    Label label = Label::simple;
    double difficulty = 0.0;
    Document doc;
};

std::vector<SynthDocument> generate_synthetic(const SynthOptions& options);

/// A document of the given difficulty; sentences carry heads and trees.
Document synthesize_document(double difficulty, std::uint64_t seed, std::string id = "synth");

/// Graded and connectives lexicons matching the generator's vocabulary.
Lexicons synthetic_lexicons();
void write_synthetic_lexicons(const std::filesystem::path& dir);

/// Planted simplicity on the score scale: 100 * (1 - difficulty).
double planted_simplicity(double difficulty);

/// Writes <dir>/synth/{simple,complex}/<stem>.conllu with `.trees` sidecars,
/// <dir>/lexicons/{graded.tsv,connectives.tsv} and <dir>/planted.tsv
/// (doc_id, label, difficulty, simplicity).
void write_synthetic_corpus(const std::filesystem::path& dir, const SynthOptions& options);

}  // namespace lisible
