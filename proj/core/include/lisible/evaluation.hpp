#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lisible {

struct BwsTuple {
    std::string id;
    std::vector<std::string> texts;
    /// Number of annotators that should judge this tuple.
    std::size_t slots = 0;

    bool operator==(const BwsTuple&) const = default;
};

struct BwsDesign {
    std::vector<std::string> texts;
    std::vector<BwsTuple> tuples;
    std::size_t e = 0;
    std::size_t k = 0;
    std::size_t a = 0;
    std::uint64_t seed = 0;

    const BwsTuple* find(std::string_view tuple_id) const;
    bool operator==(const BwsDesign&) const = default;
};

struct BwsResponse {
    std::string tuple_id;
    std::string annotator;
    std::string best;
    std::string worst;
    std::string timestamp;

    bool operator==(const BwsResponse&) const = default;
};

struct RatingResponse {
    std::string text_id;
    std::string rater;
    double rating = 0.0;
    std::string timestamp;

    bool operator==(const RatingResponse&) const = default;
};

/// Greedy construction (most remaining appearances first, then least pair
/// co-occurrence, then random) followed by swap repair. Tuple order and
/// member order are shuffled. Throws ParameterError when T*e is not a
/// multiple of k, k > T, or e, k, a are zero.
BwsDesign generate_bws_design(const std::vector<std::string>& text_ids, std::size_t e, std::size_t k, std::size_t a,
                              std::uint64_t seed);

/// Swaps members between tuples until no tuple repeats a text. Appearance
/// counts are unchanged by swaps.
void repair_design(BwsDesign& design, std::uint64_t seed);

/// Throws StructureError describing the first violated invariant.
void validate_design(const BwsDesign& design);

/// Throws ValidationError when the tuple is unknown or best/worst are not
/// two distinct members of it.
void validate_response(const BwsDesign& design, const BwsResponse& response);

/// score = best% - worst% per text, over the judgments that contained it.
std::map<std::string, double> bws_scores(const BwsDesign& design, const std::vector<BwsResponse>& responses);

/// Chooses, for one iteration, which responses go to the first half.
using HalfPartitioner = std::function<std::vector<bool>(std::size_t n_responses, std::size_t iteration)>;

struct ShrResult {
    double shr = 0.0;  ///< mean Spearman x 100
    std::size_t iterations_used = 0;
    std::size_t iterations_skipped = 0;
    std::vector<std::string> warnings;
};

/// Splits responses into random halves (odd extra to a random half), scores
/// each half, and averages the Spearman correlation over shared texts.
ShrResult split_half_reliability(const BwsDesign& design, const std::vector<BwsResponse>& responses,
                                 std::size_t iterations, std::uint64_t seed,
                                 const HalfPartitioner& partitioner = {});

/// Pearson correlation of average-tie ranks. Throws DegenerateError
/// "undefined correlation" for a constant input.
double spearman(const std::vector<double>& x, const std::vector<double>& y);
std::vector<double> average_ranks(const std::vector<double>& v);

/// ICC(2,1): two-way random effects, absolute agreement, single rater.
/// `ratings[i][j]` is rater j on target i.
double icc2(const std::vector<std::vector<double>>& ratings);

/// Targets x raters matrix from rating records, both sorted by id. Throws
/// ValidationError for missing or duplicated cells.
struct RatingMatrix {
    std::vector<std::string> targets;
    std::vector<std::string> raters;
    std::vector<std::vector<double>> values;
};
RatingMatrix rating_matrix(const std::vector<RatingResponse>& responses);

/// Mean rating per text.
std::map<std::string, double> mean_ratings(const std::vector<RatingResponse>& responses);

struct ReportRow {
    std::string scorer;
    double rho = 0.0;  ///< Spearman x 100
    std::size_t n = 0;
};

/// Spearman of each scorer against the human scores over the texts both cover.
std::vector<ReportRow> correlation_report(const std::vector<std::pair<std::string, std::map<std::string, double>>>& scorers,
                                          const std::map<std::string, double>& human);
void write_report_tsv(std::ostream& out, const std::vector<ReportRow>& rows);
void write_report_table(std::ostream& out, const std::vector<ReportRow>& rows);

/// Per annotator, the fraction of their judgments whose best and worst agree
/// with the consensus of all other annotators. Diagnostic only.
std::map<std::string, double> annotator_agreement(const BwsDesign& design, const std::vector<BwsResponse>& responses);

// JSONL persistence. Every record carries "v" (schema version) and "type".
void write_design_jsonl(std::ostream& out, const BwsDesign& design);
BwsDesign read_design_jsonl(std::istream& in);
std::string to_jsonl(const BwsResponse& r);
std::string to_jsonl(const RatingResponse& r);
void write_responses_jsonl(std::ostream& out, const std::vector<BwsResponse>& responses);
void write_ratings_jsonl(std::ostream& out, const std::vector<RatingResponse>& ratings);
BwsResponse parse_bws_record(std::string_view line);
RatingResponse parse_rating_record(std::string_view line);
/// Reads "bws" records, ignoring blank lines; other record types are errors.
std::vector<BwsResponse> read_responses_jsonl(std::istream& in);
std::vector<RatingResponse> read_ratings_jsonl(std::istream& in);

}  // namespace lisible
