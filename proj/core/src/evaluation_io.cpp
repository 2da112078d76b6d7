#include "lisible/error.hpp"
#include "lisible/evaluation.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>

namespace lisible {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchema = 1;

Json parse_record(std::string_view line, std::size_t lineno, std::string_view expected_type) {
    auto j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ParseError("record is not a JSON object", lineno);
    if (!j.contains("v") || !j["v"].is_number_integer()) throw FormatError("record lacks schema version \"v\"");
    if (j["v"].get<int>() != kSchema) {
        throw VersionError("record schema version " + j["v"].dump() + " is not supported (expected " +
                           std::to_string(kSchema) + ")");
    }
    const auto type = j.value("type", std::string());
    if (!expected_type.empty() && type != expected_type) {
        throw FormatError("line " + std::to_string(lineno) + ": expected a \"" + std::string(expected_type) +
                          "\" record, found \"" + type + "\"");
    }
    return j;
}

template <typename T>
T field(const Json& j, const char* name, std::size_t lineno) {
    if (!j.contains(name)) throw ParseError(std::string("record lacks field \"") + name + "\"", lineno);
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ParseError(std::string("field \"") + name + "\" has the wrong type", lineno);
    }
}

BwsResponse bws_from(const Json& j, std::size_t lineno) {
    return {field<std::string>(j, "tuple_id", lineno), field<std::string>(j, "annotator", lineno),
            field<std::string>(j, "best", lineno), field<std::string>(j, "worst", lineno),
            j.contains("timestamp") ? field<std::string>(j, "timestamp", lineno) : std::string()};
}

RatingResponse rating_from(const Json& j, std::size_t lineno) {
    return {field<std::string>(j, "text_id", lineno), field<std::string>(j, "rater", lineno),
            field<double>(j, "rating", lineno),
            j.contains("timestamp") ? field<std::string>(j, "timestamp", lineno) : std::string()};
}

template <typename F>
void for_each_line(std::istream& in, F&& f) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        f(line, lineno);
    }
}

}  // namespace

void write_design_jsonl(std::ostream& out, const BwsDesign& design) {
    Json head{{"v", kSchema}, {"type", "design"}, {"texts", design.texts}, {"e", design.e},
              {"k", design.k}, {"a", design.a},    {"seed", design.seed}};
    out << head.dump() << '\n';
    for (const auto& t : design.tuples) {
        Json rec{{"v", kSchema}, {"type", "tuple"}, {"tuple_id", t.id}, {"texts", t.texts}, {"slots", t.slots}};
        out << rec.dump() << '\n';
    }
}

BwsDesign read_design_jsonl(std::istream& in) {
    BwsDesign d;
    bool header = false;
    for_each_line(in, [&](const std::string& line, std::size_t lineno) {
        const Json j = parse_record(line, lineno, "");
        const auto type = j.value("type", std::string());
        if (type == "design") {
            if (header) throw ParseError("second design header", lineno);
            header = true;
            d.texts = field<std::vector<std::string>>(j, "texts", lineno);
            d.e = field<std::size_t>(j, "e", lineno);
            d.k = field<std::size_t>(j, "k", lineno);
            d.a = field<std::size_t>(j, "a", lineno);
            d.seed = field<std::uint64_t>(j, "seed", lineno);
        } else if (type == "tuple") {
            if (!header) throw ParseError("tuple record before the design header", lineno);
            d.tuples.push_back({field<std::string>(j, "tuple_id", lineno),
                                field<std::vector<std::string>>(j, "texts", lineno),
                                field<std::size_t>(j, "slots", lineno)});
        } else {
            throw ParseError("unexpected record type \"" + type + "\" in a design file", lineno);
        }
    });
    if (!header) throw FormatError("design file has no design header");
    validate_design(d);
    return d;
}

std::string to_jsonl(const BwsResponse& r) {
    return Json{{"v", kSchema},        {"type", "bws"},       {"tuple_id", r.tuple_id}, {"annotator", r.annotator},
                {"best", r.best},      {"worst", r.worst},    {"timestamp", r.timestamp}}
        .dump();
}

std::string to_jsonl(const RatingResponse& r) {
    return Json{{"v", kSchema},          {"type", "rating"},    {"text_id", r.text_id},
                {"rater", r.rater},      {"rating", r.rating},  {"timestamp", r.timestamp}}
        .dump();
}

void write_responses_jsonl(std::ostream& out, const std::vector<BwsResponse>& responses) {
    for (const auto& r : responses) out << to_jsonl(r) << '\n';
}

void write_ratings_jsonl(std::ostream& out, const std::vector<RatingResponse>& ratings) {
    for (const auto& r : ratings) out << to_jsonl(r) << '\n';
}

BwsResponse parse_bws_record(std::string_view line) { return bws_from(parse_record(line, 1, "bws"), 1); }

RatingResponse parse_rating_record(std::string_view line) { return rating_from(parse_record(line, 1, "rating"), 1); }

std::vector<BwsResponse> read_responses_jsonl(std::istream& in) {
    std::vector<BwsResponse> out;
    for_each_line(in, [&](const std::string& line, std::size_t lineno) {
        out.push_back(bws_from(parse_record(line, lineno, "bws"), lineno));
    });
    return out;
}

std::vector<RatingResponse> read_ratings_jsonl(std::istream& in) {
    std::vector<RatingResponse> out;
    for_each_line(in, [&](const std::string& line, std::size_t lineno) {
        out.push_back(rating_from(parse_record(line, lineno, "rating"), lineno));
    });
    return out;
}

}  // namespace lisible
