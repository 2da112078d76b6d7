#include "lisible/annotation.hpp"

#include "lisible/digest.hpp"
#include "lisible/error.hpp"

#include <json.hpp>

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <ctime>
#include <ctime>
#include <fstream>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <unordered_map>

namespace lisible {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string_view to_string(CampaignKind kind) { return kind == CampaignKind::bws ? "bws" : "rating"; }

namespace {

void check_texts(const CampaignSpec& spec) {
    auto need = [&](const std::string& id) {
        if (!spec.texts.contains(id)) throw ValidationError("text '" + id + "' has no display text");
    };
    if (spec.kind == CampaignKind::bws) {
        validate_design(spec.design);
        for (const auto& id : spec.design.texts) need(id);
    } else {
        if (spec.rating_texts.empty()) throw ValidationError("rating campaign has no texts");
        if (spec.raters_per_text == 0) throw ValidationError("raters_per_text must be >= 1");
        std::set<std::string> seen;
        for (const auto& id : spec.rating_texts) {
            if (!seen.insert(id).second) throw ValidationError("text '" + id + "' listed twice");
            need(id);
        }
    }
}

std::string iso_timestamp(std::chrono::system_clock::time_point tp) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(tp.time_since_epoch()).count();
    const std::time_t secs = static_cast<std::time_t>(ms / 1000);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    std::string millis = std::to_string((ms % 1000 + 1000) % 1000);
    millis.insert(0, 3 - millis.size(), '0');
    return std::string(buf) + "." + millis + "Z";
}

void append_line(const fs::path& path, const std::string& line) {
    const std::string data = line + "\n";
    const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
    if (fd < 0) throw Error("cannot open " + path.string() + ": " + std::strerror(errno));
    // One write per record keeps each line whole under O_APPEND.
    const ssize_t n = ::write(fd, data.data(), data.size());
    const int saved = errno;
    ::fdatasync(fd);
    ::close(fd);
    if (n != static_cast<ssize_t>(data.size())) {
        throw Error("short write to " + path.string() + ": " + std::strerror(saved));
    }
}

}  // namespace

std::string campaign_spec_json(const CampaignSpec& spec) {
    check_texts(spec);
    Json j;
    j["kind"] = std::string(to_string(spec.kind));
    if (spec.kind == CampaignKind::bws) {
        Json tuples = Json::array();
        for (const auto& t : spec.design.tuples) {
            tuples.push_back({{"tuple_id", t.id}, {"texts", t.texts}, {"slots", t.slots}});
        }
        j["design"] = {{"texts", spec.design.texts}, {"e", spec.design.e},       {"k", spec.design.k},
                       {"a", spec.design.a},         {"seed", spec.design.seed}, {"tuples", tuples}};
    } else {
        j["rating"] = {{"text_ids", spec.rating_texts}, {"raters_per_text", spec.raters_per_text}};
    }
    Json texts = Json::object();
    for (const auto& [id, body] : spec.texts) texts[id] = body;
    j["texts"] = texts;
    return j.dump();
}

CampaignSpec campaign_spec_from_json(std::string_view json) {
    const auto j = Json::parse(json, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ValidationError("campaign is not a JSON object");
    CampaignSpec spec;
    try {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "bws") {
            spec.kind = CampaignKind::bws;
            const auto& d = j.at("design");
            spec.design.texts = d.at("texts").get<std::vector<std::string>>();
            spec.design.e = d.at("e").get<std::size_t>();
            spec.design.k = d.at("k").get<std::size_t>();
            spec.design.a = d.at("a").get<std::size_t>();
            spec.design.seed = d.value("seed", std::uint64_t{0});
            for (const auto& t : d.at("tuples")) {
                spec.design.tuples.push_back({t.at("tuple_id").get<std::string>(),
                                              t.at("texts").get<std::vector<std::string>>(),
                                              t.value("slots", spec.design.a)});
            }
        } else if (kind == "rating") {
            spec.kind = CampaignKind::rating;
            const auto& r = j.at("rating");
            spec.rating_texts = r.at("text_ids").get<std::vector<std::string>>();
            spec.raters_per_text = r.at("raters_per_text").get<std::size_t>();
        } else {
            throw ValidationError("unknown campaign kind '" + kind + "'");
        }
        spec.texts = j.at("texts").get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed campaign: ") + e.what());
    }
    check_texts(spec);
    return spec;
}

struct CampaignStore::Impl {
    struct Unit {
        std::string id;
        std::vector<std::string> members;
        std::size_t slots = 0;
        std::set<std::string> answered;
        std::map<std::string, std::chrono::system_clock::time_point> leases;
    };

    struct Record {
        std::string unit;
        std::string annotator;
        std::string timestamp;
        std::string line;
    };

    struct Campaign {
        std::string id;
        CampaignSpec spec;
        std::vector<Unit> units;
        std::unordered_map<std::string, std::size_t> index;
        std::vector<Record> records;
        fs::path responses;
    };

    fs::path dir;
    Clock clock;
    std::chrono::seconds timeout;
    mutable std::shared_mutex mu;
    std::map<std::string, std::unique_ptr<Campaign>> campaigns;

    std::chrono::system_clock::time_point now() const { return clock ? clock() : std::chrono::system_clock::now(); }

    std::unique_ptr<Campaign> make(const std::string& id, CampaignSpec spec) {
        auto c = std::make_unique<Campaign>();
        c->id = id;
        c->spec = std::move(spec);
        c->responses = dir / id / "responses.jsonl";
        if (c->spec.kind == CampaignKind::bws) {
            for (const auto& t : c->spec.design.tuples) c->units.push_back({t.id, t.texts, t.slots, {}, {}});
        } else {
            for (const auto& id_ : c->spec.rating_texts) c->units.push_back({id_, {id_}, c->spec.raters_per_text, {}, {}});
        }
        for (std::size_t i = 0; i < c->units.size(); ++i) c->index.emplace(c->units[i].id, i);
        return c;
    }

    Campaign& get(const std::string& id) const {
        auto it = campaigns.find(id);
        if (it == campaigns.end()) throw NotFoundError("unknown campaign '" + id + "'");
        return *it->second;
    }

    void expire(Unit& u, std::chrono::system_clock::time_point t) {
        std::erase_if(u.leases, [&](const auto& kv) { return kv.second <= t; });
    }

    static std::size_t open_for(const Unit& u, const std::string& annotator) {
        std::size_t held = u.answered.size();
        for (const auto& [who, _] : u.leases) {
            if (who != annotator) ++held;
        }
        return held >= u.slots ? 0 : u.slots - held;
    }

    void accept(Campaign& c, Unit& u, const std::string& annotator, const std::string& timestamp, const std::string& line,
                bool persist) {
        if (persist) append_line(c.responses, line);
        u.answered.insert(annotator);
        u.leases.erase(annotator);
        c.records.push_back({u.id, annotator, timestamp, line});
    }

    Unit& claim(Campaign& c, const std::string& unit_id, const std::string& annotator) {
        auto it = c.index.find(unit_id);
        if (it == c.index.end()) throw ValidationError("unknown task '" + unit_id + "'");
        Unit& u = c.units[it->second];
        expire(u, now());
        if (u.answered.contains(annotator)) {
            throw ConflictError("annotator '" + annotator + "' already answered " + unit_id);
        }
        if (!u.leases.contains(annotator) && open_for(u, annotator) == 0) {
            throw ConflictError("no open slot left on " + unit_id);
        }
        return u;
    }

    void load() {
        if (!fs::exists(dir)) return;
        for (const auto& entry : fs::directory_iterator(dir)) {
            const fs::path spec_path = entry.path() / "campaign.json";
            if (!entry.is_directory() || !fs::exists(spec_path)) continue;
            const std::string id = entry.path().filename().string();
            auto c = make(id, campaign_spec_from_json(read_file(spec_path)));
            if (fs::exists(c->responses)) {
                const std::string data = read_file(c->responses);
                std::size_t start = 0;
                while (start < data.size()) {
                    const auto eol = data.find('\n', start);
                    // A trailing fragment without newline is a torn write and never counted.
                    if (eol == std::string::npos) break;
                    const std::string line = data.substr(start, eol - start);
                    start = eol + 1;
                    if (line.empty()) continue;
                    if (c->spec.kind == CampaignKind::bws) {
                        const auto r = parse_bws_record(line);
                        auto it = c->index.find(r.tuple_id);
                        if (it == c->index.end()) throw CorruptionError("stored response for unknown tuple " + r.tuple_id);
                        accept(*c, c->units[it->second], r.annotator, r.timestamp, line, false);
                    } else {
                        const auto r = parse_rating_record(line);
                        auto it = c->index.find(r.text_id);
                        if (it == c->index.end()) throw CorruptionError("stored rating for unknown text " + r.text_id);
                        accept(*c, c->units[it->second], r.rater, r.timestamp, line, false);
                    }
                }
            }
            campaigns.emplace(id, std::move(c));
        }
    }
};

CampaignStore::CampaignStore(fs::path data_dir, Clock clock, std::chrono::seconds lease_timeout)
    : impl_(std::make_unique<Impl>()) {
    impl_->dir = std::move(data_dir);
    impl_->clock = std::move(clock);
    impl_->timeout = lease_timeout;
    fs::create_directories(impl_->dir);
    impl_->load();
}

CampaignStore::~CampaignStore() = default;

std::string CampaignStore::create(const CampaignSpec& spec) {
    const std::string canonical = campaign_spec_json(spec);
    const std::string id = sha256_hex(canonical).substr(0, 16);
    std::unique_lock lock(impl_->mu);
    if (impl_->campaigns.contains(id)) return id;
    const fs::path cdir = impl_->dir / id;
    fs::create_directories(cdir);
    const fs::path tmp = cdir / "campaign.json.tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        out << canonical << '\n';
        if (!out) throw Error("cannot write " + tmp.string());
    }
    fs::rename(tmp, cdir / "campaign.json");
    impl_->campaigns.emplace(id, impl_->make(id, campaign_spec_from_json(canonical)));
    return id;
}

std::optional<Task> CampaignStore::next_task(const std::string& campaign_id, const std::string& annotator) {
    if (annotator.empty()) throw ValidationError("annotator id is required");
    std::unique_lock lock(impl_->mu);
    auto& c = impl_->get(campaign_id);
    const auto t = impl_->now();
    Impl::Unit* chosen = nullptr;
    for (auto& u : c.units) {
        impl_->expire(u, t);
        if (!u.answered.contains(annotator) && u.leases.contains(annotator)) {
            chosen = &u;
            break;
        }
    }
    if (!chosen) {
        for (auto& u : c.units) {
            if (u.answered.contains(annotator)) continue;
            if (Impl::open_for(u, annotator) > 0) {
                chosen = &u;
                break;
            }
        }
    }
    if (!chosen) return std::nullopt;
    chosen->leases[annotator] = t + impl_->timeout;

    Task task;
    task.campaign_id = campaign_id;
    task.kind = c.spec.kind;
    task.task_id = chosen->id;
    for (const auto& m : chosen->members) task.items.push_back({m, c.spec.texts.at(m)});
    return task;
}

BwsResponse CampaignStore::submit(const std::string& campaign_id, BwsResponse r) {
    if (r.annotator.empty()) throw ValidationError("annotator id is required");
    std::unique_lock lock(impl_->mu);
    auto& c = impl_->get(campaign_id);
    if (c.spec.kind != CampaignKind::bws) throw ValidationError("campaign " + campaign_id + " takes ratings");
    validate_response(c.spec.design, r);
    auto& u = impl_->claim(c, r.tuple_id, r.annotator);
    r.timestamp = iso_timestamp(impl_->now());
    impl_->accept(c, u, r.annotator, r.timestamp, to_jsonl(r), true);
    return r;
}

RatingResponse CampaignStore::submit(const std::string& campaign_id, RatingResponse r) {
    if (r.rater.empty()) throw ValidationError("rater id is required");
    if (!std::isfinite(r.rating) || r.rating < 0.0 || r.rating > 100.0) {
        throw ValidationError("rating must lie in [0, 100]");
    }
    std::unique_lock lock(impl_->mu);
    auto& c = impl_->get(campaign_id);
    if (c.spec.kind != CampaignKind::rating) throw ValidationError("campaign " + campaign_id + " takes BWS responses");
    auto& u = impl_->claim(c, r.text_id, r.rater);
    r.timestamp = iso_timestamp(impl_->now());
    impl_->accept(c, u, r.rater, r.timestamp, to_jsonl(r), true);
    return r;
}

std::string CampaignStore::export_jsonl(const std::string& campaign_id) const {
    std::shared_lock lock(impl_->mu);
    auto records = impl_->get(campaign_id).records;
    lock.unlock();
    std::sort(records.begin(), records.end(), [](const Impl::Record& a, const Impl::Record& b) {
        return std::tie(a.unit, a.annotator, a.timestamp) < std::tie(b.unit, b.annotator, b.timestamp);
    });
    std::string out;
    for (const auto& r : records) out += r.line + "\n";
    return out;
}

Progress CampaignStore::progress(const std::string& campaign_id) const {
    std::shared_lock lock(impl_->mu);
    const auto& c = impl_->get(campaign_id);
    const auto t = impl_->now();
    Progress p;
    for (const auto& u : c.units) {
        p.total_slots += u.slots;
        p.completed += u.answered.size();
        for (const auto& [who, expiry] : u.leases) {
            if (expiry > t) ++p.leased;
        }
        for (const auto& who : u.answered) ++p.per_annotator[who];
    }
    return p;
}

CampaignSpec CampaignStore::spec(const std::string& campaign_id) const {
    std::shared_lock lock(impl_->mu);
    return impl_->get(campaign_id).spec;
}

std::vector<std::string> CampaignStore::campaign_ids() const {
    std::shared_lock lock(impl_->mu);
    std::vector<std::string> ids;
    for (const auto& [id, _] : impl_->campaigns) ids.push_back(id);
    return ids;
}

std::string task_json(const Task& task) {
    Json items = Json::array();
    for (const auto& it : task.items) items.push_back({{"id", it.id}, {"text", it.text}});
    return Json{{"campaign", task.campaign_id},
                {"kind", std::string(to_string(task.kind))},
                {"task_id", task.task_id},
                {"texts", items}}
        .dump();
}

std::string progress_json(const Progress& p) {
    Json per = Json::object();
    for (const auto& [who, n] : p.per_annotator) per[who] = n;
    return Json{{"total_slots", p.total_slots},
                {"completed", p.completed},
                {"leased", p.leased},
                {"remaining", p.total_slots - p.completed},
                {"annotators", per}}
        .dump();
}

}  // namespace lisible
