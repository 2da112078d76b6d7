#pragma once

#include "lisible/evaluation.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lisible {

enum class CampaignKind { bws, rating };

std::string_view to_string(CampaignKind kind);

struct CampaignSpec {
    CampaignKind kind = CampaignKind::bws;
    /// BWS campaigns: tuples and annotator slots.
    BwsDesign design;
    /// Rating campaigns: texts to rate and raters per text.
    std::vector<std::string> rating_texts;
    std::size_t raters_per_text = 0;
    /// Display text by id.
    std::map<std::string, std::string> texts;
};

/// Canonical JSON used for persistence and for the content hash. Throws
/// ValidationError when a referenced text has no display text.
std::string campaign_spec_json(const CampaignSpec& spec);
CampaignSpec campaign_spec_from_json(std::string_view json);

struct TaskItem {
    std::string id;
    std::string text;
};

struct Task {
    std::string campaign_id;
    CampaignKind kind = CampaignKind::bws;
    /// Tuple id (BWS) or text id (rating).
    std::string task_id;
    std::vector<TaskItem> items;
};

struct Progress {
    std::size_t total_slots = 0;
    std::size_t completed = 0;
    std::size_t leased = 0;
    std::map<std::string, std::size_t> per_annotator;
};

using Clock = std::function<std::chrono::system_clock::time_point()>;

/// File-backed campaign store. Each campaign lives in <data_dir>/<id>/ as
/// campaign.json plus an append-only responses.jsonl. Task assignment and
/// appends are serialized; reads share a lock.
class CampaignStore {
public:
    explicit CampaignStore(std::filesystem::path data_dir, Clock clock = {},
                           std::chrono::seconds lease_timeout = std::chrono::minutes(10));
    ~CampaignStore();
    CampaignStore(const CampaignStore&) = delete;
    CampaignStore& operator=(const CampaignStore&) = delete;

    /// Same content, same id; re-creation returns the existing campaign.
    std::string create(const CampaignSpec& spec);

    /// An open slot this annotator has neither answered nor been refused;
    /// repeated calls return the same outstanding task. Empty when the
    /// annotator has nothing left to do.
    std::optional<Task> next_task(const std::string& campaign_id, const std::string& annotator);

    /// Returns the stored record (with server timestamp). Throws
    /// ValidationError for malformed responses and ConflictError for closed
    /// or already answered slots.
    BwsResponse submit(const std::string& campaign_id, BwsResponse response);
    RatingResponse submit(const std::string& campaign_id, RatingResponse response);

    /// JSONL sorted by (task id, annotator, timestamp).
    std::string export_jsonl(const std::string& campaign_id) const;
    Progress progress(const std::string& campaign_id) const;
    CampaignSpec spec(const std::string& campaign_id) const;
    std::vector<std::string> campaign_ids() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::string task_json(const Task& task);
std::string progress_json(const Progress& progress);

}  // namespace lisible
