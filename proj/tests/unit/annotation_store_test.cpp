#include "lisible/annotation.hpp"
#include "lisible/error.hpp"

#include "testing.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

namespace lisible {
namespace {

using namespace std::chrono_literals;

CampaignSpec bws_spec(std::size_t slots = 2) {
    CampaignSpec spec;
    spec.kind = CampaignKind::bws;
    std::vector<std::string> ids;
    for (int i = 0; i < 6; ++i) {
        ids.push_back("t" + std::to_string(i));
        spec.texts[ids.back()] = "Texte numéro " + std::to_string(i) + ".";
    }
    spec.design = generate_bws_design(ids, 2, 3, slots, 1);
    return spec;
}

struct FakeClock {
    std::shared_ptr<std::chrono::system_clock::time_point> t =
        std::make_shared<std::chrono::system_clock::time_point>(std::chrono::system_clock::time_point{} + 1000h);
    Clock fn() const {
        return [p = t] { return *p; };
    }
};

BwsResponse answer(const Task& task, const std::string& who) {
    return {task.task_id, who, task.items[0].id, task.items[1].id, ""};
}

TEST(CampaignSpecJson, RoundTripAndValidation) {
    const auto spec = bws_spec();
    const auto json = campaign_spec_json(spec);
    EXPECT_EQ(campaign_spec_json(campaign_spec_from_json(json)), json);
    auto broken = spec;
    broken.texts.erase("t0");
    EXPECT_THROW(campaign_spec_json(broken), ValidationError);
    EXPECT_THROW(campaign_spec_from_json("[]"), ValidationError);
}

TEST(Store, CreateIsIdempotent) {
    testing::TempDir dir;
    CampaignStore store(dir.path());
    const auto id = store.create(bws_spec());
    EXPECT_EQ(store.create(bws_spec()), id);
    EXPECT_EQ(store.campaign_ids().size(), 1u);
    EXPECT_NE(store.create(bws_spec(3)), id);
    EXPECT_THROW(store.next_task("nope", "a"), NotFoundError);
}

TEST(Store, OutstandingTaskIsRepeated) {
    testing::TempDir dir;
    CampaignStore store(dir.path());
    const auto id = store.create(bws_spec());
    const auto t1 = store.next_task(id, "alice");
    const auto t2 = store.next_task(id, "alice");
    ASSERT_TRUE(t1 && t2);
    EXPECT_EQ(t1->task_id, t2->task_id);
    EXPECT_EQ(t1->items.size(), 3u);
    EXPECT_FALSE(t1->items[0].text.empty());
    EXPECT_THROW(store.next_task(id, ""), ValidationError);
}

TEST(Store, EachAnnotatorAnswersEachTupleOnce) {
    testing::TempDir dir;
    CampaignStore store(dir.path());
    const auto spec = bws_spec(1);
    const auto id = store.create(spec);
    std::size_t done = 0;
    while (auto task = store.next_task(id, "alice")) {
        const auto stored = store.submit(id, answer(*task, "alice"));
        EXPECT_FALSE(stored.timestamp.empty());
        ++done;
    }
    EXPECT_EQ(done, spec.design.tuples.size());
    // every slot is taken now
    EXPECT_FALSE(store.next_task(id, "bob").has_value());
    BwsResponse again{spec.design.tuples[0].id, "alice", spec.design.tuples[0].texts[0], spec.design.tuples[0].texts[1], ""};
    EXPECT_THROW(store.submit(id, again), ConflictError);
    again.annotator = "bob";
    EXPECT_THROW(store.submit(id, again), ConflictError);
    const auto p = store.progress(id);
    EXPECT_EQ(p.completed, p.total_slots);
    EXPECT_EQ(p.per_annotator.at("alice"), done);
}

TEST(Store, InvalidResponsesRejected) {
    testing::TempDir dir;
    CampaignStore store(dir.path());
    const auto id = store.create(bws_spec());
    const auto task = *store.next_task(id, "alice");
    auto r = answer(task, "alice");
    r.worst = r.best;
    EXPECT_THROW(store.submit(id, r), ValidationError);
    r = answer(task, "alice");
    r.best = "not-a-member";
    EXPECT_THROW(store.submit(id, r), ValidationError);
    EXPECT_THROW(store.submit(id, RatingResponse{"t0", "alice", 50, ""}), ValidationError);
    EXPECT_EQ(store.progress(id).completed, 0u);
}

TEST(Store, LeasesExpire) {
    testing::TempDir dir;
    FakeClock clock;
    CampaignStore store(dir.path(), clock.fn(), 60s);
    const auto id = store.create(bws_spec(1));
    const auto n_tuples = store.spec(id).design.tuples.size();
    // alice leases one tuple; bob can take every other one but not hers
    const auto held = *store.next_task(id, "alice");
    std::size_t bob = 0;
    while (auto t = store.next_task(id, "bob")) {
        EXPECT_NE(t->task_id, held.task_id);
        store.submit(id, answer(*t, "bob"));
        ++bob;
    }
    EXPECT_EQ(bob, n_tuples - 1);
    EXPECT_EQ(store.progress(id).leased, 1u);
    *clock.t += 61s;
    EXPECT_EQ(store.progress(id).leased, 0u);
    const auto freed = store.next_task(id, "carol");
    ASSERT_TRUE(freed.has_value());
    EXPECT_EQ(freed->task_id, held.task_id);
    // alice's late answer finds the slot taken by carol's lease
    EXPECT_THROW(store.submit(id, answer(held, "alice")), ConflictError);
}

TEST(Store, PersistsAcrossRestartsAndIgnoresTornTail) {
    testing::TempDir dir;
    std::string id;
    std::string exported;
    {
        CampaignStore store(dir.path());
        id = store.create(bws_spec());
        for (const char* who : {"alice", "bob"}) {
            for (int i = 0; i < 2; ++i) {
                const auto t = *store.next_task(id, who);
                store.submit(id, answer(t, who));
            }
        }
        exported = store.export_jsonl(id);
    }
    {
        std::ofstream tail(dir.path() / id / "responses.jsonl", std::ios::app);
        tail << R"({"v":1,"type":"bws","tuple_id")";
    }
    CampaignStore reopened(dir.path());
    EXPECT_EQ(reopened.export_jsonl(id), exported);
    EXPECT_EQ(reopened.progress(id).completed, 4u);
}

TEST(Store, ExportFeedsScoring) {
    testing::TempDir dir;
    CampaignStore store(dir.path());
    const auto spec = bws_spec(2);
    const auto id = store.create(spec);
    for (const char* who : {"bob", "alice"}) {
        while (auto t = store.next_task(id, who)) store.submit(id, answer(*t, who));
    }
    std::istringstream in(store.export_jsonl(id));
    const auto responses = read_responses_jsonl(in);
    ASSERT_EQ(responses.size(), spec.design.tuples.size() * 2);
    for (std::size_t i = 1; i < responses.size(); ++i) {
        EXPECT_LE(std::tie(responses[i - 1].tuple_id, responses[i - 1].annotator),
                  std::tie(responses[i].tuple_id, responses[i].annotator));
    }
    EXPECT_EQ(bws_scores(spec.design, responses).size(), 6u);
}

TEST(Store, RatingCampaign) {
    testing::TempDir dir;
    CampaignStore store(dir.path());
    CampaignSpec spec;
    spec.kind = CampaignKind::rating;
    spec.rating_texts = {"a", "b"};
    spec.raters_per_text = 2;
    spec.texts = {{"a", "Texte A."}, {"b", "Texte B."}};
    const auto id = store.create(spec);
    for (const char* who : {"r1", "r2"}) {
        while (auto t = store.next_task(id, who)) {
            EXPECT_EQ(t->kind, CampaignKind::rating);
            store.submit(id, RatingResponse{t->task_id, who, 40.0, ""});
        }
    }
    EXPECT_FALSE(store.next_task(id, "r3").has_value());
    EXPECT_THROW(store.submit(id, RatingResponse{"a", "r4", 101.0, ""}), ValidationError);
    std::istringstream in(store.export_jsonl(id));
    const auto m = rating_matrix(read_ratings_jsonl(in));
    EXPECT_EQ(m.values.size(), 2u);
    CampaignSpec empty = spec;
    empty.rating_texts.clear();
    EXPECT_THROW(store.create(empty), ValidationError);
}

TEST(Store, ConcurrentAnnotatorsNeverOverfillSlots) {
    testing::TempDir dir;
    CampaignStore store(dir.path());
    const auto spec = bws_spec(3);
    const auto id = store.create(spec);
    std::atomic<int> conflicts{0};
    std::vector<std::thread> threads;
    for (int w = 0; w < 16; ++w) {
        threads.emplace_back([&, w] {
            const std::string who = "ann" + std::to_string(w);
            while (auto t = store.next_task(id, who)) {
                try {
                    store.submit(id, answer(*t, who));
                } catch (const ConflictError&) {
                    ++conflicts;
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    const auto p = store.progress(id);
    EXPECT_EQ(p.completed, p.total_slots);
    EXPECT_EQ(conflicts.load(), 0);
    std::istringstream in(store.export_jsonl(id));
    std::map<std::string, std::set<std::string>> per_tuple;
    for (const auto& r : read_responses_jsonl(in)) EXPECT_TRUE(per_tuple[r.tuple_id].insert(r.annotator).second);
    for (const auto& [tuple, who] : per_tuple) EXPECT_EQ(who.size(), 3u) << tuple;
}

TEST(Json, TaskAndProgress) {
    Task t{"c1", CampaignKind::bws, "q1", {{"a", "Texte"}}};
    EXPECT_EQ(task_json(t), R"({"campaign":"c1","kind":"bws","task_id":"q1","texts":[{"id":"a","text":"Texte"}]})");
    Progress p;
    p.total_slots = 4;
    p.completed = 1;
    p.per_annotator["x"] = 1;
    EXPECT_NE(progress_json(p).find(R"("remaining":3)"), std::string::npos);
}

}  // namespace
}  // namespace lisible
