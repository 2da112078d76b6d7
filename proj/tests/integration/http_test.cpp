#include "lisible/annotation_http.hpp"

#include "testing.hpp"

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include <atomic>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace lisible {
namespace {

using Json = nlohmann::json;

CampaignSpec spec_for(std::size_t n_texts, std::size_t annotators_per_tuple) {
    CampaignSpec spec;
    spec.kind = CampaignKind::bws;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n_texts; ++i) {
        ids.push_back("t" + std::to_string(i));
        spec.texts[ids.back()] = "Texte " + std::to_string(i) + ".";
    }
    spec.design = generate_bws_design(ids, 4, 4, annotators_per_tuple, 2);
    return spec;
}

class Http : public ::testing::Test {
protected:
    void SetUp() override {
        store_ = std::make_unique<CampaignStore>(dir_.path());
        ServerOptions opts;
        opts.port = 0;
        server_ = std::make_unique<AnnotationServer>(*store_, opts);
        port_ = server_->bind();
        thread_ = std::thread([this] { server_->run(); });
        // wait until the listener answers
        for (int i = 0; i < 200; ++i) {
            if (client().Get("/api/campaigns")) break;
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
    }
    void TearDown() override {
        server_->stop();
        thread_.join();
    }

    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(10);
        return c;
    }

    std::string create(const CampaignSpec& spec) {
        auto res = client().Post("/api/campaigns", campaign_spec_json(spec), "application/json");
        EXPECT_TRUE(res);
        EXPECT_EQ(res->status, 200) << res->body;
        return Json::parse(res->body)["id"].get<std::string>();
    }

    testing::TempDir dir_;
    std::unique_ptr<CampaignStore> store_;
    std::unique_ptr<AnnotationServer> server_;
    std::thread thread_;
    int port_ = 0;
};

Json bws_answer(const Json& task, const std::string& who) {
    return Json{{"tuple_id", task["task_id"]},
                {"annotator", who},
                {"best", task["texts"][0]["id"]},
                {"worst", task["texts"][1]["id"]}};
}

TEST_F(Http, CreateListAndProgress) {
    const auto id = create(spec_for(8, 2));
    auto c = client();
    auto list = c.Get("/api/campaigns");
    ASSERT_TRUE(list);
    EXPECT_EQ(Json::parse(list->body)["campaigns"], Json::array({id}));
    auto progress = c.Get("/api/campaigns/" + id + "/progress");
    ASSERT_TRUE(progress);
    const auto p = Json::parse(progress->body);
    EXPECT_EQ(p["total_slots"], 16);
    EXPECT_EQ(p["completed"], 0);
}

TEST_F(Http, ErrorStatuses) {
    const auto id = create(spec_for(8, 1));
    auto c = client();

    EXPECT_EQ(c.Get("/api/campaigns/nope/next?annotator=a")->status, 404);
    EXPECT_EQ(c.Get("/api/campaigns/nope/export")->status, 404);
    EXPECT_EQ(c.Get("/api/campaigns/" + id + "/next")->status, 400);
    EXPECT_EQ(c.Post("/api/campaigns", "{not json", "application/json")->status, 400);

    auto next = c.Get("/api/campaigns/" + id + "/next?annotator=alice");
    ASSERT_TRUE(next);
    const auto task = Json::parse(next->body);
    EXPECT_EQ(task["texts"].size(), 4u);

    auto same = bws_answer(task, "alice");
    same["worst"] = same["best"];
    auto bad = c.Post("/api/campaigns/" + id + "/responses", same.dump(), "application/json");
    EXPECT_EQ(bad->status, 400);
    EXPECT_TRUE(Json::parse(bad->body).contains("error"));

    auto missing = bws_answer(task, "alice");
    missing.erase("best");
    EXPECT_EQ(c.Post("/api/campaigns/" + id + "/responses", missing.dump(), "application/json")->status, 400);

    const auto good = bws_answer(task, "alice");
    auto ok = c.Post("/api/campaigns/" + id + "/responses", good.dump(), "application/json");
    ASSERT_EQ(ok->status, 200) << ok->body;
    EXPECT_EQ(Json::parse(ok->body)["record"]["annotator"], "alice");
    EXPECT_EQ(c.Post("/api/campaigns/" + id + "/responses", good.dump(), "application/json")->status, 409);
}

TEST_F(Http, ConcurrentAnnotatorsFillTheDesign) {
    const auto spec = spec_for(40, 5);
    const auto id = create(spec);
    std::atomic<int> failures{0};
    std::atomic<int> submitted{0};
    std::mutex log_mutex;
    std::vector<std::string> log;
    auto fail = [&](const char* what, const httplib::Result& res) {
        ++failures;
        std::lock_guard lock(log_mutex);
        log.push_back(std::string(what) + ": " +
                      (res ? std::to_string(res->status) + " " + res->body : httplib::to_string(res.error())));
    };
    std::vector<std::thread> workers;
    for (int w = 0; w < 50; ++w) {
        workers.emplace_back([&, w] {
            auto c = client();
            const std::string who = "ann" + std::to_string(w);
            for (;;) {
                auto next = c.Get("/api/campaigns/" + id + "/next?annotator=" + who);
                if (!next || next->status != 200) {
                    fail("next", next);
                    return;
                }
                const auto task = Json::parse(next->body);
                if (task.contains("done")) return;
                auto res = c.Post("/api/campaigns/" + id + "/responses", bws_answer(task, who).dump(),
                                  "application/json");
                if (!res || res->status != 200) {
                    fail("submit", res);
                    return;
                }
                ++submitted;
            }
        });
    }
    for (auto& t : workers) t.join();
    EXPECT_EQ(failures.load(), 0) << (log.empty() ? "" : log.front());
    const auto total = spec.design.tuples.size() * 5;
    EXPECT_EQ(static_cast<std::size_t>(submitted.load()), total);

    auto exported = client().Get("/api/campaigns/" + id + "/export");
    ASSERT_TRUE(exported);
    EXPECT_EQ(exported->status, 200);
    std::istringstream in(exported->body);
    const auto responses = read_responses_jsonl(in);
    ASSERT_EQ(responses.size(), total);
    std::map<std::string, std::set<std::string>> per_tuple;
    for (const auto& r : responses) EXPECT_TRUE(per_tuple[r.tuple_id].insert(r.annotator).second);
    for (const auto& [tuple, who] : per_tuple) EXPECT_EQ(who.size(), 5u) << tuple;
    EXPECT_EQ(bws_scores(spec.design, responses).size(), 40u);
}

TEST_F(Http, RatingCampaign) {
    CampaignSpec spec;
    spec.kind = CampaignKind::rating;
    spec.rating_texts = {"a", "b"};
    spec.raters_per_text = 1;
    spec.texts = {{"a", "Texte A."}, {"b", "Texte B."}};
    const auto id = create(spec);
    auto c = client();
    const auto task = Json::parse(c.Get("/api/campaigns/" + id + "/next?annotator=r1")->body);
    ASSERT_EQ(task["kind"], "rating");
    Json body{{"text_id", task["task_id"]}, {"rater", "r1"}, {"rating", 150}};
    EXPECT_EQ(c.Post("/api/campaigns/" + id + "/responses", body.dump(), "application/json")->status, 400);
    body["rating"] = 70;
    EXPECT_EQ(c.Post("/api/campaigns/" + id + "/responses", body.dump(), "application/json")->status, 200);
}

}  // namespace
}  // namespace lisible
