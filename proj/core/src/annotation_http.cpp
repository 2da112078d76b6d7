#include "lisible/annotation_http.hpp"

#include "lisible/error.hpp"

#include <httplib.h>
#include <json.hpp>

namespace lisible {

namespace {

using Json = nlohmann::ordered_json;

void send_json(httplib::Response& res, int status, const std::string& body) {
    res.status = status;
    res.set_content(body, "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, status, Json{{"error", message}}.dump());
}

/// Runs `f`, translating library exceptions into HTTP statuses.
template <typename F>
void guarded(httplib::Response& res, F&& f) {
    try {
        f();
    } catch (const NotFoundError& e) {
        send_error(res, 404, e.what());
    } catch (const ConflictError& e) {
        send_error(res, 409, e.what());
    } catch (const InputError& e) {
        send_error(res, 400, e.what());
    } catch (const std::exception& e) {
        send_error(res, 500, e.what());
    }
}

Json parse_body(const httplib::Request& req) {
    auto j = Json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ValidationError("request body must be a JSON object");
    return j;
}

std::string required_string(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) throw ValidationError(std::string("missing string field \"") + key + "\"");
    return j[key].get<std::string>();
}

}  // namespace

struct AnnotationServer::Impl {
    CampaignStore& store;
    ServerOptions options;
    httplib::Server server;
    int port = -1;

    Impl(CampaignStore& s, ServerOptions o) : store(s), options(std::move(o)) { routes(); }

    void routes() {
        server.Post("/api/campaigns", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const std::string id = store.create(campaign_spec_from_json(req.body));
                send_json(res, 200, Json{{"id", id}}.dump());
            });
        });
        server.Get("/api/campaigns", [this](const httplib::Request&, httplib::Response& res) {
            guarded(res, [&] { send_json(res, 200, Json{{"campaigns", store.campaign_ids()}}.dump()); });
        });
        server.Get(R"(/api/campaigns/([^/]+)/next)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const std::string annotator = req.get_param_value("annotator");
                if (annotator.empty()) throw ValidationError("query parameter 'annotator' is required");
                const auto task = store.next_task(req.matches[1], annotator);
                send_json(res, 200, task ? task_json(*task) : Json{{"done", true}}.dump());
            });
        });
        server.Post(R"(/api/campaigns/([^/]+)/responses)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const std::string id = req.matches[1];
                const Json body = parse_body(req);
                std::string line;
                if (store.spec(id).kind == CampaignKind::bws) {
                    BwsResponse r;
                    r.tuple_id = required_string(body, "tuple_id");
                    r.annotator = required_string(body, "annotator");
                    r.best = required_string(body, "best");
                    r.worst = required_string(body, "worst");
                    line = to_jsonl(store.submit(id, r));
                } else {
                    RatingResponse r;
                    r.text_id = required_string(body, "text_id");
                    r.rater = required_string(body, "rater");
                    if (!body.contains("rating") || !body["rating"].is_number()) {
                        throw ValidationError("missing numeric field \"rating\"");
                    }
                    r.rating = body["rating"].get<double>();
                    line = to_jsonl(store.submit(id, r));
                }
                send_json(res, 200, Json{{"ok", true}, {"record", Json::parse(line)}}.dump());
            });
        });
        server.Get(R"(/api/campaigns/([^/]+)/export)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                res.status = 200;
                res.set_content(store.export_jsonl(req.matches[1]), "application/x-ndjson");
            });
        });
        server.Get(R"(/api/campaigns/([^/]+)/progress)", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { send_json(res, 200, progress_json(store.progress(req.matches[1]))); });
        });
        if (!options.static_dir.empty()) {
            if (!server.set_mount_point("/", options.static_dir.string())) {
                throw NotFoundError("static directory not found: " + options.static_dir.string());
            }
        }
    }
};

AnnotationServer::AnnotationServer(CampaignStore& store, ServerOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::bind() {
    if (impl_->options.port == 0) {
        impl_->port = impl_->server.bind_to_any_port(impl_->options.host);
    } else {
        impl_->port = impl_->server.bind_to_port(impl_->options.host, impl_->options.port) ? impl_->options.port : -1;
    }
    if (impl_->port < 0) {
        throw Error("cannot bind " + impl_->options.host + ":" + std::to_string(impl_->options.port));
    }
    return impl_->port;
}

void AnnotationServer::run() { impl_->server.listen_after_bind(); }

void AnnotationServer::stop() {
    if (impl_->server.is_running()) impl_->server.stop();
}

}  // namespace lisible
