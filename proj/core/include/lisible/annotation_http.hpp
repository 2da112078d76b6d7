#pragma once

#include "lisible/annotation.hpp"

#include <filesystem>
#include <memory>
#include <string>

namespace lisible {

struct ServerOptions {
    std::string host = "127.0.0.1";
    /// 0 picks a free port.
    int port = 8080;
    /// Served at "/" when set (the annotation UI build).
    std::filesystem::path static_dir;
};

/// JSON API over a CampaignStore:
///   POST /api/campaigns                      -> {"id": ...}
///   GET  /api/campaigns                      -> {"campaigns": [...]}
///   GET  /api/campaigns/{id}/next?annotator= -> task or {"done": true}
///   POST /api/campaigns/{id}/responses       -> {"ok": true, "record": ...}
///   GET  /api/campaigns/{id}/export          -> JSONL
///   GET  /api/campaigns/{id}/progress        -> counts
/// Errors come back as {"error": ...} with 400 (invalid), 404 (unknown
/// campaign), 409 (slot conflict) or 500.
class AnnotationServer {
public:
    AnnotationServer(CampaignStore& store, ServerOptions options);
    ~AnnotationServer();

    /// Binds the socket and returns the bound port.
    int bind();
    /// Serves until stop(); call after bind().
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace lisible
