#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "webnav/model_store.hpp"
#include "webnav/predictor.hpp"
#include "webnav/render.hpp"

namespace httplib {
class Server;
}

namespace webnav {

struct ServiceConfig {
    std::string store_path;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::optional<std::string> static_dir;
    PredictorParams defaults;

    void validate() const;
};

/// Builds the serving model from a store, reusing its Markov tables when they
/// cover `min_order` and retraining otherwise.
std::shared_ptr<const NavigationModel> model_from_store(const ModelStore& store, std::size_t min_order);

struct ApiResponse {
    int status = 200;
    Json body;
};

using QueryParams = std::multimap<std::string, std::string>;

/// Request handlers for /api/v1, independent of any socket layer. Handlers
/// only read the shared model; evaluations are serialized.
class Api {
public:
    Api(std::shared_ptr<const NavigationModel> model, PredictorParams defaults, std::string filter = {});

    ApiResponse handle(const std::string& method, const std::string& path, const QueryParams& query,
                       const std::string& body = {}) const;

    ApiResponse categories() const;
    ApiResponse stats() const;
    ApiResponse predict(const QueryParams& query) const;
    ApiResponse expand(const QueryParams& query) const;
    ApiResponse evaluate(const std::string& body) const;

    const PredictorParams& defaults() const noexcept { return defaults_; }

private:
    PredictorParams params_from(const QueryParams& query) const;

    std::shared_ptr<const NavigationModel> model_;
    PredictorParams defaults_;
    std::string filter_;
    mutable std::mutex eval_mutex_;
};

inline constexpr std::size_t kMaxExpandDepth = 4;

/// Routes /api/v1/* on `server` to `api`, which must outlive the server.
void install_routes(httplib::Server& server, const Api& api);

/// Blocks serving HTTP until the process is stopped. Throws on startup
/// failure (bad config, unreadable store, port unavailable).
void serve(const ServiceConfig& config);

}  // namespace webnav
