#include "webnav/service.hpp"

#include <charconv>
#include <iostream>
#include <stdexcept>

#include "httplib.h"
#include "webnav/evaluation.hpp"

namespace webnav {

namespace {

class BadRequest : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::optional<std::string> get(const QueryParams& q, const std::string& key) {
    auto it = q.find(key);
    if (it == q.end()) return std::nullopt;
    return it->second;
}

std::size_t to_size(const std::string& key, const std::string& v) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw BadRequest("parameter '" + key + "' must be a non-negative integer, got '" + v + "'");
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw BadRequest("parameter '" + key + "' must be a number, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw BadRequest("parameter '" + key + "' must be true or false");
}

ApiResponse error(int status, const std::string& message) {
    return {status, Json{{"error", message}, {"status", status}}};
}

Trajectory prefix_from(const QueryParams& q) {
    const auto text = get(q, "prefix");
    if (!text || text->empty()) throw BadRequest("prefix must contain at least one page");
    return Trajectory{parse_prefix(*text)};
}

}  // namespace

void ServiceConfig::validate() const {
    if (port < 1 || port > 65535) throw std::invalid_argument("port must be in [1, 65535]");
    defaults.validate();
}

std::shared_ptr<const NavigationModel> model_from_store(const ModelStore& store, std::size_t min_order) {
    auto ds = std::make_shared<const SessionDataset>(store.dataset);
    if (store.markov && store.markov->order() >= min_order) {
        return std::make_shared<const NavigationModel>(ds, *store.markov);
    }
    return std::make_shared<const NavigationModel>(ds, min_order);
}

Api::Api(std::shared_ptr<const NavigationModel> model, PredictorParams defaults, std::string filter)
    : model_(std::move(model)), defaults_(defaults), filter_(std::move(filter)) {
    defaults_.validate();
}

PredictorParams Api::params_from(const QueryParams& q) const {
    PredictorParams p = defaults_;
    if (auto v = get(q, "k")) p.k = to_size("k", *v);
    if (auto v = get(q, "threshold")) p.threshold = to_double("threshold", *v);
    if (auto v = get(q, "min_support")) p.min_support = to_size("min_support", *v);
    if (auto v = get(q, "top")) p.top = to_size("top", *v);
    if (auto v = get(q, "backoff")) p.backoff = to_bool("backoff", *v);
    p.validate();
    return p;
}

ApiResponse Api::categories() const { return {200, categories_json(model_->catalog())}; }

ApiResponse Api::stats() const { return {200, histogram_json(visit_length_histogram(model_->dataset()))}; }

ApiResponse Api::predict(const QueryParams& q) const {
    try {
        const auto params = params_from(q);
        const auto prefix = prefix_from(q);
        return {200, prediction_json(predict_next(*model_, prefix, params), model_->catalog())};
    } catch (const std::invalid_argument& e) {
        return error(400, e.what());
    }
}

ApiResponse Api::expand(const QueryParams& q) const {
    try {
        const auto params = params_from(q);
        const auto prefix = prefix_from(q);
        const std::size_t depth = get(q, "depth") ? to_size("depth", *get(q, "depth")) : 1;
        if (depth > kMaxExpandDepth) {
            throw BadRequest("depth must be at most " + std::to_string(kMaxExpandDepth));
        }
        auto tree = expand_whatif(*model_, prefix, depth, params);
        Json body = tree_json(tree, model_->catalog());
        body["depth"] = depth;
        return {200, body};
    } catch (const std::invalid_argument& e) {
        return error(400, e.what());
    }
}

ApiResponse Api::evaluate(const std::string& body) const {
    Json doc;
    try {
        doc = Json::parse(body.empty() ? "{}" : body);
        if (!doc.is_object()) throw BadRequest("evaluation request must be a JSON object");

        PredictorParams params = defaults_;
        params.k = doc.value("k", params.k);
        params.threshold = doc.value("threshold", params.threshold);
        params.min_support = doc.value("min_support", params.min_support);
        params.backoff = doc.value("backoff", params.backoff);
        params.validate();

        const auto method = doc.value("method", std::string("cv"));
        if (method != "cv" && method != "bootstrap") throw BadRequest("method must be cv or bootstrap");
        EvalConfig config;
        config.splits = method == "cv" ? doc.value("folds", std::size_t{5})
                                       : doc.value("resamples", kDefaultResamples);
        config.seed = doc.value("seed", std::uint64_t{42});
        config.kmm_enabled = doc.value("kmm", true);
        config.threads = doc.value("threads", std::size_t{1});
        config.filter = filter_;
        const auto task = EvalTask::parse(doc.value("task", std::string("visit:4")));

        std::lock_guard lock(eval_mutex_);
        const auto report = method == "cv" ? cross_validate(model_->dataset(), task, params, config)
                                           : bootstrap_validate(model_->dataset(), task, params, config);
        return {200, report_json(report)};
    } catch (const Json::exception& e) {
        return error(400, std::string("bad evaluation request: ") + e.what());
    } catch (const std::invalid_argument& e) {
        return error(400, e.what());
    }
}

ApiResponse Api::handle(const std::string& method, const std::string& path, const QueryParams& query,
                        const std::string& body) const {
    if (method == "GET" && path == "/api/v1/categories") return categories();
    if (method == "GET" && path == "/api/v1/stats") return stats();
    if (method == "GET" && path == "/api/v1/predict") return predict(query);
    if (method == "GET" && path == "/api/v1/expand") return expand(query);
    if (method == "POST" && path == "/api/v1/evaluate") return evaluate(body);
    return error(404, "no such endpoint: " + method + " " + path);
}

void install_routes(httplib::Server& server, const Api& api) {
    auto bridge = [&api](const httplib::Request& req, httplib::Response& res) {
        QueryParams q(req.params.begin(), req.params.end());
        const auto r = api.handle(req.method, req.path, q, req.body);
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    server.Get(R"(/api/v1/.*)", bridge);
    server.Post(R"(/api/v1/.*)", bridge);
}

void serve(const ServiceConfig& config) {
    config.validate();
    const auto store = load_store_file(config.store_path);
    auto model = model_from_store(store, config.defaults.k);
    auto filter_it = store.metadata.find("filter");
    const Api api(model, config.defaults, filter_it == store.metadata.end() ? "" : filter_it->second);

    httplib::Server server;
    install_routes(server, api);
    if (config.static_dir && !server.set_mount_point("/", *config.static_dir)) {
        throw std::runtime_error("static asset directory not found: " + *config.static_dir);
    }
    if (!server.bind_to_port(config.host, config.port)) {
        throw std::runtime_error("cannot bind " + config.host + ":" + std::to_string(config.port));
    }
    std::cerr << "serving " << config.store_path << " on http://" << config.host << ':' << config.port << '\n';
    server.listen_after_bind();
}

}  // namespace webnav
