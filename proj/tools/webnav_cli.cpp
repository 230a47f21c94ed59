// webnav: ingest clickstream sessions, inspect them, predict next pages,
// evaluate the predictor and serve the HTTP API.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "webnav/dissimilarity.hpp"
#include "webnav/evaluation.hpp"
#include "webnav/model_store.hpp"
#include "webnav/predictor.hpp"
#include "webnav/render.hpp"
#include "webnav/service.hpp"
#include "webnav/session_store.hpp"

namespace {

using namespace webnav;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::size_t parse_bound(const std::string& text) {
    if (text == "inf" || text.empty()) return kUnbounded;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError("bad length bound '" + text + "'");
    }
}

LengthMeasure parse_measure(const std::string& text) {
    if (text == "pages") return LengthMeasure::pages;
    if (text == "distinct") return LengthMeasure::distinct_pages;
    throw UsageError("measure must be 'pages' or 'distinct'");
}

void add_params(CLI::App* cmd, PredictorParams& p, bool& no_backoff) {
    cmd->add_option("--k", p.k, "Markov order")->capture_default_str();
    cmd->add_option("--threshold", p.threshold, "minimum top probability for the cluster answer")
        ->capture_default_str();
    cmd->add_option("--min-support", p.min_support, "minimum contributing cluster members")->capture_default_str();
    cmd->add_option("--top", p.top, "predictions to show")->capture_default_str();
    cmd->add_flag("--no-backoff", no_backoff, "return nothing for unseen Markov contexts");
}

std::string filter_of(const ModelStore& store) {
    auto it = store.metadata.find("filter");
    return it == store.metadata.end() ? std::string() : it->second;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Next-page prediction from clickstream sessions"};
    app.require_subcommand(1);

    // ingest
    std::string seq_path, out_path, min_text = "1", max_text = "inf", measure_text = "pages";
    std::size_t ingest_k = kDefaultMarkovOrder;
    auto* ingest = app.add_subcommand("ingest", "parse a .seq file into a model store");
    ingest->add_option("seq", seq_path, "input .seq file")->required();
    ingest->add_option("-o,--output", out_path, "model store to write")->required();
    ingest->add_option("--min-len", min_text, "shortest session kept")->capture_default_str();
    ingest->add_option("--max-len", max_text, "longest session kept ('inf' for no bound)")->capture_default_str();
    ingest->add_option("--measure", measure_text, "session length: pages | distinct")->capture_default_str();
    ingest->add_option("--k", ingest_k, "order of the embedded Markov model")->capture_default_str();

    // stats
    std::string store_path;
    bool json = false;
    auto* stats = app.add_subcommand("stats", "session length histogram");
    stats->add_option("store", store_path)->required();
    stats->add_option("--measure", measure_text, "session length: pages | distinct")->capture_default_str();
    stats->add_flag("--json", json, "machine-readable output");

    // predict / expand
    PredictorParams params;
    bool no_backoff = false;
    std::string prefix_text;
    std::size_t depth = 1;
    auto* predict = app.add_subcommand("predict", "predict the next page after a prefix");
    predict->add_option("store", store_path)->required();
    predict->add_option("--prefix", prefix_text, "comma-separated page ids, e.g. 1,3,4")->required();
    predict->add_flag("--json", json, "machine-readable output");
    add_params(predict, params, no_backoff);

    auto* expand = app.add_subcommand("expand", "what-if tree of predictions");
    expand->add_option("store", store_path)->required();
    expand->add_option("--prefix", prefix_text, "comma-separated page ids")->required();
    expand->add_option("--depth", depth, "tree depth")->capture_default_str();
    expand->add_flag("--json", json, "machine-readable output");
    add_params(expand, params, no_backoff);

    // evaluate
    std::string method = "cv", task_text = "visit:4";
    std::size_t folds = 5, resamples = kDefaultResamples, threads = 1;
    std::uint64_t seed = 42;
    bool no_kmm = false;
    auto* evaluate = app.add_subcommand("evaluate", "cross-validation or bootstrap evaluation");
    evaluate->add_option("store", store_path)->required();
    evaluate->add_option("--method", method, "cv | bootstrap")->capture_default_str();
    evaluate->add_option("--folds", folds, "CV folds")->capture_default_str();
    evaluate->add_option("--resamples", resamples, "bootstrap resamples")->capture_default_str();
    evaluate->add_option("--task", task_text, "visit:<v>[:min-max] | mixed[:min-max]")->capture_default_str();
    evaluate->add_option("--seed", seed)->capture_default_str();
    evaluate->add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();
    evaluate->add_flag("--no-kmm", no_kmm, "disable the Markov fallback");
    evaluate->add_flag("--json", json, "machine-readable output");
    add_params(evaluate, params, no_backoff);

    // dissim
    auto* dissim = app.add_subcommand("dissim", "dissimilarity of every session to a query");
    dissim->add_option("store", store_path)->required();
    dissim->add_option("--query", prefix_text, "comma-separated page ids")->required();

    // serve
    ServiceConfig service;
    std::string static_dir;
    auto* serve_cmd = app.add_subcommand("serve", "serve the HTTP API");
    serve_cmd->add_option("store", store_path)->required();
    serve_cmd->add_option("--host", service.host)->capture_default_str();
    serve_cmd->add_option("--port", service.port)->capture_default_str();
    serve_cmd->add_option("--static-dir", static_dir, "explorer UI assets to serve at /");
    add_params(serve_cmd, params, no_backoff);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsageError;
    }
    params.backoff = !no_backoff;

    try {
        if (*ingest) {
            const auto min_len = parse_bound(min_text);
            const auto max_len = parse_bound(max_text);
            const auto measure = parse_measure(measure_text);
            if (min_len < 1 || min_len > max_len) throw UsageError("need 1 <= min-len <= max-len");
            if (!std::filesystem::exists(seq_path)) {
                std::cerr << "error: no such file: " << seq_path << '\n';
                return kDataError;
            }
            const auto raw = load_dataset_file(seq_path);
            ModelStore store;
            store.dataset = filter_by_length(raw, min_len, max_len, measure);
            store.metadata["source"] = seq_path;
            store.metadata["count_before"] = std::to_string(raw.size());
            store.metadata["count_after"] = std::to_string(store.dataset.size());
            store.metadata["filter"] = "length " + min_text + "-" + max_text + " (" + measure_text + ")";
            store.metadata["markov_order"] = std::to_string(ingest_k);
            store.markov = train_kmm(store.dataset, ingest_k);
            save_store_file(out_path, store);
            std::cout << raw.size() << " → " << store.dataset.size() << '\n';
            return 0;
        }

        const auto store = load_store_file(store_path);

        if (*stats) {
            const auto h = visit_length_histogram(store.dataset, parse_measure(measure_text));
            if (json) {
                std::cout << histogram_json(h).dump(2) << '\n';
            } else {
                write_histogram(std::cout, h);
            }
            return 0;
        }
        if (*predict || *expand) {
            const Trajectory prefix{parse_prefix(prefix_text)};
            if (prefix.pages.empty()) throw UsageError("prefix must contain at least one page");
            const auto model = model_from_store(store, params.k);
            if (*predict) {
                const auto p = predict_next(*model, prefix, params);
                if (json) {
                    std::cout << prediction_json(p, model->catalog()).dump(2) << '\n';
                } else {
                    write_prediction(std::cout, p, model->catalog());
                }
            } else {
                const auto tree = expand_whatif(*model, prefix, depth, params);
                if (json) {
                    std::cout << tree_json(tree, model->catalog()).dump(2) << '\n';
                } else {
                    write_tree(std::cout, tree, model->catalog());
                }
            }
            return 0;
        }
        if (*evaluate) {
            if (method != "cv" && method != "bootstrap") throw UsageError("method must be cv or bootstrap");
            const auto task = EvalTask::parse(task_text);
            EvalConfig config;
            config.splits = method == "cv" ? folds : resamples;
            config.seed = seed;
            config.kmm_enabled = !no_kmm;
            config.threads = threads;
            config.filter = filter_of(store);
            const auto report = method == "cv" ? cross_validate(store.dataset, task, params, config)
                                               : bootstrap_validate(store.dataset, task, params, config);
            if (json) {
                std::cout << report_json(report).dump(2) << '\n';
            } else {
                write_report(std::cout, report);
            }
            return 0;
        }
        if (*dissim) {
            const Trajectory query{parse_prefix(prefix_text)};
            write_dissimilarity_row(std::cout, dissimilarity_row(query, store.dataset), store.dataset);
            return 0;
        }
        if (*serve_cmd) {
            service.store_path = store_path;
            service.defaults = params;
            if (!static_dir.empty()) service.static_dir = static_dir;
            serve(service);
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDataError;
    }
    return kUsageError;
}
