#include "webnav/render.hpp"

#include <cstdio>
#include <string>

namespace webnav {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string percent(double fraction) { return fixed(fraction * 100.0, 2) + "%"; }

}  // namespace

Json categories_json(const Catalog& catalog) {
    Json cats = Json::array();
    for (const auto& c : catalog.categories()) cats.push_back({{"id", c.id}, {"name", c.name}});
    return {{"categories", cats}};
}

Json histogram_json(const LengthHistogram& h) {
    Json rows = Json::array();
    for (const auto& r : h.rows) {
        rows.push_back({{"length", r.length},
                        {"users", r.users},
                        {"fraction", r.fraction},
                        {"percent", r.percent_rounded()}});
    }
    return {{"total", h.total}, {"rows", rows}};
}

Json params_json(const PredictorParams& p) {
    return {{"k", p.k},
            {"threshold", p.threshold},
            {"min_support", p.min_support},
            {"top", p.top},
            {"backoff", p.backoff}};
}

Json prediction_json(const Prediction& p, const Catalog& catalog) {
    Json preds = Json::array();
    for (const auto& e : p.exposed()) {
        preds.push_back({{"page", e.page}, {"name", catalog.name(e.page)}, {"p", e.probability}, {"count", e.count}});
    }
    Json j;
    j["prefix"] = p.prefix.pages;
    j["predictions"] = preds;
    j["source"] = to_string(p.source);
    j["cluster_size"] = p.cluster_size;
    j["contributing_count"] = p.contributing;
    j["support"] = p.distribution.support();
    j["markov_order_used"] = p.markov_order_used ? Json(*p.markov_order_used) : Json(nullptr);
    j["params"] = params_json(p.params);
    return j;
}

Json tree_json(const PredictionTree& t, const Catalog& catalog) {
    Json j = prediction_json(t.prediction, catalog);
    Json kids = Json::array();
    const auto exposed = t.prediction.exposed();
    for (std::size_t i = 0; i < t.children.size(); ++i) {
        Json child = tree_json(t.children[i], catalog);
        Json edge;
        edge["page"] = exposed[i].page;
        edge["p"] = exposed[i].probability;
        edge["node"] = std::move(child);
        kids.push_back(std::move(edge));
    }
    j["children"] = kids;
    return j;
}

Json task_json(const EvalTask& t) {
    Json j;
    j["mode"] = t.mode == TaskMode::exact_visit ? "exact-visit" : "next-after-prefix";
    if (t.mode == TaskMode::exact_visit) j["visit"] = t.visit;
    j["min_len"] = t.min_len;
    j["max_len"] = t.max_len == kUnbounded ? Json(nullptr) : Json(t.max_len);
    j["description"] = t.describe();
    return j;
}

Json report_json(const EvalReport& r) {
    Json j;
    j["method"] = to_string(r.method);
    j[r.method == EvalMethod::cv ? "folds" : "resamples"] = r.splits;
    j["seed"] = r.seed;
    j["params"] = params_json(r.params);
    j["kmm_enabled"] = r.kmm_enabled;
    j["task"] = task_json(r.task);
    j["provenance"] = r.provenance;
    j["filter"] = r.filter;
    j["dataset_size"] = r.dataset_size;
    j["trials"] = r.trials;
    j["success_rate"] = r.success_rate;
    j["top_n_success"] = {{"1", r.top_n_success[0]}, {"2", r.top_n_success[1]}, {"3", r.top_n_success[2]}};
    j["mean_cluster_size"] = r.mean_cluster_size;
    j["mean_distinct_clusters"] = r.mean_distinct_clusters;
    j["fallback_rate"] = r.fallback_rate;
    j["redraws"] = r.redraws;
    Json rows = Json::array();
    for (const auto& s : r.breakdown) {
        rows.push_back({{"index", s.index},
                        {"train_size", s.train_size},
                        {"trials", s.trials},
                        {"successes", s.successes},
                        {"success_rate", s.success_rate()},
                        {"top_n_successes", s.top_n_successes},
                        {"gate_failures", s.gate_failures},
                        {"cluster_size_sum", s.cluster_size_sum},
                        {"distinct_clusters", s.distinct_clusters},
                        {"redraws", s.redraws}});
    }
    j["breakdown"] = rows;
    return j;
}

void write_histogram(std::ostream& out, const LengthHistogram& h) {
    out << "length\tusers\tpercent\n";
    for (const auto& r : h.rows) out << r.length << '\t' << r.users << '\t' << fixed(r.percent_rounded(), 2) << '\n';
}

void write_prediction(std::ostream& out, const Prediction& p, const Catalog& catalog) {
    out << "prefix " << format_prefix(p.prefix.pages) << "  source " << to_string(p.source)
        << "  cluster_size " << p.cluster_size << "  contributing " << p.contributing;
    if (p.markov_order_used) out << "  markov_order " << *p.markov_order_used;
    out << '\n';
    out << "params k=" << p.params.k << " threshold=" << p.params.threshold
        << " min_support=" << p.params.min_support << " top=" << p.params.top << '\n';
    for (const auto& e : p.exposed()) {
        out << "  " << e.page << '\t' << catalog.name(e.page) << '\t' << percent(e.probability) << "\t("
            << e.count << '/' << p.distribution.support() << ")\n";
    }
    if (p.distribution.empty()) out << "  (no prediction)\n";
}

namespace {

void write_tree_node(std::ostream& out, const PredictionTree& t, const Catalog& catalog, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    out << pad << "[" << format_prefix(t.prediction.prefix.pages) << "] " << to_string(t.prediction.source)
        << " (cluster " << t.prediction.cluster_size << ")\n";
    const auto exposed = t.prediction.exposed();
    for (std::size_t i = 0; i < exposed.size(); ++i) {
        out << pad << "  -> " << exposed[i].page << ' ' << catalog.name(exposed[i].page) << ' '
            << percent(exposed[i].probability) << '\n';
        if (i < t.children.size()) write_tree_node(out, t.children[i], catalog, indent + 2);
    }
}

}  // namespace

void write_tree(std::ostream& out, const PredictionTree& t, const Catalog& catalog) {
    write_tree_node(out, t, catalog, 0);
}

void write_report(std::ostream& out, const EvalReport& r) {
    out << "method        " << to_string(r.method) << " ("
        << r.splits << (r.method == EvalMethod::cv ? " folds" : " resamples") << ", seed " << r.seed << ")\n";
    out << "task          " << r.task.describe() << '\n';
    out << "dataset       " << r.provenance << (r.filter.empty() ? "" : " [" + r.filter + "]") << ", "
        << r.dataset_size << " admitted\n";
    out << "params        k=" << r.params.k << " threshold=" << r.params.threshold
        << " min_support=" << r.params.min_support << " kmm=" << (r.kmm_enabled ? "on" : "off") << '\n';
    out << "trials        " << r.trials << '\n';
    out << "success       " << fixed(r.success_rate, 4) << "  (top-2 " << fixed(r.top_n_success[1], 4)
        << ", top-3 " << fixed(r.top_n_success[2], 4) << ")\n";
    out << "fallback rate " << fixed(r.fallback_rate, 4) << '\n';
    out << "mean cluster size " << fixed(r.mean_cluster_size, 2) << ", mean distinct clusters "
        << fixed(r.mean_distinct_clusters, 2) << '\n';
    if (r.method == EvalMethod::bootstrap) out << "redraws       " << r.redraws << '\n';
    for (const auto& s : r.breakdown) {
        out << "  " << (r.method == EvalMethod::cv ? "fold " : "resample ") << s.index << ": " << s.successes
            << '/' << s.trials << " = " << fixed(s.success_rate(), 4) << '\n';
    }
}

void write_dissimilarity_row(std::ostream& out, const DissimilarityRow& row, const SessionDataset& ds) {
    out << "# query " << format_prefix(row.query.pages) << ", omitted " << row.omitted << '\n';
    out << "index\tlength\tdissimilarity\tpages\n";
    for (const auto& e : row.entries) {
        const auto& t = ds.trajectories[e.trajectory];
        out << e.trajectory << '\t' << t.size() << '\t' << e.value << '\t' << format_prefix(t.pages) << '\n';
    }
}

}  // namespace webnav
