#include "webnav/predictor.hpp"

#include <stdexcept>

namespace webnav {

void PredictorParams::validate() const {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("threshold must lie in [0, 1]");
    }
    if (top < 1) throw std::invalid_argument("top must be >= 1");
}

const char* to_string(PredictionSource s) {
    return s == PredictionSource::cluster ? "cluster" : "markov-fallback";
}

NavigationModel::NavigationModel(std::shared_ptr<const SessionDataset> ds, std::size_t markov_order,
                                 std::size_t depth_cap)
    : index_(ds, depth_cap), markov_(train_kmm(*ds, markov_order)) {}

NavigationModel::NavigationModel(std::shared_ptr<const SessionDataset> ds, MarkovModel markov,
                                 std::size_t depth_cap)
    : index_(std::move(ds), depth_cap), markov_(std::move(markov)) {}

bool cluster_gate(const APDistribution& ap, const PredictorParams& params) {
    return !ap.empty() && ap.support() >= params.min_support && ap.max_probability() >= params.threshold;
}

void check_prefix(const NavigationModel& model, std::span<const PageId> prefix) {
    if (prefix.empty()) throw std::invalid_argument("prefix must contain at least one page");
    for (auto p : prefix) {
        if (!model.catalog().contains(p)) {
            throw std::invalid_argument("page id " + std::to_string(p) + " is outside the catalog (1.." +
                                        std::to_string(model.catalog().size()) + ")");
        }
    }
}

Prediction predict_next(const NavigationModel& model, const Trajectory& prefix,
                        const PredictorParams& params) {
    params.validate();
    check_prefix(model, prefix.pages);
    if (params.k > model.markov().order()) {
        throw std::invalid_argument("k=" + std::to_string(params.k) + " exceeds the model's Markov order " +
                                    std::to_string(model.markov().order()));
    }

    Prediction out;
    out.prefix = prefix;
    out.params = params;
    out.cluster_size = model.index().count(prefix.pages);
    out.cluster_ap = cluster_distribution(prefix.pages, model.index());
    out.contributing = out.cluster_ap.support();

    if (cluster_gate(out.cluster_ap, params)) {
        out.source = PredictionSource::cluster;
        out.distribution = out.cluster_ap;
        return out;
    }
    auto fallback = model.markov().predict(prefix.pages, params.backoff, params.k);
    out.source = PredictionSource::markov_fallback;
    out.distribution = std::move(fallback.distribution);
    // Strict mode can miss entirely; report the order that was looked up.
    out.markov_order_used = fallback.order_used.value_or(std::min(params.k, prefix.size()));
    return out;
}

std::size_t PredictionTree::node_count() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.node_count();
    return n;
}

PredictionTree expand_whatif(const NavigationModel& model, const Trajectory& prefix, std::size_t depth,
                             const PredictorParams& params) {
    PredictionTree tree{predict_next(model, prefix, params), {}};
    if (depth == 0) return tree;
    for (const auto& e : tree.prediction.exposed()) {
        Trajectory child = prefix;
        child.pages.push_back(e.page);
        tree.children.push_back(expand_whatif(model, child, depth - 1, params));
    }
    return tree;
}

}  // namespace webnav
