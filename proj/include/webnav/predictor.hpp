#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "webnav/cluster.hpp"
#include "webnav/markov.hpp"
#include "webnav/prefix_index.hpp"
#include "webnav/session_store.hpp"

namespace webnav {

/// The confidence gate for the cluster answer plus presentation knobs.
struct PredictorParams {
    std::size_t k = kDefaultMarkovOrder;
    double threshold = 0.2;     // minimum top probability of the cluster AP
    std::size_t min_support = 5;  // minimum contributing cluster members
    std::size_t top = 3;
    bool backoff = true;

    void validate() const;
    bool operator==(const PredictorParams&) const = default;
};

enum class PredictionSource { cluster, markov_fallback };

const char* to_string(PredictionSource s);

struct Prediction {
    Trajectory prefix;
    APDistribution distribution;  // untruncated
    PredictionSource source = PredictionSource::cluster;
    std::size_t cluster_size = 0;
    std::size_t contributing = 0;
    APDistribution cluster_ap;  // kept even when the gate rejected it
    std::optional<std::size_t> markov_order_used;
    PredictorParams params;

    std::vector<APDistribution::Entry> exposed() const { return distribution.top(params.top); }
};

/// Dataset, prefix index and Markov tables built from it. Immutable after
/// construction and safe to share between threads.
class NavigationModel {
public:
    NavigationModel(std::shared_ptr<const SessionDataset> ds, std::size_t markov_order,
                    std::size_t depth_cap = kDefaultDepthCap);
    NavigationModel(std::shared_ptr<const SessionDataset> ds, MarkovModel markov,
                    std::size_t depth_cap = kDefaultDepthCap);

    const SessionDataset& dataset() const noexcept { return index_.dataset(); }
    const Catalog& catalog() const noexcept { return dataset().catalog; }
    const PrefixIndex& index() const noexcept { return index_; }
    const MarkovModel& markov() const noexcept { return markov_; }

private:
    PrefixIndex index_;
    MarkovModel markov_;
};

/// True when the cluster distribution is trusted as is.
bool cluster_gate(const APDistribution& ap, const PredictorParams& params);

/// Throws std::invalid_argument on an empty prefix, an id outside the catalog,
/// or k above the model's trained order.
void check_prefix(const NavigationModel& model, std::span<const PageId> prefix);

Prediction predict_next(const NavigationModel& model, const Trajectory& prefix,
                        const PredictorParams& params = {});

struct PredictionTree {
    Prediction prediction;
    std::vector<PredictionTree> children;  // one per exposed page, same order

    std::size_t node_count() const;
};

PredictionTree expand_whatif(const NavigationModel& model, const Trajectory& prefix, std::size_t depth,
                             const PredictorParams& params = {});

}  // namespace webnav
