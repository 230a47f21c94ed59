#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "webnav/cluster.hpp"
#include "webnav/session_store.hpp"

namespace webnav {

inline constexpr std::size_t kDefaultMarkovOrder = 2;

struct ContextLess {
    using is_transparent = void;
    template <class A, class B>
    bool operator()(const A& a, const B& b) const {
        return std::lexicographical_compare(std::begin(a), std::end(a), std::begin(b), std::end(b));
    }
};

using NextCounts = std::map<PageId, std::uint64_t>;
using ContextTable = std::map<std::vector<PageId>, NextCounts, ContextLess>;

struct MarkovPrediction {
    APDistribution distribution;
    std::optional<std::size_t> order_used;  // empty when nothing matched
};

/// Order-k next-page count tables. Table j maps every length-j context that
/// preceded a transition to the tallies of the page that followed it.
class MarkovModel {
public:
    explicit MarkovModel(std::size_t order = kDefaultMarkovOrder);

    std::size_t order() const noexcept { return tables_.size() - 1; }
    std::size_t trained_on() const noexcept { return trained_on_; }
    const ContextTable& table(std::size_t j) const { return tables_.at(j); }
    bool empty() const noexcept { return tables_.front().empty(); }

    void add(const Trajectory& t);
    /// Adds another model's counts; the result does not depend on merge order.
    void merge(const MarkovModel& other);

    /// Looks up the last min(order, max_order, len(context)) pages. With
    /// backoff, unseen contexts drop their oldest page until one has data;
    /// without it an unseen context yields an empty distribution.
    MarkovPrediction predict(std::span<const PageId> context, bool backoff = true,
                             std::size_t max_order = SIZE_MAX) const;

    /// Raw table insertion, used when loading a stored model.
    void set_counts(std::size_t j, std::vector<PageId> context, NextCounts counts);
    void set_trained_on(std::size_t n) noexcept { trained_on_ = n; }

    bool operator==(const MarkovModel&) const = default;

private:
    std::vector<ContextTable> tables_;
    std::size_t trained_on_ = 0;
};

MarkovModel train_kmm(const SessionDataset& ds, std::size_t k = kDefaultMarkovOrder);

inline MarkovPrediction kmm_predict(const MarkovModel& model, std::span<const PageId> context,
                                    bool backoff = true) {
    return model.predict(context, backoff);
}

}  // namespace webnav
