#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "webnav/prefix_index.hpp"
#include "webnav/session_store.hpp"

namespace webnav {

/// Next-page distribution held as integer tallies; probabilities are the
/// exact ratios count / support, converted to double only on read.
class APDistribution {
public:
    struct Entry {
        PageId page = 0;
        std::uint64_t count = 0;
        double probability = 0.0;
        bool operator==(const Entry&) const = default;
    };

    APDistribution() = default;
    /// Tallies need not be sorted or merged; zero counts are dropped.
    static APDistribution from_counts(std::vector<std::pair<PageId, std::uint64_t>> counts);

    bool empty() const noexcept { return counts_.empty(); }
    std::uint64_t support() const noexcept { return support_; }
    std::size_t size() const noexcept { return counts_.size(); }

    /// Tallies ascending by page.
    const std::vector<std::pair<PageId, std::uint64_t>>& counts() const noexcept { return counts_; }
    std::uint64_t count(PageId page) const;
    double probability(PageId page) const;

    /// Descending probability, ties by ascending page id.
    std::vector<Entry> ranked() const;
    std::vector<Entry> top(std::size_t n) const;
    /// Highest-probability page (smallest id on ties); 0 when empty.
    PageId argmax() const;
    double max_probability() const;

    bool operator==(const APDistribution&) const = default;

private:
    std::vector<std::pair<PageId, std::uint64_t>> counts_;
    std::uint64_t support_ = 0;
};

struct Cluster {
    Trajectory query;
    std::vector<std::size_t> members;  // dataset order
    std::size_t contributing = 0;      // members with a page after the query
};

/// All trajectories whose first len(query) pages equal the query.
Cluster specific_cluster(const Trajectory& query, const PrefixIndex& index);

/// Tallies each contributing member's page right after the query.
APDistribution associated_probabilities(const Cluster& cluster, const SessionDataset& ds);

/// Same distribution read straight off the index's child counts.
APDistribution cluster_distribution(std::span<const PageId> query, const PrefixIndex& index);

}  // namespace webnav
