#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "webnav/session_store.hpp"

namespace webnav {

inline constexpr std::size_t kDefaultDepthCap = 32;

/// Root-anchored count tree over trajectory prefixes.
///
/// Trajectory indices are kept in one array ordered lexicographically by
/// their first `depth_cap` pages (ties by dataset order), so each node owns a
/// contiguous slice of it. For every node:
///
///     pass == sum(child.pass) + ends + continuing
///
/// where `continuing` is nonzero only at depth_cap, for trajectories that are
/// longer than the cap.
class PrefixIndex {
public:
    struct Node {
        PageId page = 0;  // 0 for the root
        std::size_t depth = 0;
        std::size_t pass = 0;
        std::size_t ends = 0;
        std::size_t continuing = 0;
        std::size_t begin = 0;  // slice of order()
        std::size_t end = 0;
        std::size_t first_child = 0;
        std::size_t child_count = 0;
    };

    PrefixIndex(std::shared_ptr<const SessionDataset> ds, std::size_t depth_cap = kDefaultDepthCap);

    const SessionDataset& dataset() const noexcept { return *ds_; }
    std::shared_ptr<const SessionDataset> dataset_ptr() const noexcept { return ds_; }
    std::size_t depth_cap() const noexcept { return depth_cap_; }

    const Node& root() const noexcept { return nodes_.front(); }
    std::span<const Node> children(const Node& n) const {
        return std::span<const Node>(nodes_).subspan(n.first_child, n.child_count);
    }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const std::vector<std::size_t>& order() const noexcept { return order_; }

    /// Deepest node matching the first min(len(prefix), depth_cap) pages, or
    /// nullptr when no trajectory starts that way.
    const Node* find(std::span<const PageId> prefix) const;

    /// Indices of every trajectory whose first len(prefix) pages equal prefix,
    /// in dataset order. Duplicated sessions appear once per occurrence.
    std::vector<std::size_t> lookup(std::span<const PageId> prefix) const;

    /// Number of matching trajectories without materializing them.
    std::size_t count(std::span<const PageId> prefix) const;

    /// (next page, tally) over matching trajectories that have a page after
    /// the prefix, ascending by page.
    std::vector<std::pair<PageId, std::size_t>> next_page_counts(std::span<const PageId> prefix) const;

private:
    bool slice_matches(std::size_t traj, std::span<const PageId> prefix) const;

    std::shared_ptr<const SessionDataset> ds_;
    std::size_t depth_cap_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

PrefixIndex build_prefix_index(std::shared_ptr<const SessionDataset> ds,
                               std::size_t depth_cap = kDefaultDepthCap);

}  // namespace webnav
