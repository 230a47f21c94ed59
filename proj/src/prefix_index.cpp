#include "webnav/prefix_index.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace webnav {

PrefixIndex::PrefixIndex(std::shared_ptr<const SessionDataset> ds, std::size_t depth_cap)
    : ds_(std::move(ds)), depth_cap_(depth_cap) {
    if (!ds_) throw std::invalid_argument("PrefixIndex: null dataset");
    if (depth_cap_ < 1) throw std::invalid_argument("PrefixIndex: depth_cap must be >= 1");

    const auto& trajs = ds_->trajectories;
    order_.resize(trajs.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    const std::size_t cap = depth_cap_;
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
        const auto& pa = trajs[a].pages;
        const auto& pb = trajs[b].pages;
        const auto la = std::min(pa.size(), cap);
        const auto lb = std::min(pb.size(), cap);
        return std::lexicographical_compare(pa.begin(), pa.begin() + la, pb.begin(), pb.begin() + lb);
    });

    nodes_.push_back(Node{0, 0, trajs.size(), 0, 0, 0, order_.size(), 0, 0});
    for (std::size_t current = 0; current < nodes_.size(); ++current) {
        const Node n = nodes_[current];
        if (n.depth == depth_cap_) {
            // Keys are truncated here, so the slice is in dataset order.
            for (std::size_t i = n.begin; i < n.end; ++i) {
                (trajs[order_[i]].size() == n.depth ? nodes_[current].ends : nodes_[current].continuing)++;
            }
            continue;
        }
        // Below the cap, sessions ending at this depth sort first.
        std::size_t i = n.begin;
        while (i < n.end && trajs[order_[i]].size() == n.depth) ++i;
        nodes_[current].ends = i - n.begin;
        nodes_[current].first_child = nodes_.size();
        while (i < n.end) {
            const PageId page = trajs[order_[i]].pages[n.depth];
            std::size_t j = i;
            while (j < n.end && trajs[order_[j]].pages[n.depth] == page) ++j;
            nodes_.push_back(Node{page, n.depth + 1, j - i, 0, 0, i, j, 0, 0});
            ++nodes_[current].child_count;
            i = j;
        }
    }
}

const PrefixIndex::Node* PrefixIndex::find(std::span<const PageId> prefix) const {
    const Node* node = &nodes_.front();
    const auto depth = std::min(prefix.size(), depth_cap_);
    for (std::size_t d = 0; d < depth; ++d) {
        const auto kids = children(*node);
        auto it = std::lower_bound(kids.begin(), kids.end(), prefix[d],
                                   [](const Node& c, PageId p) { return c.page < p; });
        if (it == kids.end() || it->page != prefix[d]) return nullptr;
        node = &*it;
    }
    return node;
}

bool PrefixIndex::slice_matches(std::size_t traj, std::span<const PageId> prefix) const {
    const auto& pages = ds_->trajectories[traj].pages;
    return pages.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), pages.begin());
}

std::vector<std::size_t> PrefixIndex::lookup(std::span<const PageId> prefix) const {
    std::vector<std::size_t> out;
    const Node* node = find(prefix);
    if (!node) return out;
    if (prefix.size() <= depth_cap_) {
        // Trajectories ending above the node's depth are not in its slice.
        out.assign(order_.begin() + node->begin, order_.begin() + node->end);
    } else {
        for (std::size_t i = node->begin; i < node->end; ++i) {
            if (slice_matches(order_[i], prefix)) out.push_back(order_[i]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t PrefixIndex::count(std::span<const PageId> prefix) const {
    const Node* node = find(prefix);
    if (!node) return 0;
    if (prefix.size() <= depth_cap_) return node->pass;
    std::size_t n = 0;
    for (std::size_t i = node->begin; i < node->end; ++i) n += slice_matches(order_[i], prefix);
    return n;
}

std::vector<std::pair<PageId, std::size_t>> PrefixIndex::next_page_counts(
    std::span<const PageId> prefix) const {
    std::vector<std::pair<PageId, std::size_t>> out;
    const Node* node = find(prefix);
    if (!node) return out;
    if (prefix.size() < depth_cap_) {
        for (const auto& c : children(*node)) out.emplace_back(c.page, c.pass);
        return out;
    }
    // At or past the cap the tree has no children; tally from the slice.
    std::vector<std::pair<PageId, std::size_t>> tally;
    for (std::size_t i = node->begin; i < node->end; ++i) {
        const auto t = order_[i];
        if (!slice_matches(t, prefix)) continue;
        const auto& pages = ds_->trajectories[t].pages;
        if (pages.size() > prefix.size()) tally.emplace_back(pages[prefix.size()], 1);
    }
    std::sort(tally.begin(), tally.end());
    for (const auto& [page, one] : tally) {
        if (!out.empty() && out.back().first == page) {
            out.back().second += one;
        } else {
            out.emplace_back(page, one);
        }
    }
    return out;
}

PrefixIndex build_prefix_index(std::shared_ptr<const SessionDataset> ds, std::size_t depth_cap) {
    return PrefixIndex(std::move(ds), depth_cap);
}

}  // namespace webnav
