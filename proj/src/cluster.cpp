#include "webnav/cluster.hpp"

#include <algorithm>
#include <stdexcept>

namespace webnav {

APDistribution APDistribution::from_counts(std::vector<std::pair<PageId, std::uint64_t>> counts) {
    std::sort(counts.begin(), counts.end());
    APDistribution d;
    for (const auto& [page, n] : counts) {
        if (n == 0) continue;
        if (!d.counts_.empty() && d.counts_.back().first == page) {
            d.counts_.back().second += n;
        } else {
            d.counts_.emplace_back(page, n);
        }
        d.support_ += n;
    }
    return d;
}

std::uint64_t APDistribution::count(PageId page) const {
    auto it = std::lower_bound(counts_.begin(), counts_.end(), page,
                               [](const auto& e, PageId p) { return e.first < p; });
    return (it != counts_.end() && it->first == page) ? it->second : 0;
}

double APDistribution::probability(PageId page) const {
    if (support_ == 0) return 0.0;
    return static_cast<double>(count(page)) / static_cast<double>(support_);
}

std::vector<APDistribution::Entry> APDistribution::ranked() const {
    std::vector<Entry> out;
    out.reserve(counts_.size());
    for (const auto& [page, n] : counts_) {
        out.push_back({page, n, static_cast<double>(n) / static_cast<double>(support_)});
    }
    // Compare counts, not doubles: same support, so the order is exact.
    std::stable_sort(out.begin(), out.end(),
                     [](const Entry& a, const Entry& b) { return a.count > b.count; });
    return out;
}

std::vector<APDistribution::Entry> APDistribution::top(std::size_t n) const {
    auto r = ranked();
    if (r.size() > n) r.resize(n);
    return r;
}

PageId APDistribution::argmax() const {
    PageId best = 0;
    std::uint64_t best_count = 0;
    for (const auto& [page, n] : counts_) {
        if (n > best_count) {
            best = page;
            best_count = n;
        }
    }
    return best;
}

double APDistribution::max_probability() const {
    if (support_ == 0) return 0.0;
    std::uint64_t best = 0;
    for (const auto& e : counts_) best = std::max(best, e.second);
    return static_cast<double>(best) / static_cast<double>(support_);
}

Cluster specific_cluster(const Trajectory& query, const PrefixIndex& index) {
    if (query.pages.empty()) throw std::invalid_argument("specific_cluster: empty query");
    Cluster c;
    c.query = query;
    c.members = index.lookup(query.pages);
    const auto& trajs = index.dataset().trajectories;
    for (auto m : c.members) c.contributing += trajs[m].size() > query.size();
    return c;
}

APDistribution associated_probabilities(const Cluster& cluster, const SessionDataset& ds) {
    const auto m = cluster.query.size();
    std::vector<std::pair<PageId, std::uint64_t>> next;
    for (auto idx : cluster.members) {
        const auto& pages = ds.trajectories.at(idx).pages;
        if (pages.size() > m) next.emplace_back(pages[m], 1);
    }
    return APDistribution::from_counts(std::move(next));
}

APDistribution cluster_distribution(std::span<const PageId> query, const PrefixIndex& index) {
    std::vector<std::pair<PageId, std::uint64_t>> counts;
    for (const auto& [page, n] : index.next_page_counts(query)) counts.emplace_back(page, n);
    return APDistribution::from_counts(std::move(counts));
}

}  // namespace webnav
