#include "webnav/markov.hpp"

#include <stdexcept>

namespace webnav {

MarkovModel::MarkovModel(std::size_t order) : tables_(order + 1) {}

void MarkovModel::add(const Trajectory& t) {
    const auto& p = t.pages;
    for (std::size_t pos = 1; pos < p.size(); ++pos) {
        // pos pages precede p[pos]
        const std::size_t deepest = std::min(order(), pos);
        for (std::size_t j = 0; j <= deepest; ++j) {
            std::span<const PageId> ctx(p.data() + pos - j, j);
            auto it = tables_[j].find(ctx);
            if (it == tables_[j].end()) {
                it = tables_[j].emplace(std::vector<PageId>(ctx.begin(), ctx.end()), NextCounts{}).first;
            }
            ++it->second[p[pos]];
        }
    }
    ++trained_on_;
}

void MarkovModel::merge(const MarkovModel& other) {
    if (other.order() != order()) throw std::invalid_argument("MarkovModel::merge: order mismatch");
    for (std::size_t j = 0; j < tables_.size(); ++j) {
        for (const auto& [ctx, counts] : other.tables_[j]) {
            auto& mine = tables_[j][ctx];
            for (const auto& [page, n] : counts) mine[page] += n;
        }
    }
    trained_on_ += other.trained_on_;
}

MarkovPrediction MarkovModel::predict(std::span<const PageId> context, bool backoff,
                                      std::size_t max_order) const {
    const std::size_t start = std::min({order(), max_order, context.size()});
    for (std::size_t j = start + 1; j-- > 0;) {
        const auto ctx = context.last(j);
        auto it = tables_[j].find(ctx);
        if (it != tables_[j].end()) {
            std::vector<std::pair<PageId, std::uint64_t>> counts(it->second.begin(), it->second.end());
            return {APDistribution::from_counts(std::move(counts)), j};
        }
        if (!backoff) return {};
    }
    return {};
}

void MarkovModel::set_counts(std::size_t j, std::vector<PageId> context, NextCounts counts) {
    if (j >= tables_.size() || context.size() != j) {
        throw std::invalid_argument("MarkovModel::set_counts: context length does not match table");
    }
    tables_[j][std::move(context)] = std::move(counts);
}

MarkovModel train_kmm(const SessionDataset& ds, std::size_t k) {
    MarkovModel m(k);
    for (const auto& t : ds.trajectories) m.add(t);
    return m;
}

}  // namespace webnav
