#include "webnav/dissimilarity.hpp"

#include <stdexcept>
#include <string>

namespace webnav {

std::size_t dissimilarity(std::span<const PageId> query, std::span<const PageId> candidate) {
    if (candidate.size() < query.size()) {
        throw std::invalid_argument("dissimilarity: candidate of length " +
                                    std::to_string(candidate.size()) + " is shorter than query of length " +
                                    std::to_string(query.size()));
    }
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < query.size(); ++i) mismatches += query[i] != candidate[i];
    return mismatches;
}

DissimilarityRow dissimilarity_row(const Trajectory& query, const SessionDataset& ds) {
    DissimilarityRow row;
    row.query = query;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& t = ds.trajectories[i];
        if (t.size() < query.size()) {
            ++row.omitted;
            continue;
        }
        row.entries.push_back({i, dissimilarity(query, t)});
    }
    return row;
}

}  // namespace webnav
