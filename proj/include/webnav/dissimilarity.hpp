#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "webnav/session_store.hpp"

namespace webnav {

/// Number of positions among the first len(query) pages where query and
/// candidate differ. The candidate must be at least as long as the query;
/// shorter candidates throw std::invalid_argument.
std::size_t dissimilarity(std::span<const PageId> query, std::span<const PageId> candidate);

inline std::size_t dissimilarity(const Trajectory& query, const Trajectory& candidate) {
    return dissimilarity(std::span<const PageId>(query.pages), std::span<const PageId>(candidate.pages));
}

struct DissimilarityEntry {
    std::size_t trajectory = 0;  // index into the dataset
    std::size_t value = 0;
    bool operator==(const DissimilarityEntry&) const = default;
};

struct DissimilarityRow {
    Trajectory query;
    std::vector<DissimilarityEntry> entries;
    std::size_t omitted = 0;  // trajectories shorter than the query
};

DissimilarityRow dissimilarity_row(const Trajectory& query, const SessionDataset& ds);

}  // namespace webnav
