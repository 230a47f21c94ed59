#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "webnav/markov.hpp"
#include "webnav/session_store.hpp"

namespace webnav {

class StoreError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// On-disk bundle of a dataset, its build metadata and optionally a trained
/// Markov model.
///
/// Layout (integers are unsigned LEB128 varints, strings are a varint byte
/// length followed by the bytes):
///
///     "webnav-store 1\n"
///     metadata:     count, then (key, value) string pairs in key order
///     provenance:   string
///     catalog:      count, then names
///     trajectories: count, then for each: length, page ids
///     markov:       one byte 0/1; if 1: order, trained_on, then for each
///                   table j = 0..order: context count, then for each context
///                   j page ids, next count, (page, tally) pairs
///     "end\n"
///
/// Writing a loaded store reproduces the original bytes.
struct ModelStore {
    SessionDataset dataset;
    std::map<std::string, std::string> metadata;
    std::optional<MarkovModel> markov;

    bool operator==(const ModelStore&) const = default;
};

inline constexpr const char* kStoreMagic = "webnav-store 1\n";

void save_store(std::ostream& out, const ModelStore& store);
ModelStore load_store(std::istream& in);

void save_store_file(const std::string& path, const ModelStore& store);
ModelStore load_store_file(const std::string& path);

}  // namespace webnav
