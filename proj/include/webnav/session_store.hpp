#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace webnav {

// 1-based page-category id.
using PageId = std::uint32_t;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A page id outside the catalog.
class RangeError : public std::out_of_range {
public:
    RangeError(std::size_t line, const std::string& what)
        : std::out_of_range("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct PageCategory {
    PageId id = 0;
    std::string name;
};

/// Ordered page-category names; ids are positions + 1.
class Catalog {
public:
    Catalog() = default;
    explicit Catalog(std::vector<std::string> names);

    /// The 17 msnbc categories in their documented order.
    static Catalog msnbc();

    std::size_t size() const noexcept { return names_.size(); }
    bool contains(PageId id) const noexcept { return id >= 1 && id <= names_.size(); }
    const std::string& name(PageId id) const { return names_.at(id - 1); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::vector<PageCategory> categories() const;

    bool operator==(const Catalog&) const = default;

private:
    std::vector<std::string> names_;
};

/// One user session.
struct Trajectory {
    std::vector<PageId> pages;

    std::size_t size() const noexcept { return pages.size(); }
    std::span<const PageId> prefix(std::size_t m) const {
        return std::span<const PageId>(pages).first(m);
    }
    bool operator==(const Trajectory&) const = default;
};

struct SessionDataset {
    Catalog catalog;
    std::vector<Trajectory> trajectories;
    std::string provenance;

    std::size_t size() const noexcept { return trajectories.size(); }
    bool empty() const noexcept { return trajectories.empty(); }
    bool operator==(const SessionDataset&) const = default;
};

/// Reads the `.seq` format: optional `%` comment lines, an optional header of
/// category names, then one whitespace-separated session per line. Blank lines
/// are skipped; anything else malformed aborts the whole parse.
SessionDataset parse_dataset(std::istream& in, std::string provenance = {});
SessionDataset load_dataset_file(const std::string& path);

/// Writes a dataset back out in `.seq` form (header line included).
void write_seq(std::ostream& out, const SessionDataset& ds);

/// How a session's length is measured. `pages` counts requests;
/// `distinct_pages` counts distinct categories within the session.
enum class LengthMeasure { pages, distinct_pages };

std::size_t session_length(const Trajectory& t, LengthMeasure measure = LengthMeasure::pages);

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

/// Keeps trajectories with min_len <= length <= max_len. Throws
/// std::invalid_argument when min_len is 0 or exceeds max_len.
SessionDataset filter_by_length(const SessionDataset& ds, std::size_t min_len, std::size_t max_len,
                                LengthMeasure measure = LengthMeasure::pages);

struct HistogramRow {
    std::size_t length = 0;
    std::size_t users = 0;
    double fraction = 0.0;  // full precision; round only for display

    double percent_rounded() const;  // 2 decimals
};

struct LengthHistogram {
    std::vector<HistogramRow> rows;  // ascending by length
    std::size_t total = 0;
};

LengthHistogram visit_length_histogram(const SessionDataset& ds,
                                       LengthMeasure measure = LengthMeasure::pages);

/// Parses "1,3,4" into page ids. Throws std::invalid_argument on malformed or
/// zero ids; range checks against a catalog are left to the caller.
std::vector<PageId> parse_prefix(const std::string& text);
std::string format_prefix(std::span<const PageId> pages);

}  // namespace webnav
