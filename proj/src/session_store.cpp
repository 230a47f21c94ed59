#include "webnav/session_store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <string_view>

namespace webnav {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

bool parse_positive(std::string_view token, PageId& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && out >= 1;
}

bool looks_numeric(std::string_view token) {
    return !token.empty() && std::all_of(token.begin(), token.end(), [](char c) {
        return (c >= '0' && c <= '9') || c == '-' || c == '+';
    });
}

}  // namespace

Catalog::Catalog(std::vector<std::string> names) : names_(std::move(names)) {
    for (const auto& n : names_) {
        if (n.empty()) throw std::invalid_argument("catalog: empty category name");
    }
}

Catalog Catalog::msnbc() {
    return Catalog({"frontpage", "news", "tech", "local", "opinion", "on-air", "misc", "weather",
                    "health", "living", "business", "sports", "summary", "bbs", "travel",
                    "msn-news", "msn-sports"});
}

std::vector<PageCategory> Catalog::categories() const {
    std::vector<PageCategory> out;
    out.reserve(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) {
        out.push_back({static_cast<PageId>(i + 1), names_[i]});
    }
    return out;
}

SessionDataset parse_dataset(std::istream& in, std::string provenance) {
    SessionDataset ds;
    ds.provenance = std::move(provenance);

    std::string line;
    std::size_t line_no = 0;
    bool in_preamble = true;  // comments and the header may only appear before data
    bool have_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;

        if (in_preamble) {
            if (tokens.front().starts_with('%')) continue;
            const bool any_numeric = std::any_of(tokens.begin(), tokens.end(), looks_numeric);
            if (!any_numeric && !have_header) {
                std::vector<std::string> names(tokens.begin(), tokens.end());
                ds.catalog = Catalog(std::move(names));
                have_header = true;
                continue;
            }
            in_preamble = false;
            if (!have_header) ds.catalog = Catalog::msnbc();
        }

        Trajectory t;
        t.pages.reserve(tokens.size());
        for (auto token : tokens) {
            PageId id = 0;
            if (!parse_positive(token, id)) {
                throw ParseError(line_no, "not a positive integer page id: '" + std::string(token) + "'");
            }
            if (!ds.catalog.contains(id)) {
                throw RangeError(line_no, "page id " + std::to_string(id) + " exceeds catalog size " +
                                              std::to_string(ds.catalog.size()));
            }
            t.pages.push_back(id);
        }
        ds.trajectories.push_back(std::move(t));
    }
    if (in.bad()) throw std::runtime_error("read error while parsing dataset");
    if (in_preamble && !have_header) ds.catalog = Catalog::msnbc();
    return ds;
}

SessionDataset load_dataset_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    return parse_dataset(in, path);
}

void write_seq(std::ostream& out, const SessionDataset& ds) {
    out << "% Different categories found in input file:\n\n";
    for (std::size_t i = 0; i < ds.catalog.size(); ++i) {
        out << (i ? " " : "") << ds.catalog.names()[i];
    }
    out << "\n\n% Sequences:\n\n";
    for (const auto& t : ds.trajectories) {
        for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << t.pages[i];
        out << '\n';
    }
}

std::size_t session_length(const Trajectory& t, LengthMeasure measure) {
    if (measure == LengthMeasure::pages) return t.size();
    std::vector<PageId> sorted = t.pages;
    std::sort(sorted.begin(), sorted.end());
    return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

SessionDataset filter_by_length(const SessionDataset& ds, std::size_t min_len, std::size_t max_len,
                                LengthMeasure measure) {
    if (min_len < 1) throw std::invalid_argument("filter_by_length: min_len must be >= 1");
    if (min_len > max_len) {
        throw std::invalid_argument("filter_by_length: min_len " + std::to_string(min_len) +
                                    " exceeds max_len " + std::to_string(max_len));
    }
    SessionDataset out;
    out.catalog = ds.catalog;
    out.provenance = ds.provenance;
    for (const auto& t : ds.trajectories) {
        const auto len = session_length(t, measure);
        if (len >= min_len && len <= max_len) out.trajectories.push_back(t);
    }
    return out;
}

double HistogramRow::percent_rounded() const { return std::round(fraction * 10000.0) / 100.0; }

LengthHistogram visit_length_histogram(const SessionDataset& ds, LengthMeasure measure) {
    std::map<std::size_t, std::size_t> counts;
    for (const auto& t : ds.trajectories) ++counts[session_length(t, measure)];

    LengthHistogram h;
    h.total = ds.size();
    for (const auto& [len, users] : counts) {
        h.rows.push_back({len, users, static_cast<double>(users) / static_cast<double>(h.total)});
    }
    return h;
}

std::vector<PageId> parse_prefix(const std::string& text) {
    std::vector<PageId> pages;
    if (text.empty()) return pages;
    std::string_view rest(text);
    while (true) {
        const auto comma = rest.find(',');
        const auto token = rest.substr(0, comma);
        PageId id = 0;
        if (!parse_positive(token, id)) {
            throw std::invalid_argument("invalid page id '" + std::string(token) +
                                        "' (ids are 1-based integers)");
        }
        pages.push_back(id);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return pages;
}

std::string format_prefix(std::span<const PageId> pages) {
    std::string out;
    for (std::size_t i = 0; i < pages.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(pages[i]);
    }
    return out;
}

}  // namespace webnav
