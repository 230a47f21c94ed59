#include "webnav/model_store.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace webnav {

namespace {

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void varint(std::uint64_t v) {
        char buf[10];
        int n = 0;
        do {
            auto byte = static_cast<unsigned char>(v & 0x7f);
            v >>= 7;
            if (v) byte |= 0x80;
            buf[n++] = static_cast<char>(byte);
        } while (v);
        out_.write(buf, n);
    }
    void string(const std::string& s) {
        varint(s.size());
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }
    void raw(const char* s) { out_.write(s, static_cast<std::streamsize>(std::strlen(s))); }
    void byte(unsigned char b) { out_.put(static_cast<char>(b)); }

private:
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::uint64_t varint() {
        std::uint64_t v = 0;
        for (int shift = 0; shift < 64; shift += 7) {
            const int c = in_.get();
            if (c == std::char_traits<char>::eof()) throw StoreError("store truncated");
            v |= static_cast<std::uint64_t>(c & 0x7f) << shift;
            if (!(c & 0x80)) return v;
        }
        throw StoreError("store corrupt: varint overflow");
    }
    // Bounds a count read from the file so a corrupt length cannot trigger a
    // huge allocation.
    std::size_t length(std::uint64_t limit = std::uint64_t{1} << 40) {
        const auto v = varint();
        if (v > limit) throw StoreError("store corrupt: implausible length");
        return static_cast<std::size_t>(v);
    }
    std::string string() {
        const auto n = length(std::uint64_t{1} << 30);
        std::string s(n, '\0');
        if (!in_.read(s.data(), static_cast<std::streamsize>(n))) throw StoreError("store truncated");
        return s;
    }
    void expect(const char* literal) {
        const auto n = std::strlen(literal);
        std::string s(n, '\0');
        if (!in_.read(s.data(), static_cast<std::streamsize>(n)) || s != literal) {
            throw StoreError(std::string("store corrupt: expected '") + literal + "'");
        }
    }
    unsigned char byte() {
        const int c = in_.get();
        if (c == std::char_traits<char>::eof()) throw StoreError("store truncated");
        return static_cast<unsigned char>(c);
    }

private:
    std::istream& in_;
};

}  // namespace

void save_store(std::ostream& out, const ModelStore& store) {
    Writer w(out);
    w.raw(kStoreMagic);

    w.varint(store.metadata.size());
    for (const auto& [k, v] : store.metadata) {
        w.string(k);
        w.string(v);
    }
    w.string(store.dataset.provenance);

    const auto& names = store.dataset.catalog.names();
    w.varint(names.size());
    for (const auto& n : names) w.string(n);

    w.varint(store.dataset.trajectories.size());
    for (const auto& t : store.dataset.trajectories) {
        w.varint(t.size());
        for (auto p : t.pages) w.varint(p);
    }

    w.byte(store.markov ? 1 : 0);
    if (store.markov) {
        const auto& m = *store.markov;
        w.varint(m.order());
        w.varint(m.trained_on());
        for (std::size_t j = 0; j <= m.order(); ++j) {
            const auto& table = m.table(j);
            w.varint(table.size());
            for (const auto& [ctx, counts] : table) {
                for (auto p : ctx) w.varint(p);
                w.varint(counts.size());
                for (const auto& [page, n] : counts) {
                    w.varint(page);
                    w.varint(n);
                }
            }
        }
    }
    w.raw("end\n");
    if (!out) throw StoreError("failed writing store");
}

ModelStore load_store(std::istream& in) {
    Reader r(in);
    r.expect(kStoreMagic);
    ModelStore store;

    const auto nmeta = r.length();
    for (std::size_t i = 0; i < nmeta; ++i) {
        auto k = r.string();
        store.metadata[std::move(k)] = r.string();
    }
    store.dataset.provenance = r.string();

    std::vector<std::string> names(r.length(1u << 20));
    for (auto& n : names) n = r.string();
    try {
        store.dataset.catalog = Catalog(std::move(names));
    } catch (const std::invalid_argument& e) {
        throw StoreError(std::string("store corrupt: ") + e.what());
    }

    const auto ntraj = r.length();
    store.dataset.trajectories.reserve(std::min<std::size_t>(ntraj, 1u << 24));
    for (std::size_t i = 0; i < ntraj; ++i) {
        Trajectory t;
        t.pages.resize(r.length(1u << 30));
        for (auto& p : t.pages) {
            const auto v = r.varint();
            if (v == 0 || v > store.dataset.catalog.size()) {
                throw StoreError("store corrupt: page id out of catalog range");
            }
            p = static_cast<PageId>(v);
        }
        store.dataset.trajectories.push_back(std::move(t));
    }

    if (r.byte()) {
        const auto order = r.length(64);
        MarkovModel m(order);
        m.set_trained_on(r.length());
        for (std::size_t j = 0; j <= order; ++j) {
            const auto nctx = r.length();
            for (std::size_t c = 0; c < nctx; ++c) {
                std::vector<PageId> ctx(j);
                for (auto& p : ctx) p = static_cast<PageId>(r.varint());
                NextCounts counts;
                const auto nnext = r.length();
                for (std::size_t e = 0; e < nnext; ++e) {
                    const auto page = static_cast<PageId>(r.varint());
                    counts[page] = r.varint();
                }
                m.set_counts(j, std::move(ctx), std::move(counts));
            }
        }
        store.markov = std::move(m);
    }
    r.expect("end\n");
    return store;
}

void save_store_file(const std::string& path, const ModelStore& store) {
    // Write to a sibling temp file first so a failed write leaves no store.
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StoreError("cannot open for writing: " + tmp);
        save_store(out, store);
        out.close();
        if (!out) throw StoreError("failed writing store: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

ModelStore load_store_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError("cannot open store: " + path);
    return load_store(in);
}

}  // namespace webnav
