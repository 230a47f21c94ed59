#include <random>

#include "doctest.h"
#include "support/synthetic.hpp"
#include "webnav/prefix_index.hpp"

using namespace webnav;
using webnav::testing::traj;

namespace {

std::shared_ptr<const SessionDataset> share(SessionDataset ds) {
    return std::make_shared<const SessionDataset>(std::move(ds));
}

void check_counts(const PrefixIndex& idx) {
    for (const auto& n : idx.nodes()) {
        std::size_t below = 0;
        for (const auto& c : idx.children(n)) {
            below += c.pass;
            CHECK(c.depth == n.depth + 1);
        }
        CHECK(n.pass == below + n.ends + n.continuing);
        CHECK(n.pass == n.end - n.begin);
        if (n.depth < idx.depth_cap()) CHECK(n.continuing == 0);
    }
}

}  // namespace

TEST_CASE("index lookup equals a linear scan on random data") {
    std::mt19937 rng(2024);
    for (int round = 0; round < 40; ++round) {
        const auto cap = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
        auto ds = share(webnav::testing::random_dataset(rng, 500, 3, 8));
        const PrefixIndex idx(ds, cap);
        check_counts(idx);
        CHECK(idx.root().pass == ds->size());
        for (int q = 0; q < 25; ++q) {
            const auto prefix = webnav::testing::random_prefix(rng, 3, 9);
            const auto expected = webnav::testing::scan_cluster(*ds, prefix);
            CHECK(idx.lookup(prefix) == expected);
            CHECK(idx.count(prefix) == expected.size());
        }
    }
}

TEST_CASE("next_page_counts equals a scan, including past the depth cap") {
    std::mt19937 rng(99);
    for (int round = 0; round < 30; ++round) {
        auto ds = share(webnav::testing::random_dataset(rng, 300, 3, 8));
        const PrefixIndex idx(ds, 3);
        for (int q = 0; q < 20; ++q) {
            const auto prefix = webnav::testing::random_prefix(rng, 3, 6);
            std::map<PageId, std::size_t> expected;
            for (auto i : webnav::testing::scan_cluster(*ds, prefix)) {
                const auto& p = ds->trajectories[i].pages;
                if (p.size() > prefix.size()) ++expected[p[prefix.size()]];
            }
            const auto got = idx.next_page_counts(prefix);
            CHECK(std::vector<std::pair<PageId, std::size_t>>(expected.begin(), expected.end()) == got);
        }
    }
}

TEST_CASE("empty dataset: every lookup is empty") {
    const PrefixIndex idx(share(SessionDataset{}));
    CHECK(idx.lookup(std::vector<PageId>{1}).empty());
    CHECK(idx.lookup(std::vector<PageId>{}).empty());
    CHECK(idx.count(std::vector<PageId>{1, 2}) == 0);
    CHECK(idx.next_page_counts(std::vector<PageId>{}).empty());
}

TEST_CASE("duplicates keep their multiplicity") {
    SessionDataset ds;
    ds.catalog = webnav::testing::numbered_catalog(3);
    ds.trajectories = {traj({1, 2, 3}), traj({2}), traj({1, 2, 3})};
    const PrefixIndex idx(share(ds));
    CHECK(idx.lookup(std::vector<PageId>{1, 2}) == std::vector<std::size_t>{0, 2});
    CHECK(idx.count(std::vector<PageId>{1, 2}) == 2);
}

TEST_CASE("long sessions are flagged as continuing at the cap") {
    SessionDataset ds;
    ds.catalog = webnav::testing::numbered_catalog(3);
    ds.trajectories = {traj({1, 2, 3, 1}), traj({1, 2}), traj({1, 2, 3})};
    const PrefixIndex idx(share(ds), 2);
    const auto* node = idx.find(std::vector<PageId>{1, 2});
    REQUIRE(node != nullptr);
    CHECK(node->ends == 1);
    CHECK(node->continuing == 2);
    CHECK(idx.lookup(std::vector<PageId>{1, 2, 3}) == std::vector<std::size_t>{0, 2});
    CHECK(idx.lookup(std::vector<PageId>{1, 2, 3, 1}) == std::vector<std::size_t>{0});
    CHECK(idx.lookup(std::vector<PageId>{1, 2, 2}).empty());
}

TEST_CASE("invalid construction") {
    CHECK_THROWS_AS(PrefixIndex(nullptr), std::invalid_argument);
    CHECK_THROWS_AS(PrefixIndex(share(SessionDataset{}), 0), std::invalid_argument);
}
