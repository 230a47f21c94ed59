#include <random>

#include "doctest.h"
#include "support/synthetic.hpp"
#include "webnav/dissimilarity.hpp"

using namespace webnav;
using webnav::testing::traj;

TEST_CASE("worked sample trajectories") {
    const auto query = traj({1, 2, 3});
    CHECK(dissimilarity(query, traj({1, 2, 3, 4, 5})) == 0);
    CHECK(dissimilarity(query, traj({1, 2, 3, 5, 6})) == 0);
    CHECK(dissimilarity(query, traj({2, 3, 4})) == 3);
    CHECK(dissimilarity(query, traj({6, 7, 8, 9, 10})) == 3);
    CHECK(dissimilarity(query, traj({12, 13, 14, 15, 16})) == 3);
    CHECK(dissimilarity(query, traj({1, 2, 3})) == 0);
    CHECK(dissimilarity(query, traj({1, 9, 3, 7})) == 1);
}

TEST_CASE("shorter candidate is rejected") {
    CHECK_THROWS_AS(dissimilarity(traj({1, 2, 3}), traj({1, 2})), std::invalid_argument);
}

TEST_CASE("row over the sample dataset") {
    const auto ds = webnav::testing::sample_sessions();
    const auto row = dissimilarity_row(traj({1, 2, 3}), ds);
    CHECK(row.omitted == 0);
    const std::vector<DissimilarityEntry> expected = {{0, 0}, {1, 0}, {2, 3}, {3, 3}, {4, 3}};
    CHECK(row.entries == expected);
}

TEST_CASE("row with a query longer than every trajectory") {
    const auto ds = webnav::testing::sample_sessions();
    const auto row = dissimilarity_row(traj({1, 2, 3, 4, 5, 6}), ds);
    CHECK(row.entries.empty());
    CHECK(row.omitted == ds.size());
}

TEST_CASE("row equals per-pair calls and the properties hold") {
    std::mt19937 rng(5);
    for (int round = 0; round < 30; ++round) {
        const auto ds = webnav::testing::random_dataset(rng, 120, 3, 6);
        const Trajectory query{webnav::testing::random_prefix(rng, 3, 4)};
        const auto row = dissimilarity_row(query, ds);
        std::size_t k = 0, omitted = 0;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const auto& t = ds.trajectories[i];
            if (t.size() < query.size()) {
                ++omitted;
                continue;
            }
            REQUIRE(k < row.entries.size());
            CHECK(row.entries[k].trajectory == i);
            const auto d = dissimilarity(query, t);
            CHECK(row.entries[k].value == d);
            CHECK(d <= query.size());
            const bool same_prefix = std::equal(query.pages.begin(), query.pages.end(), t.pages.begin());
            CHECK((d == 0) == same_prefix);
            ++k;
        }
        CHECK(k == row.entries.size());
        CHECK(omitted == row.omitted);
    }
}

TEST_CASE("equal-length symmetry and the triangle inequality on prefixes") {
    std::mt19937 rng(17);
    for (int round = 0; round < 500; ++round) {
        const auto m = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
        auto make = [&] {
            std::vector<PageId> p(m);
            for (auto& x : p) x = std::uniform_int_distribution<PageId>(1, 3)(rng);
            return Trajectory{p};
        };
        const auto a = make(), b = make(), c = make();
        CHECK(dissimilarity(a, b) == dissimilarity(b, a));
        CHECK(dissimilarity(a, c) <= dissimilarity(a, b) + dissimilarity(b, c));
    }
}
