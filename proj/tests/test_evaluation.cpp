#include <random>
#include <set>

#include "doctest.h"
#include "support/synthetic.hpp"
#include "webnav/evaluation.hpp"

using namespace webnav;
using webnav::testing::traj;

namespace {

// Highest tally, smallest page on ties; 0 when empty.
PageId oracle_argmax(const std::map<PageId, std::uint64_t>& counts) {
    PageId best = 0;
    std::uint64_t best_n = 0;
    for (const auto& [page, n] : counts) {
        if (n > best_n) {
            best = page;
            best_n = n;
        }
    }
    return best;
}

// Recomputes one CV fold's successes by linear scans over the training
// sessions, without the index, cluster or Markov code.
std::size_t oracle_fold_successes(const SessionDataset& filtered, const std::vector<std::size_t>& fold, std::size_t f,
                                  const EvalTask& task, const PredictorParams& params, bool kmm) {
    SessionDataset train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < fold.size(); ++i) {
        if (fold[i] == f) {
            test.push_back(i);
        } else {
            train.trajectories.push_back(filtered.trajectories[i]);
        }
    }
    std::size_t successes = 0;
    for (auto ti : test) {
        const auto& t = filtered.trajectories[ti];
        const auto [plen, truth_pos] = task.split(t);
        const std::vector<PageId> prefix(t.pages.begin(), t.pages.begin() + static_cast<std::ptrdiff_t>(plen));

        std::map<PageId, std::uint64_t> next;
        std::uint64_t support = 0, best = 0;
        for (auto m : webnav::testing::scan_cluster(train, prefix)) {
            const auto& p = train.trajectories[m].pages;
            if (p.size() > plen) {
                ++next[p[plen]];
                ++support;
            }
        }
        for (const auto& e : next) best = std::max(best, e.second);
        const bool gate = support > 0 && support >= params.min_support &&
                          static_cast<double>(best) / static_cast<double>(support) >= params.threshold;
        PageId guess = 0;
        if (gate) {
            guess = oracle_argmax(next);
        } else if (kmm) {
            for (std::size_t j = std::min(params.k, prefix.size()) + 1; j-- > 0;) {
                const std::vector<PageId> ctx(prefix.end() - static_cast<std::ptrdiff_t>(j), prefix.end());
                const auto counts = webnav::testing::scan_next_counts(train, ctx);
                if (!counts.empty()) {
                    guess = oracle_argmax(counts);
                    break;
                }
            }
        }
        successes += guess != 0 && guess == t.pages[truth_pos];
    }
    return successes;
}

}  // namespace

TEST_CASE("task parsing and admission") {
    auto t = EvalTask::parse("visit:4");
    CHECK(t.mode == TaskMode::exact_visit);
    CHECK(t.visit == 4);
    CHECK(t.max_len == kUnbounded);
    CHECK(t.admits(traj({1, 2, 3, 4})));
    CHECK_FALSE(t.admits(traj({1, 2, 3})));
    CHECK(t.split(traj({1, 2, 3, 4, 5})) == std::pair<std::size_t, std::size_t>{3, 3});

    t = EvalTask::parse("mixed:3-8");
    CHECK(t.mode == TaskMode::next_after_prefix);
    CHECK(t.min_len == 3);
    CHECK(t.max_len == 8);
    CHECK_FALSE(t.admits(traj({1, 2})));
    CHECK(t.split(traj({1, 2, 3, 4, 5})) == std::pair<std::size_t, std::size_t>{4, 4});

    t = EvalTask::parse("visit:5:3-inf");
    CHECK(t.min_len == 3);
    CHECK(t.max_len == kUnbounded);

    CHECK(EvalTask::parse("mixed").admits(traj({1, 2})));
    CHECK_FALSE(EvalTask::parse("mixed").admits(traj({1})));

    for (const char* bad : {"visit:1", "visit:x", "visit", "foo", "mixed:8-3", "mixed:3", "visit:4:0-5"}) {
        CHECK_THROWS_AS(EvalTask::parse(bad), std::invalid_argument);
    }
}

TEST_CASE("CV folds partition the dataset") {
    for (std::size_t n : {5u, 7u, 100u, 1001u}) {
        for (std::size_t folds : {2u, 3u, 5u}) {
            if (folds > n) continue;
            const auto a = cv_fold_assignment(n, folds, 42);
            REQUIRE(a.size() == n);
            std::vector<std::size_t> sizes(folds, 0);
            for (auto f : a) {
                REQUIRE(f < folds);
                ++sizes[f];
            }
            const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
            CHECK(*hi - *lo <= 1);
            CHECK(a == cv_fold_assignment(n, folds, 42));
        }
    }
    CHECK(cv_fold_assignment(1000, 5, 1) != cv_fold_assignment(1000, 5, 2));
    CHECK_THROWS_AS(cv_fold_assignment(10, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(cv_fold_assignment(3, 5, 0), std::invalid_argument);
}

TEST_CASE("bootstrap draws") {
    for (std::size_t r = 0; r < 20; ++r) {
        const auto d = bootstrap_draw(50, 7, r);
        CHECK(d.train.size() == 50);
        std::set<std::size_t> drawn(d.train.begin(), d.train.end());
        for (auto i : d.out_of_bag) CHECK(drawn.count(i) == 0);
        CHECK(drawn.size() + d.out_of_bag.size() == 50);
        CHECK_FALSE(d.out_of_bag.empty());
        CHECK(d.train == bootstrap_draw(50, 7, r).train);
    }
    // With two sessions half of all draws cover both; those are redrawn.
    std::size_t redraws = 0;
    for (std::size_t r = 0; r < 40; ++r) {
        const auto d = bootstrap_draw(2, 3, r);
        CHECK(d.out_of_bag.size() == 1);
        redraws += d.redraws;
    }
    CHECK(redraws > 0);
    CHECK_THROWS_AS(bootstrap_draw(1, 0, 0), std::invalid_argument);
}

TEST_CASE("cross-validation matches the brute-force oracle") {
    std::mt19937 rng(606);
    for (int round = 0; round < 6; ++round) {
        const auto ds = webnav::testing::random_dataset(rng, 300, 3, 7);
        const EvalTask task = round % 2 ? EvalTask::parse("mixed:2-7") : EvalTask::parse("visit:3");
        const auto filtered = task_dataset(ds, task);
        if (filtered.size() < 5) continue;

        PredictorParams params;
        params.threshold = 0.3;
        params.min_support = 2;
        for (bool kmm : {false, true}) {
            EvalConfig config;
            config.seed = 1000 + static_cast<std::uint64_t>(round);
            config.kmm_enabled = kmm;
            const auto rep = cross_validate(ds, task, params, config);
            const auto fold = cv_fold_assignment(filtered.size(), 5, config.seed);
            REQUIRE(rep.breakdown.size() == 5);
            std::size_t trials = 0;
            for (std::size_t f = 0; f < 5; ++f) {
                CHECK(rep.breakdown[f].successes ==
                      oracle_fold_successes(filtered, fold, f, task, params, kmm));
                CHECK(rep.breakdown[f].train_size + rep.breakdown[f].trials == filtered.size());
                trials += rep.breakdown[f].trials;
            }
            CHECK(trials == filtered.size());
            CHECK(rep.trials == filtered.size());
        }
    }
}

TEST_CASE("CV report invariants on clickstream-like data") {
    const auto ds = webnav::testing::msnbc_like(20000, 5);
    const auto task = EvalTask::parse("visit:4:3-13");
    PredictorParams params;
    EvalConfig config;
    config.seed = 42;

    config.kmm_enabled = false;
    const auto off = cross_validate(ds, task, params, config);
    config.kmm_enabled = true;
    const auto on = cross_validate(ds, task, params, config);

    CHECK(on.success_rate >= off.success_rate);
    for (std::size_t f = 0; f < 5; ++f) {
        CHECK(on.breakdown[f].successes >= off.breakdown[f].successes);
        CHECK(on.breakdown[f].gate_failures == off.breakdown[f].gate_failures);
        CHECK(on.breakdown[f].cluster_size_sum == off.breakdown[f].cluster_size_sum);
    }

    double weighted = 0.0;
    for (const auto& s : on.breakdown) weighted += s.success_rate() * static_cast<double>(s.trials);
    CHECK(std::abs(weighted / static_cast<double>(on.trials) - on.success_rate) < 1e-9);
    CHECK(on.top_n_success[0] == on.success_rate);
    CHECK(on.top_n_success[0] <= on.top_n_success[1]);
    CHECK(on.top_n_success[1] <= on.top_n_success[2]);
    CHECK(on.success_rate >= 0.0);
    CHECK(on.success_rate <= 1.0);
    CHECK(on.mean_cluster_size > 0.0);
    CHECK(on.params == params);
    CHECK(on.seed == 42);
}

TEST_CASE("evaluation is deterministic across runs and thread counts") {
    const auto ds = webnav::testing::msnbc_like(6000, 9);
    const auto task = EvalTask::parse("mixed:3-8");
    PredictorParams params;
    EvalConfig config;
    config.seed = 7;
    config.threads = 1;
    const auto cv1 = cross_validate(ds, task, params, config);
    CHECK(cross_validate(ds, task, params, config) == cv1);
    config.threads = 4;
    CHECK(cross_validate(ds, task, params, config) == cv1);

    config.splits = 12;
    config.threads = 1;
    const auto bs1 = bootstrap_validate(ds, task, params, config);
    config.threads = 3;
    CHECK(bootstrap_validate(ds, task, params, config) == bs1);
    config.seed = 8;
    CHECK_FALSE(bootstrap_validate(ds, task, params, config) == bs1);
}

TEST_CASE("bootstrap report") {
    const auto ds = webnav::testing::msnbc_like(4000, 3);
    const auto task = EvalTask::parse("visit:4");
    const auto filtered = task_dataset(ds, task);
    EvalConfig config;
    config.splits = 10;
    config.kmm_enabled = false;
    const auto rep = bootstrap_validate(ds, task, {}, config);
    CHECK(rep.method == EvalMethod::bootstrap);
    REQUIRE(rep.breakdown.size() == 10);
    double mean = 0.0;
    for (std::size_t r = 0; r < 10; ++r) {
        const auto& s = rep.breakdown[r];
        CHECK(s.train_size == filtered.size());
        CHECK(s.trials == bootstrap_draw(filtered.size(), config.seed, r).out_of_bag.size());
        mean += s.success_rate();
    }
    CHECK(std::abs(mean / 10.0 - rep.success_rate) < 1e-12);

    config.splits = 1;
    CHECK(bootstrap_validate(ds, task, {}, config) == bootstrap_validate(ds, task, {}, config));
    config.splits = 0;
    CHECK_THROWS_AS(bootstrap_validate(ds, task, {}, config), std::invalid_argument);
}

TEST_CASE("argument errors") {
    const auto ds = webnav::testing::msnbc_like(100, 1);
    EvalConfig config;
    config.splits = 1;
    CHECK_THROWS_AS(cross_validate(ds, EvalTask::parse("visit:4"), {}, config), std::invalid_argument);
    config.splits = 5;
    CHECK_THROWS_AS(cross_validate(ds, EvalTask::parse("visit:4:50-60"), {}, config), std::invalid_argument);
    SessionDataset tiny;
    tiny.catalog = Catalog::msnbc();
    tiny.trajectories = {traj({1, 2, 3, 4}), traj({1, 2, 3, 5})};
    CHECK_THROWS_AS(cross_validate(tiny, EvalTask::parse("visit:4"), {}, config), std::invalid_argument);
}
