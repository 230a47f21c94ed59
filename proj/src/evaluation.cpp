#include "webnav/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

namespace webnav {

namespace {

// std::uniform_int_distribution differs across standard libraries; this
// rejection sampler gives the same stream everywhere.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

std::mt19937_64 make_rng(std::initializer_list<std::uint64_t> parts) {
    std::vector<std::uint32_t> words;
    for (auto p : parts) {
        words.push_back(static_cast<std::uint32_t>(p));
        words.push_back(static_cast<std::uint32_t>(p >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

std::size_t resolve_threads(std::size_t requested, std::size_t jobs) {
    std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(n, jobs));
}

// Runs job(i) for i in [0, jobs); each result lands in its own slot so the
// outcome never depends on scheduling.
template <class Job>
void run_parallel(std::size_t jobs, std::size_t threads, Job&& job) {
    const auto workers = resolve_threads(threads, jobs);
    if (workers == 1) {
        for (std::size_t i = 0; i < jobs; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < jobs;) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

SessionDataset subset(const SessionDataset& ds, const std::vector<std::size_t>& picks) {
    SessionDataset out;
    out.catalog = ds.catalog;
    out.provenance = ds.provenance;
    out.trajectories.reserve(picks.size());
    for (auto i : picks) out.trajectories.push_back(ds.trajectories[i]);
    return out;
}

SplitResult run_trials(const SessionDataset& ds, const std::vector<std::size_t>& train,
                       const std::vector<std::size_t>& test, const EvalTask& task,
                       const PredictorParams& params, bool kmm_enabled) {
    auto train_ds = std::make_shared<const SessionDataset>(subset(ds, train));
    // The Markov tables are only consulted when the fallback may run.
    NavigationModel model(train_ds, kmm_enabled ? train_kmm(*train_ds, params.k) : MarkovModel(0));

    SplitResult r;
    r.train_size = train.size();
    std::set<std::vector<PageId>> clusters;
    for (auto ti : test) {
        const auto& t = ds.trajectories[ti];
        const auto [plen, truth_pos] = task.split(t);
        const auto prefix = t.prefix(plen);
        const PageId truth = t.pages[truth_pos];

        APDistribution dist;
        std::size_t cluster_size = 0;
        bool gate_ok = false;
        if (kmm_enabled) {
            auto p = predict_next(model, Trajectory{{prefix.begin(), prefix.end()}}, params);
            cluster_size = p.cluster_size;
            gate_ok = p.source == PredictionSource::cluster;
            dist = std::move(p.distribution);
        } else {
            cluster_size = model.index().count(prefix);
            auto ap = cluster_distribution(prefix, model.index());
            gate_ok = cluster_gate(ap, params);
            if (gate_ok) dist = std::move(ap);
        }

        ++r.trials;
        r.cluster_size_sum += cluster_size;
        if (cluster_size > 0) clusters.emplace(prefix.begin(), prefix.end());
        if (!gate_ok) ++r.gate_failures;
        const auto ranked = dist.top(3);
        for (std::size_t n = 0; n < 3; ++n) {
            const bool hit = std::any_of(ranked.begin(), ranked.begin() + std::min(n + 1, ranked.size()),
                                         [&](const auto& e) { return e.page == truth; });
            r.top_n_successes[n] += hit;
        }
        r.successes += !ranked.empty() && ranked.front().page == truth;
    }
    r.distinct_clusters = clusters.size();
    return r;
}

EvalReport make_report(EvalMethod method, const SessionDataset& filtered, const EvalTask& task,
                       const PredictorParams& params, const EvalConfig& config,
                       std::vector<SplitResult> splits) {
    EvalReport rep;
    rep.method = method;
    rep.splits = splits.size();
    rep.seed = config.seed;
    rep.params = params;
    rep.kmm_enabled = config.kmm_enabled;
    rep.task = task;
    rep.provenance = filtered.provenance;
    rep.filter = config.filter;
    rep.dataset_size = filtered.size();

    double distinct = 0.0;
    for (const auto& s : splits) {
        rep.trials += s.trials;
        rep.redraws += s.redraws;
        distinct += static_cast<double>(s.distinct_clusters);
    }
    rep.mean_distinct_clusters = splits.empty() ? 0.0 : distinct / static_cast<double>(splits.size());

    const auto ratio = [](std::size_t a, std::size_t b) {
        return b ? static_cast<double>(a) / static_cast<double>(b) : 0.0;
    };
    if (method == EvalMethod::cv) {
        // Pooled over folds: identical to the test-size-weighted fold mean.
        std::size_t succ = 0, gate = 0, csize = 0;
        std::array<std::size_t, 3> top{};
        for (const auto& s : splits) {
            succ += s.successes;
            gate += s.gate_failures;
            csize += s.cluster_size_sum;
            for (std::size_t n = 0; n < 3; ++n) top[n] += s.top_n_successes[n];
        }
        rep.success_rate = ratio(succ, rep.trials);
        for (std::size_t n = 0; n < 3; ++n) rep.top_n_success[n] = ratio(top[n], rep.trials);
        rep.mean_cluster_size = ratio(csize, rep.trials);
        rep.fallback_rate = ratio(gate, rep.trials);
    } else {
        const double count = static_cast<double>(splits.size());
        for (const auto& s : splits) {
            rep.success_rate += s.success_rate() / count;
            for (std::size_t n = 0; n < 3; ++n) rep.top_n_success[n] += ratio(s.top_n_successes[n], s.trials) / count;
            rep.mean_cluster_size += ratio(s.cluster_size_sum, s.trials) / count;
            rep.fallback_rate += ratio(s.gate_failures, s.trials) / count;
        }
    }
    rep.breakdown = std::move(splits);
    return rep;
}

}  // namespace

void EvalTask::validate() const {
    if (mode == TaskMode::exact_visit && visit < 2) throw std::invalid_argument("exact-visit task needs v >= 2");
    if (min_len < 1 || min_len > max_len) throw std::invalid_argument("task length band is empty or invalid");
}

bool EvalTask::admits(const Trajectory& t) const {
    const auto len = t.size();
    if (len < min_len || len > max_len) return false;
    return mode == TaskMode::exact_visit ? len >= visit : len >= 2;
}

std::pair<std::size_t, std::size_t> EvalTask::split(const Trajectory& t) const {
    if (mode == TaskMode::exact_visit) return {visit - 1, visit - 1};
    return {t.size() - 1, t.size() - 1};
}

std::string EvalTask::describe() const {
    std::string s = mode == TaskMode::exact_visit
                        ? "exact-visit v=" + std::to_string(visit) + " (prefix = first " +
                              std::to_string(visit - 1) + " pages)"
                        : std::string("next-after-prefix (prefix = all pages but the last)");
    s += ", length band " + std::to_string(min_len) + "-" +
         (max_len == kUnbounded ? std::string("inf") : std::to_string(max_len));
    return s;
}

EvalTask EvalTask::parse(const std::string& text) {
    EvalTask task;
    std::string rest = text;
    auto take = [&rest]() {
        const auto colon = rest.find(':');
        std::string head = rest.substr(0, colon);
        rest = colon == std::string::npos ? std::string() : rest.substr(colon + 1);
        return head;
    };
    auto number = [&text](const std::string& s) -> std::size_t {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            throw std::invalid_argument("bad task spec '" + text + "'");
        }
        return std::stoull(s);
    };

    const auto kind = take();
    if (kind == "visit") {
        task.mode = TaskMode::exact_visit;
        task.visit = number(take());
    } else if (kind == "mixed") {
        task.mode = TaskMode::next_after_prefix;
    } else {
        throw std::invalid_argument("bad task spec '" + text + "' (expected visit:<v> or mixed)");
    }
    if (!rest.empty()) {
        const auto dash = rest.find('-');
        if (dash == std::string::npos) throw std::invalid_argument("bad length band in '" + text + "'");
        task.min_len = number(rest.substr(0, dash));
        const auto hi = rest.substr(dash + 1);
        task.max_len = (hi == "inf") ? kUnbounded : number(hi);
    }
    task.validate();
    return task;
}

const char* to_string(EvalMethod m) { return m == EvalMethod::cv ? "cv" : "bootstrap"; }

std::vector<std::size_t> cv_fold_assignment(std::size_t n, std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
    if (folds > n) {
        throw std::invalid_argument("folds (" + std::to_string(folds) + ") exceed dataset size (" +
                                    std::to_string(n) + ")");
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    auto rng = make_rng({seed});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[bounded(rng, i)]);

    std::vector<std::size_t> fold(n);
    for (std::size_t f = 0; f < folds; ++f) {
        const auto begin = f * n / folds;
        const auto end = (f + 1) * n / folds;
        for (auto i = begin; i < end; ++i) fold[perm[i]] = f;
    }
    return fold;
}

BootstrapDraw bootstrap_draw(std::size_t n, std::uint64_t seed, std::size_t resample) {
    if (n < 2) throw std::invalid_argument("bootstrap needs at least 2 trajectories");
    BootstrapDraw d;
    for (std::uint64_t attempt = 0;; ++attempt) {
        auto rng = make_rng({seed, resample, attempt});
        std::vector<char> drawn(n, 0);
        d.train.resize(n);
        for (auto& pick : d.train) {
            pick = bounded(rng, n);
            drawn[pick] = 1;
        }
        d.out_of_bag.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (!drawn[i]) d.out_of_bag.push_back(i);
        }
        if (!d.out_of_bag.empty()) return d;
        ++d.redraws;
    }
}

SessionDataset task_dataset(const SessionDataset& ds, const EvalTask& task) {
    task.validate();
    SessionDataset out;
    out.catalog = ds.catalog;
    out.provenance = ds.provenance;
    for (const auto& t : ds.trajectories) {
        if (task.admits(t)) out.trajectories.push_back(t);
    }
    return out;
}

EvalReport cross_validate(const SessionDataset& ds, const EvalTask& task, const PredictorParams& params,
                          const EvalConfig& config) {
    params.validate();
    const auto filtered = task_dataset(ds, task);
    if (filtered.empty()) throw std::invalid_argument("no trajectories admitted by " + task.describe());
    const auto folds = config.splits;
    const auto assignment = cv_fold_assignment(filtered.size(), folds, config.seed);

    std::vector<SplitResult> results(folds);
    run_parallel(folds, config.threads, [&](std::size_t f) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < assignment.size(); ++i) (assignment[i] == f ? test : train).push_back(i);
        results[f] = run_trials(filtered, train, test, task, params, config.kmm_enabled);
        results[f].index = f;
    });
    return make_report(EvalMethod::cv, filtered, task, params, config, std::move(results));
}

EvalReport bootstrap_validate(const SessionDataset& ds, const EvalTask& task, const PredictorParams& params,
                              const EvalConfig& config) {
    params.validate();
    if (config.splits < 1) throw std::invalid_argument("bootstrap needs at least 1 resample");
    const auto filtered = task_dataset(ds, task);
    if (filtered.size() < 2) throw std::invalid_argument("bootstrap needs at least 2 admitted trajectories");

    std::vector<SplitResult> results(config.splits);
    run_parallel(config.splits, config.threads, [&](std::size_t r) {
        auto draw = bootstrap_draw(filtered.size(), config.seed, r);
        results[r] = run_trials(filtered, draw.train, draw.out_of_bag, task, params, config.kmm_enabled);
        results[r].index = r;
        results[r].redraws = draw.redraws;
    });
    return make_report(EvalMethod::bootstrap, filtered, task, params, config, std::move(results));
}

}  // namespace webnav
