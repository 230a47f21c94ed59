#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "webnav/predictor.hpp"
#include "webnav/session_store.hpp"

namespace webnav {

enum class TaskMode {
    next_after_prefix,  // prefix = all pages but the last
    exact_visit,        // predict page v from the first v-1 pages
};

struct EvalTask {
    TaskMode mode = TaskMode::exact_visit;
    std::size_t visit = 4;  // exact_visit only
    std::size_t min_len = 1;
    std::size_t max_len = kUnbounded;

    void validate() const;
    /// Whether a trajectory takes part in the task at all.
    bool admits(const Trajectory& t) const;
    /// (prefix length, truth position) for an admitted trajectory.
    std::pair<std::size_t, std::size_t> split(const Trajectory& t) const;
    std::string describe() const;

    /// "visit:4" or "mixed", optionally followed by ":min-max", e.g.
    /// "visit:4:3-13" or "mixed:3-8".
    static EvalTask parse(const std::string& text);

    bool operator==(const EvalTask&) const = default;
};

enum class EvalMethod { cv, bootstrap };

const char* to_string(EvalMethod m);

/// Per-fold (CV) or per-resample (bootstrap) tallies.
struct SplitResult {
    std::size_t index = 0;
    std::size_t train_size = 0;
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::array<std::size_t, 3> top_n_successes{};  // top-1, top-2, top-3
    std::size_t gate_failures = 0;  // trials whose cluster AP failed the gate
    std::size_t cluster_size_sum = 0;
    std::size_t distinct_clusters = 0;  // distinct nonempty clusters queried
    std::size_t redraws = 0;            // bootstrap only

    double success_rate() const {
        return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    }
    bool operator==(const SplitResult&) const = default;
};

struct EvalReport {
    EvalMethod method = EvalMethod::cv;
    std::size_t splits = 0;  // folds or resamples
    std::uint64_t seed = 0;
    PredictorParams params;
    bool kmm_enabled = true;
    EvalTask task;
    std::string provenance;
    std::string filter;  // dataset filter applied before the task, if known
    std::size_t dataset_size = 0;  // after the task's own filter

    std::size_t trials = 0;
    double success_rate = 0.0;
    std::array<double, 3> top_n_success{};
    double mean_cluster_size = 0.0;
    double mean_distinct_clusters = 0.0;
    double fallback_rate = 0.0;
    std::size_t redraws = 0;
    std::vector<SplitResult> breakdown;

    bool operator==(const EvalReport&) const = default;
};

struct EvalConfig {
    std::size_t splits = 5;
    std::uint64_t seed = 42;
    bool kmm_enabled = true;
    std::size_t threads = 1;  // 0 = hardware concurrency
    std::string filter;
};

inline constexpr std::size_t kDefaultResamples = 200;

/// Fold id per position of the task-filtered dataset: a seeded shuffle cut
/// into contiguous blocks whose sizes differ by at most one.
std::vector<std::size_t> cv_fold_assignment(std::size_t n, std::size_t folds, std::uint64_t seed);

struct BootstrapDraw {
    std::vector<std::size_t> train;  // with replacement, size n
    std::vector<std::size_t> out_of_bag;
    std::size_t redraws = 0;
};

/// Resample `resample` of a size-n dataset; redrawn until the out-of-bag set
/// is nonempty. Depends only on (n, seed, resample).
BootstrapDraw bootstrap_draw(std::size_t n, std::uint64_t seed, std::size_t resample);

/// Trajectories the task admits, in dataset order.
SessionDataset task_dataset(const SessionDataset& ds, const EvalTask& task);

EvalReport cross_validate(const SessionDataset& ds, const EvalTask& task, const PredictorParams& params,
                          const EvalConfig& config);
EvalReport bootstrap_validate(const SessionDataset& ds, const EvalTask& task, const PredictorParams& params,
                              const EvalConfig& config);

}  // namespace webnav
