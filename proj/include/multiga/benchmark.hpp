#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "multiga/backend.hpp"
#include "multiga/dataset.hpp"
#include "multiga/example_store.hpp"
#include "multiga/taskspec.hpp"
#include "multiga/types.hpp"

namespace multiga {

/// One seeding configuration: a named subset of the generator pool (a single
/// model, or "all" of them at once).
struct SeedCondition {
    std::string name;
    std::vector<BackendHandle> generators;
};

struct RowOutcome {
    std::string condition;
    std::string row_id;
    double best_score = 0.0;
    bool correct = false;
    int generations_used = 0;
    std::int64_t generator_calls = 0;
    std::int64_t evaluator_calls = 0;
    std::string error;  // per-row failure reason; empty on success
    std::string best_content;
};

struct BenchmarkReport {
    std::string task_id;
    std::vector<RowOutcome> rows;  // ordered by condition, then dataset order
    std::map<std::string, double> accuracy;  // condition -> exact fraction
    GAConfig config;
    std::string dataset_path;
    int dataset_rows = 0;
    std::vector<std::string> conditions;
    std::vector<std::string> notes;  // dataset-load rejections and the like

    std::string to_json() const;
    /// Aligned text table, seed conditions down the side.
    std::string to_table() const;
};

/// Returns false to cancel (remaining rows stay unprocessed; completed
/// outcomes are already checkpointed).
using ProgressFn =
    std::function<bool(const RowOutcome& outcome, std::size_t completed, std::size_t total)>;

struct BenchmarkOptions {
    GAConfig ga;
    std::vector<SeedCondition> conditions;
    BackendHandle evaluator;
    TaskSpec task;
    std::string dataset_path;  // recorded in the report
    std::string out_dir;       // checkpoints + report files land here
    int parallel_rows = 1;
    /// Few-shot store; when absent, the task's retrieval.store_path is tried.
    std::shared_ptr<ExampleStore> store;
    std::vector<std::string> dataset_notes;  // copied into the report
    ProgressFn progress;
};

/// Runs every condition x row unit through the engine, scores the best
/// candidate against the row's ground truth, and aggregates per-condition
/// accuracy. Units run concurrently up to parallel_rows. Each completed unit
/// is checkpointed (JSON-lines, atomic append) so an interrupted benchmark
/// resumes without re-running finished rows. A failed row is recorded as
/// incorrect with its reason; it never aborts the benchmark. Cancellation
/// through the progress callback throws Error{cancelled} after in-flight
/// units finish.
BenchmarkReport run_benchmark(const std::vector<DatasetRow>& rows, const BenchmarkOptions& options);

/// Ground-truth scoring of one candidate text for a row (exposed for tests).
bool score_row(const DatasetRow& row, const std::string& candidate_text,
               const BackendHandle& evaluator, std::string* detail = nullptr);

/// Bindings a row contributes to prompt rendering, including formatted
/// few-shot examples when a store is supplied.
TemplateContext row_context(const DatasetRow& row, const TaskSpec& task,
                            const std::shared_ptr<ExampleStore>& store,
                            std::vector<std::string>* warnings = nullptr);

}  // namespace multiga
