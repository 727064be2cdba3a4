#include "multiga/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "multiga/engine.hpp"
#include "multiga/errors.hpp"
#include "multiga/parallel.hpp"
#include "multiga/sql_scorer.hpp"
#include "multiga/answer_scorers.hpp"

namespace multiga {

namespace {

using nlohmann::json;

json outcome_to_json(const RowOutcome& o) {
    json j;
    j["condition"] = o.condition;
    j["row_id"] = o.row_id;
    j["best_score"] = o.best_score;
    j["correct"] = o.correct;
    j["generations_used"] = o.generations_used;
    j["generator_calls"] = o.generator_calls;
    j["evaluator_calls"] = o.evaluator_calls;
    j["error"] = o.error;
    j["best_content"] = o.best_content;
    return j;
}

RowOutcome outcome_from_json(const json& j) {
    RowOutcome o;
    o.condition = j.at("condition").get<std::string>();
    o.row_id = j.at("row_id").get<std::string>();
    o.best_score = j.at("best_score").get<double>();
    o.correct = j.at("correct").get<bool>();
    o.generations_used = j.at("generations_used").get<int>();
    o.generator_calls = j.at("generator_calls").get<std::int64_t>();
    o.evaluator_calls = j.at("evaluator_calls").get<std::int64_t>();
    o.error = j.value("error", "");
    o.best_content = j.value("best_content", "");
    return o;
}

json config_to_json(const GAConfig& c) {
    json j;
    j["samples_per_generator"] = c.samples_per_generator;
    j["top_k"] = c.top_k;
    j["retire_threshold"] = c.retire_threshold;
    j["max_generations"] = c.max_generations;
    j["target_fitness"] = c.target_fitness;
    j["rng_seed"] = c.rng_seed;
    j["max_parallel_calls"] = c.max_parallel_calls;
    if (c.population_cap)
        j["population_cap"] = *c.population_cap;
    else
        j["population_cap"] = nullptr;
    return j;
}

// Serialized, flushed appends: a kill mid-run loses at most the line being
// written, which the loader below tolerates.
class CheckpointLog {
public:
    explicit CheckpointLog(const std::string& path) : path_(path) {}

    std::vector<RowOutcome> load_existing() {
        std::vector<RowOutcome> done;
        std::ifstream in(path_, std::ios::binary);
        if (!in) return done;
        std::string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object()) continue;  // torn tail line
            try {
                done.push_back(outcome_from_json(j));
            } catch (const json::exception&) {
                continue;
            }
        }
        return done;
    }

    void append(const RowOutcome& outcome) {
        std::lock_guard lock(mutex_);
        std::ofstream out(path_, std::ios::binary | std::ios::app);
        if (!out) throw Error(ErrorKind::io, "cannot append checkpoint: " + path_);
        out << outcome_to_json(outcome).dump() << "\n";
        out.flush();
    }

private:
    std::string path_;
    std::mutex mutex_;
};

}  // namespace

TemplateContext row_context(const DatasetRow& row, const TaskSpec& task,
                            const std::shared_ptr<ExampleStore>& store,
                            std::vector<std::string>* warnings) {
    TemplateContext ctx = row.context_bindings;

    const auto init_refs = scan_placeholders(task.init_user);
    const bool wants_examples =
        init_refs.count("positive_examples") || init_refs.count("negative_examples");
    if (wants_examples && store && task.retrieval) {
        std::string query;
        for (const char* key : {"query", "question", "constraints"}) {
            if (ctx.has(key)) {
                query = ctx.bindings.at(key);
                break;
            }
        }
        RetrievedExamples retrieved =
            store->retrieve(query, task.retrieval->n_pos, task.retrieval->n_neg);
        ctx.set("positive_examples", format_examples(retrieved.positives));
        ctx.set("negative_examples", format_examples(retrieved.negatives));
        if (warnings)
            for (auto& w : retrieved.warnings)
                warnings->push_back("row '" + row.row_id + "': " + w);
    }

    // Any remaining declared-but-unbound placeholder the prompts reference is
    // bound empty so one sparse row cannot sink the whole benchmark.
    auto bind_missing = [&](const std::string& tmpl) {
        for (const auto& name : scan_placeholders(tmpl)) {
            if (name == "parent_1" || name == "parent_2" || name == "output" ||
                name == task.candidate_placeholder)
                continue;
            if (!ctx.has(name)) {
                ctx.set(name, "");
                if (warnings)
                    warnings->push_back("row '" + row.row_id + "': placeholder '" + name +
                                        "' unbound; using empty text");
            }
        }
    };
    bind_missing(task.init_system);
    bind_missing(task.init_user);
    bind_missing(task.crossover_system);
    bind_missing(task.crossover_user);
    bind_missing(task.eval_system);
    bind_missing(task.eval_user);
    return ctx;
}

bool score_row(const DatasetRow& row, const std::string& candidate_text,
               const BackendHandle& evaluator, std::string* detail) {
    switch (row.task_kind) {
        case TaskKind::sql: {
            const auto& gold = std::get<SqlGold>(row.gold);
            SqlScore score = score_sql(candidate_text, gold.sql, gold.db_path);
            if (detail && !score.error.empty()) *detail = score.error;
            return score.correct;
        }
        case TaskKind::meeting: {
            const auto& gold = std::get<MeetingGold>(row.gold);
            try {
                MeetingPlan plan = parse_plan(candidate_text);
                PlanValidation validation = validate_plan(plan, row.constraints, row.dist);
                if (!validation.violations.empty()) {
                    if (detail)
                        *detail = std::string("violation: ") +
                                  to_string(validation.violations.front().kind);
                    return false;
                }
                return validation.valid_meetings >= gold.optimal_meetings;
            } catch (const Error& e) {
                if (detail) *detail = e.what();
                return false;
            }
        }
        case TaskKind::gpqa: {
            const auto& gold = std::get<LetterGold>(row.gold);
            return score_gpqa(candidate_text, gold.letter).correct;
        }
        case TaskKind::bbq: {
            const auto& gold = std::get<IndexGold>(row.gold);
            return score_bbq(candidate_text, row.choices, gold.index, evaluator).correct;
        }
    }
    return false;
}

std::string BenchmarkReport::to_json() const {
    json j;
    j["task_id"] = task_id;
    j["dataset_path"] = dataset_path;
    j["dataset_rows"] = dataset_rows;
    j["conditions"] = conditions;
    j["config"] = config_to_json(config);
    j["rows"] = json::array();
    for (const auto& row : rows) j["rows"].push_back(outcome_to_json(row));
    j["accuracy"] = accuracy;
    j["notes"] = notes;
    return j.dump(2);
}

std::string BenchmarkReport::to_table() const {
    std::size_t width = std::string("Seed Model").size();
    for (const auto& name : conditions) width = std::max(width, name.size());

    std::ostringstream out;
    out << "Seed Model" << std::string(width - 10 + 2, ' ') << task_id << "\n";
    out << std::string(width + 2 + task_id.size(), '-') << "\n";
    for (const auto& name : conditions) {
        out << name << std::string(width - name.size() + 2, ' ');
        auto it = accuracy.find(name);
        if (it == accuracy.end()) {
            out << "-";
        } else {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "%.2f", it->second);
            out << buf;
        }
        out << "\n";
    }
    return out.str();
}

BenchmarkReport run_benchmark(const std::vector<DatasetRow>& rows,
                              const BenchmarkOptions& options) {
    options.ga.validate();
    if (!options.evaluator) throw Error(ErrorKind::config, "benchmark needs an evaluator backend");
    if (options.conditions.empty())
        throw Error(ErrorKind::config, "benchmark needs at least one seed condition");
    if (options.out_dir.empty()) throw Error(ErrorKind::config, "benchmark needs an out_dir");
    std::filesystem::create_directories(options.out_dir);

    std::shared_ptr<ExampleStore> store = options.store;
    if (!store && options.task.retrieval && !options.task.retrieval->store_path.empty())
        store = std::make_shared<ExampleStore>(ExampleStore::load(options.task.retrieval->store_path));

    CheckpointLog log(options.out_dir + "/checkpoints.jsonl");
    std::map<std::pair<std::string, std::string>, RowOutcome> finished;
    for (auto& outcome : log.load_existing())
        finished.emplace(std::make_pair(outcome.condition, outcome.row_id), outcome);

    struct Unit {
        const SeedCondition* condition;
        const DatasetRow* row;
    };
    std::vector<Unit> pending;
    const std::size_t total = options.conditions.size() * rows.size();
    for (const auto& condition : options.conditions)
        for (const auto& row : rows)
            if (!finished.count({condition.name, row.row_id}))
                pending.push_back(Unit{&condition, &row});

    std::mutex done_mutex;
    std::atomic<bool> cancelled{false};
    std::size_t completed = finished.size();

    parallel_for(pending.size(), options.parallel_rows, [&](std::size_t i) {
        if (cancelled.load()) return;
        const Unit& unit = pending[i];
        RowOutcome outcome;
        outcome.condition = unit.condition->name;
        outcome.row_id = unit.row->row_id;

        try {
            std::vector<std::string> context_warnings;
            TemplateContext ctx =
                row_context(*unit.row, options.task, store, &context_warnings);
            RunHooks hooks;
            if (unit.row->task_kind == TaskKind::sql) {
                const std::string db_path = std::get<SqlGold>(unit.row->gold).db_path;
                hooks.eval_bindings = [db_path](const Candidate& c, TemplateContext& ectx) {
                    ectx.set("output", execute_sql_for_prompt(c.content, db_path));
                };
            }
            Engine engine(options.ga, unit.condition->generators, options.evaluator, options.task,
                          ctx, hooks);
            RunResult result = engine.run();
            outcome.best_score = result.best.fitness.value_or(0.0);
            outcome.best_content = result.best.content;
            outcome.generations_used = static_cast<int>(result.history.size());
            outcome.generator_calls = result.total_generator_calls;
            outcome.evaluator_calls = result.total_evaluator_calls;
            std::string detail;
            outcome.correct =
                score_row(*unit.row, result.best.content, options.evaluator, &detail);
            if (!detail.empty()) outcome.error = detail;
        } catch (const RunAborted& e) {
            outcome.correct = false;
            outcome.error = e.what();
            outcome.generator_calls = e.partial().total_generator_calls;
            outcome.evaluator_calls = e.partial().total_evaluator_calls;
        } catch (const Error& e) {
            outcome.correct = false;
            outcome.error = e.what();
        }

        log.append(outcome);
        std::lock_guard lock(done_mutex);
        finished.emplace(std::make_pair(outcome.condition, outcome.row_id), outcome);
        ++completed;
        if (options.progress && !options.progress(outcome, completed, total)) cancelled = true;
    });

    if (cancelled.load())
        throw Error(ErrorKind::cancelled,
                    "benchmark cancelled; completed rows are checkpointed under " +
                        options.out_dir);

    BenchmarkReport report;
    report.task_id = options.task.task_id;
    report.config = options.ga;
    report.dataset_path = options.dataset_path;
    report.dataset_rows = static_cast<int>(rows.size());
    report.notes = options.dataset_notes;
    for (const auto& condition : options.conditions) report.conditions.push_back(condition.name);

    for (const auto& condition : options.conditions) {
        int correct = 0;
        for (const auto& row : rows) {
            auto it = finished.find({condition.name, row.row_id});
            if (it == finished.end())
                throw Error(ErrorKind::runtime,
                            "benchmark unit missing for condition '" + condition.name +
                                "', row '" + row.row_id + "'");
            report.rows.push_back(it->second);
            if (it->second.correct) ++correct;
        }
        if (!rows.empty())
            report.accuracy[condition.name] =
                static_cast<double>(correct) / static_cast<double>(rows.size());
    }

    std::ofstream json_out(options.out_dir + "/report.json", std::ios::binary);
    json_out << report.to_json() << "\n";
    std::ofstream table_out(options.out_dir + "/report.txt", std::ios::binary);
    table_out << report.to_table();
    return report;
}

}  // namespace multiga
