#include "multiga.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "multiga/benchmark.hpp"
#include "multiga/engine.hpp"
#include "multiga/errors.hpp"
#include "multiga/http_backend.hpp"
#include "multiga/run_json.hpp"
#include "multiga/score_parser.hpp"
#include "multiga/scripted_backend.hpp"
#include "multiga/sql_scorer.hpp"
#include "multiga/taskspec.hpp"

using multiga::Error;
using multiga::ErrorKind;
using nlohmann::json;

/* ---- handle definitions -------------------------------------------------- */

struct mga_taskspec {
    multiga::TaskSpec spec;
};

struct mga_backend {
    multiga::BackendHandle handle;
};

struct mga_run_result {
    multiga::RunResult result;
};

struct mga_condition {
    std::string name;
    std::vector<multiga::BackendHandle> generators;
};

struct mga_backend_set {
    std::vector<mga_backend> generators;  // stable storage for borrowed pointers
    mga_backend evaluator;
};

/* ---- error plumbing ------------------------------------------------------ */

namespace {

thread_local std::string tl_last_error;

void set_last_error(const std::string& message) { tl_last_error = message; }

mga_status status_of(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::config:
        case ErrorKind::schema:
        case ErrorKind::render: return MGA_ERR_CONFIG;
        case ErrorKind::io: return MGA_ERR_IO;
        case ErrorKind::parse: return MGA_ERR_PARSE;
        case ErrorKind::transport:
        case ErrorKind::credential:
        case ErrorKind::script_exhausted: return MGA_ERR_BACKEND;
        case ErrorKind::cancelled: return MGA_ERR_CANCELLED;
        case ErrorKind::initialization:
        case ErrorKind::extinction:
        case ErrorKind::data:
        case ErrorKind::validation:
        case ErrorKind::runtime: return MGA_ERR_RUN;
    }
    return MGA_ERR_UNKNOWN;
}

template <typename Fn>
mga_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        set_last_error(e.what());
        return status_of(e);
    } catch (const std::exception& e) {
        set_last_error(e.what());
        return MGA_ERR_UNKNOWN;
    } catch (...) {
        set_last_error("unknown failure");
        return MGA_ERR_UNKNOWN;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

mga_status invalid_arg(const char* what) {
    set_last_error(std::string("invalid argument: ") + what);
    return MGA_ERR_INVALID_ARG;
}

multiga::GAConfig config_from(const mga_ga_config& c) {
    multiga::GAConfig out;
    out.samples_per_generator = c.samples_per_generator;
    out.top_k = c.top_k;
    out.retire_threshold = c.retire_threshold;
    out.max_generations = c.max_generations;
    out.target_fitness = c.target_fitness;
    out.rng_seed = c.rng_seed;
    out.max_parallel_calls = c.max_parallel_calls;
    if (c.population_cap > 0) out.population_cap = c.population_cap;
    return out;
}

multiga::BackendProfile profile_from_json(const json& j) {
    multiga::BackendProfile p;
    p.name = j.value("name", "");
    p.endpoint = j.value("endpoint", "");
    p.model = j.value("model", "");
    p.auth_token_env = j.value("auth_token_env", "");
    p.temperature = j.value("temperature", p.temperature);
    p.max_output_tokens = j.value("max_output_tokens", p.max_output_tokens);
    p.timeout = std::chrono::milliseconds(j.value("timeout_ms", p.timeout.count()));
    p.max_retries = j.value("max_retries", p.max_retries);
    p.backoff_base = std::chrono::milliseconds(j.value("backoff_ms", p.backoff_base.count()));
    p.validate();
    return p;
}

multiga::BackendHandle backend_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorKind::config, "backend entry must be an object");
    const std::string name = j.value("name", "");
    if (name.empty()) throw Error(ErrorKind::config, "backend entry needs a name");
    if (j.contains("scripted")) {
        const json& scripted = j["scripted"];
        if (scripted.contains("replies")) {
            return multiga::ScriptedBackend::with_queue(
                name, scripted["replies"].get<std::vector<std::string>>());
        }
        if (scripted.contains("rules")) {
            struct Rule {
                std::string contains;
                std::string reply;
            };
            std::vector<Rule> rules;
            for (const auto& r : scripted["rules"])
                rules.push_back(Rule{r.at("contains").get<std::string>(),
                                     r.at("reply").get<std::string>()});
            const bool has_default = scripted.contains("default");
            const std::string fallback = scripted.value("default", "");
            return multiga::ScriptedBackend::with_fn(
                name, [rules, has_default, fallback, name](std::string_view system_text,
                                                           std::string_view user_text) {
                    std::string prompt = std::string(system_text) + "\n" + std::string(user_text);
                    for (const auto& rule : rules)
                        if (prompt.find(rule.contains) != std::string::npos) return rule.reply;
                    if (has_default) return fallback;
                    throw Error(ErrorKind::script_exhausted,
                                "scripted backend '" + name + "': no rule matched the prompt");
                });
        }
        throw Error(ErrorKind::config,
                    "scripted backend '" + name + "' needs 'replies' or 'rules'");
    }
    return multiga::HttpBackend::create(profile_from_json(j));
}

multiga::TemplateContext context_from_json(const char* context_json) {
    multiga::TemplateContext ctx;
    if (!context_json || !*context_json) return ctx;
    json doc = json::parse(context_json, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw Error(ErrorKind::config, "context must be a JSON object of string values");
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_string())
            throw Error(ErrorKind::config, "context value for '" + key + "' must be a string");
        ctx.set(key, value.get<std::string>());
    }
    return ctx;
}

// SQL runs score candidates against live query output when the caller
// provides a database; otherwise the output slot renders as unavailable.
multiga::RunHooks hooks_for(const multiga::TaskSpec& task, const multiga::TemplateContext& ctx) {
    multiga::RunHooks hooks;
    const auto eval_refs = multiga::scan_placeholders(task.eval_user);
    if (!eval_refs.count("output")) return hooks;
    if (ctx.has("db_path")) {
        const std::string db_path = ctx.bindings.at("db_path");
        hooks.eval_bindings = [db_path](const multiga::Candidate& c,
                                        multiga::TemplateContext& ectx) {
            ectx.set("output", multiga::execute_sql_for_prompt(c.content, db_path));
        };
    } else if (!ctx.has("output")) {
        hooks.eval_bindings = [](const multiga::Candidate&, multiga::TemplateContext& ectx) {
            ectx.set("output", "(no database available; query not executed)");
        };
    }
    return hooks;
}

}  // namespace

/* ---- basics --------------------------------------------------------------- */

extern "C" {

const char* mga_version(void) { return "0.1.0"; }

const char* mga_last_error(void) { return tl_last_error.c_str(); }

void mga_clear_last_error(void) { tl_last_error.clear(); }

void mga_string_free(char* s) { std::free(s); }

void mga_ga_config_defaults(mga_ga_config* out) {
    if (!out) return;
    multiga::GAConfig d;
    out->samples_per_generator = d.samples_per_generator;
    out->top_k = d.top_k;
    out->retire_threshold = d.retire_threshold;
    out->max_generations = d.max_generations;
    out->target_fitness = d.target_fitness;
    out->rng_seed = d.rng_seed;
    out->max_parallel_calls = d.max_parallel_calls;
    out->population_cap = 0;
}

/* ---- taskspec -------------------------------------------------------------- */

mga_status mga_taskspec_load(const char* path, mga_taskspec** out) {
    if (!path || !out) return invalid_arg("mga_taskspec_load");
    return guarded([&] {
        auto* handle = new mga_taskspec{multiga::load_taskspec(path)};
        *out = handle;
        return MGA_OK;
    });
}

mga_status mga_taskspec_bundled(const char* name, mga_taskspec** out) {
    if (!name || !out) return invalid_arg("mga_taskspec_bundled");
    return guarded([&] {
        auto* handle = new mga_taskspec{multiga::bundled_taskspec(name)};
        *out = handle;
        return MGA_OK;
    });
}

void mga_taskspec_free(mga_taskspec* task) { delete task; }

mga_status mga_taskspec_to_json(const mga_taskspec* task, char** out_json) {
    if (!task || !out_json) return invalid_arg("mga_taskspec_to_json");
    return guarded([&] {
        *out_json = dup_string(task->spec.to_json());
        return *out_json ? MGA_OK : MGA_ERR_UNKNOWN;
    });
}

const char* mga_taskspec_id(const mga_taskspec* task) {
    return task ? task->spec.task_id.c_str() : "";
}

/* ---- backends --------------------------------------------------------------- */

mga_status mga_backend_http(const char* profile_json, mga_backend** out) {
    if (!profile_json || !out) return invalid_arg("mga_backend_http");
    return guarded([&] {
        json doc = json::parse(profile_json, nullptr, false);
        if (doc.is_discarded())
            throw Error(ErrorKind::config, "backend profile is not valid JSON");
        *out = new mga_backend{multiga::HttpBackend::create(profile_from_json(doc))};
        return MGA_OK;
    });
}

mga_status mga_backend_scripted_queue(const char* name, const char* const* replies,
                                      size_t n_replies, mga_backend** out) {
    if (!name || !out || (n_replies && !replies)) return invalid_arg("mga_backend_scripted_queue");
    return guarded([&] {
        std::vector<std::string> queue;
        queue.reserve(n_replies);
        for (size_t i = 0; i < n_replies; ++i) queue.emplace_back(replies[i] ? replies[i] : "");
        *out = new mga_backend{multiga::ScriptedBackend::with_queue(name, std::move(queue))};
        return MGA_OK;
    });
}

mga_status mga_backend_scripted_fn(const char* name, mga_reply_fn fn, void* user_data,
                                   mga_backend** out) {
    if (!name || !fn || !out) return invalid_arg("mga_backend_scripted_fn");
    return guarded([&] {
        std::string backend_name = name;
        *out = new mga_backend{multiga::ScriptedBackend::with_fn(
            backend_name,
            [fn, user_data, backend_name](std::string_view system_text,
                                          std::string_view user_text) {
                std::string sys(system_text), user(user_text);
                char* reply = fn(sys.c_str(), user.c_str(), user_data);
                if (!reply)
                    throw Error(ErrorKind::transport,
                                "scripted callback for '" + backend_name + "' returned NULL");
                std::string text(reply);
                std::free(reply);
                return text;
            })};
        return MGA_OK;
    });
}

void mga_backend_free(mga_backend* backend) { delete backend; }

const char* mga_backend_name(const mga_backend* backend) {
    return backend && backend->handle ? backend->handle->profile().name.c_str() : "";
}

int64_t mga_backend_calls_served(const mga_backend* backend) {
    if (!backend || !backend->handle) return -1;
    auto scripted = std::dynamic_pointer_cast<multiga::ScriptedBackend>(backend->handle);
    return scripted ? scripted->calls_served() : -1;
}

mga_status mga_backend_set_load(const char* config_json, mga_backend_set** out) {
    if (!config_json || !out) return invalid_arg("mga_backend_set_load");
    return guarded([&] {
        json doc = json::parse(config_json, nullptr, false);
        if (doc.is_discarded() || !doc.is_object())
            throw Error(ErrorKind::config, "backend config is not a JSON object");
        if (!doc.contains("generators") || !doc["generators"].is_array() ||
            doc["generators"].empty())
            throw Error(ErrorKind::config, "backend config needs a non-empty 'generators' array");
        if (!doc.contains("evaluator"))
            throw Error(ErrorKind::config, "backend config needs an 'evaluator' entry");
        auto set = std::make_unique<mga_backend_set>();
        for (const auto& g : doc["generators"])
            set->generators.push_back(mga_backend{backend_from_json(g)});
        set->evaluator = mga_backend{backend_from_json(doc["evaluator"])};
        *out = set.release();
        return MGA_OK;
    });
}

void mga_backend_set_free(mga_backend_set* set) { delete set; }

size_t mga_backend_set_generator_count(const mga_backend_set* set) {
    return set ? set->generators.size() : 0;
}

mga_backend* mga_backend_set_generator(const mga_backend_set* set, size_t index) {
    if (!set || index >= set->generators.size()) return nullptr;
    return const_cast<mga_backend*>(&set->generators[index]);
}

mga_backend* mga_backend_set_evaluator(const mga_backend_set* set) {
    if (!set) return nullptr;
    return const_cast<mga_backend*>(&set->evaluator);
}

/* ---- run -------------------------------------------------------------------- */

mga_status mga_run(const mga_ga_config* config, mga_backend* const* generators,
                   size_t n_generators, mga_backend* evaluator, const mga_taskspec* task,
                   const char* context_json, mga_run_result** out) {
    if (!config || !generators || !n_generators || !evaluator || !task || !out)
        return invalid_arg("mga_run");
    return guarded([&] {
        std::vector<multiga::BackendHandle> handles;
        handles.reserve(n_generators);
        for (size_t i = 0; i < n_generators; ++i) {
            if (!generators[i] || !generators[i]->handle)
                throw Error(ErrorKind::config, "null generator handle");
            handles.push_back(generators[i]->handle);
        }
        multiga::TemplateContext ctx = context_from_json(context_json);
        multiga::RunResult result =
            multiga::run_ga(config_from(*config), handles, evaluator->handle, task->spec, ctx,
                            hooks_for(task->spec, ctx));
        *out = new mga_run_result{std::move(result)};
        return MGA_OK;
    });
}

void mga_run_result_free(mga_run_result* result) { delete result; }

mga_status mga_run_result_best_content(const mga_run_result* result, char** out) {
    if (!result || !out) return invalid_arg("mga_run_result_best_content");
    *out = dup_string(result->result.best.content);
    return *out ? MGA_OK : MGA_ERR_UNKNOWN;
}

double mga_run_result_best_score(const mga_run_result* result) {
    return result ? result->result.best.fitness.value_or(0.0) : 0.0;
}

mga_termination mga_run_result_termination(const mga_run_result* result) {
    return result && result->result.termination == multiga::Termination::target_reached
               ? MGA_TERM_TARGET_REACHED
               : MGA_TERM_BUDGET_EXHAUSTED;
}

int32_t mga_run_result_generations(const mga_run_result* result) {
    return result ? static_cast<int32_t>(result->result.history.size()) : 0;
}

int64_t mga_run_result_generator_calls(const mga_run_result* result) {
    return result ? result->result.total_generator_calls : 0;
}

int64_t mga_run_result_evaluator_calls(const mga_run_result* result) {
    return result ? result->result.total_evaluator_calls : 0;
}

mga_status mga_run_result_to_json(const mga_run_result* result, char** out_json) {
    if (!result || !out_json) return invalid_arg("mga_run_result_to_json");
    return guarded([&] {
        *out_json = dup_string(multiga::run_result_to_json(result->result));
        return *out_json ? MGA_OK : MGA_ERR_UNKNOWN;
    });
}

mga_status mga_lineage_render(const char* run_result_json, char** out_text) {
    if (!run_result_json || !out_text) return invalid_arg("mga_lineage_render");
    return guarded([&] {
        *out_text = dup_string(
            multiga::render_lineage(multiga::run_result_from_json(run_result_json)));
        return *out_text ? MGA_OK : MGA_ERR_UNKNOWN;
    });
}

mga_status mga_summary_render(const char* run_result_json, char** out_text) {
    if (!run_result_json || !out_text) return invalid_arg("mga_summary_render");
    return guarded([&] {
        *out_text = dup_string(
            multiga::render_summary(multiga::run_result_from_json(run_result_json)));
        return *out_text ? MGA_OK : MGA_ERR_UNKNOWN;
    });
}

/* ---- benchmark --------------------------------------------------------------- */

mga_status mga_condition_new(const char* name, mga_backend* const* generators,
                             size_t n_generators, mga_condition** out) {
    if (!name || !generators || !n_generators || !out) return invalid_arg("mga_condition_new");
    return guarded([&] {
        auto condition = std::make_unique<mga_condition>();
        condition->name = name;
        for (size_t i = 0; i < n_generators; ++i) {
            if (!generators[i] || !generators[i]->handle)
                throw Error(ErrorKind::config, "null generator handle in condition");
            condition->generators.push_back(generators[i]->handle);
        }
        *out = condition.release();
        return MGA_OK;
    });
}

void mga_condition_free(mga_condition* condition) { delete condition; }

mga_status mga_benchmark_run(const char* dataset_path, const char* task_kind,
                             mga_condition* const* conditions, size_t n_conditions,
                             mga_backend* evaluator, const mga_taskspec* task,
                             const mga_ga_config* config, const char* out_dir,
                             int32_t parallel_rows, const char* example_store_path,
                             mga_progress_fn progress, void* progress_user_data,
                             char** out_report_json) {
    if (!dataset_path || !task_kind || !conditions || !n_conditions || !evaluator || !task ||
        !config || !out_dir)
        return invalid_arg("mga_benchmark_run");
    return guarded([&] {
        multiga::DatasetLoadReport loaded =
            multiga::load_dataset(dataset_path, multiga::task_kind_from_string(task_kind));

        multiga::BenchmarkOptions options;
        options.ga = config_from(*config);
        options.evaluator = evaluator->handle;
        options.task = task->spec;
        options.dataset_path = dataset_path;
        options.dataset_notes = loaded.warnings;
        options.out_dir = out_dir;
        options.parallel_rows = parallel_rows > 0 ? parallel_rows : 1;
        for (size_t i = 0; i < n_conditions; ++i) {
            if (!conditions[i]) throw Error(ErrorKind::config, "null condition handle");
            options.conditions.push_back(
                multiga::SeedCondition{conditions[i]->name, conditions[i]->generators});
        }
        if (example_store_path && *example_store_path)
            options.store = std::make_shared<multiga::ExampleStore>(
                multiga::ExampleStore::load(example_store_path));
        if (progress) {
            options.progress = [progress, progress_user_data](const multiga::RowOutcome& outcome,
                                                              std::size_t completed,
                                                              std::size_t total) {
                return progress(outcome.condition.c_str(), outcome.row_id.c_str(),
                                outcome.correct ? 1 : 0, completed, total,
                                progress_user_data) == 0;
            };
        }

        multiga::BenchmarkReport report = multiga::run_benchmark(loaded.rows, options);
        if (out_report_json) {
            *out_report_json = dup_string(report.to_json());
            if (!*out_report_json) return MGA_ERR_UNKNOWN;
        }
        return MGA_OK;
    });
}

/* ---- utilities ------------------------------------------------------------------ */

mga_status mga_parse_fitness(const char* reply, double* out_score) {
    if (!reply || !out_score) return invalid_arg("mga_parse_fitness");
    return guarded([&] {
        *out_score = multiga::parse_fitness(reply);
        return MGA_OK;
    });
}

} /* extern "C" */
