// multiga-cli: run one optimization, benchmark seeding conditions, validate
// configs, inspect a run's lineage, or demo the engine offline. Talks to the
// engine exclusively through the C API in multiga.h.

#include <csignal>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <multiga.h>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;

volatile std::sig_atomic_t g_interrupted = 0;

void on_interrupt(int) { g_interrupted = 1; }

int exit_code_for(mga_status status) {
    switch (status) {
        case MGA_OK: return kExitOk;
        case MGA_ERR_CONFIG:
        case MGA_ERR_IO: return kExitConfig;
        default: return kExitRuntime;
    }
}

int fail(mga_status status) {
    std::cerr << "error: " << mga_last_error() << "\n";
    return exit_code_for(status);
}

std::string read_file(const std::string& path, bool& ok) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ok = false;
        return {};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    ok = true;
    return buf.str();
}

struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { mga_string_free(ptr); }
    std::string str() const { return ptr ? ptr : ""; }
};

struct GaFlags {
    std::uint64_t seed = 0;
    int k = 3;
    double tau = 0.2;
    int max_generations = 3;
    double target_fitness = 0.95;
    int parallel = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--k", k, "parents selected per generation");
        cmd->add_option("--tau", tau, "retirement threshold in [0,1]");
        cmd->add_option("--max-generations", max_generations, "generation budget");
        cmd->add_option("--target-fitness", target_fitness, "early-stop fitness in [0,1]");
        cmd->add_option("--parallel", parallel, "max concurrent backend calls / rows");
    }

    mga_ga_config to_config() const {
        mga_ga_config config;
        mga_ga_config_defaults(&config);
        config.rng_seed = seed;
        config.top_k = k;
        config.retire_threshold = tau;
        config.max_generations = max_generations;
        config.target_fitness = target_fitness;
        config.max_parallel_calls = parallel;
        return config;
    }
};

struct TaskHandle {
    mga_taskspec* ptr = nullptr;
    ~TaskHandle() { mga_taskspec_free(ptr); }
};

struct BackendSetHandle {
    mga_backend_set* ptr = nullptr;
    ~BackendSetHandle() { mga_backend_set_free(ptr); }
};

struct RunResultHandle {
    mga_run_result* ptr = nullptr;
    ~RunResultHandle() { mga_run_result_free(ptr); }
};

// "--task bundled:gpqa" or a config file path.
mga_status load_task(const std::string& spec, TaskHandle& out) {
    if (spec.rfind("bundled:", 0) == 0) return mga_taskspec_bundled(spec.substr(8).c_str(), &out.ptr);
    return mga_taskspec_load(spec.c_str(), &out.ptr);
}

mga_status load_backends(const std::string& config_path, BackendSetHandle& set, json& doc) {
    bool ok = false;
    const std::string text = read_file(config_path, ok);
    if (!ok) {
        std::cerr << "error: cannot read config file '" << config_path << "'\n";
        return MGA_ERR_IO;
    }
    doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        std::cerr << "error: config file '" << config_path << "' is not valid JSON\n";
        return MGA_ERR_CONFIG;
    }
    return mga_backend_set_load(text.c_str(), &set.ptr);
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << text;
    return true;
}

int print_run(mga_run_result* result, const std::string& out_dir) {
    OwnedString result_json;
    mga_status status = mga_run_result_to_json(result, &result_json.ptr);
    if (status != MGA_OK) return fail(status);

    OwnedString summary;
    status = mga_summary_render(result_json.ptr, &summary.ptr);
    if (status != MGA_OK) return fail(status);
    std::cout << summary.str();

    OwnedString best;
    status = mga_run_result_best_content(result, &best.ptr);
    if (status != MGA_OK) return fail(status);
    std::cout << "\nbest candidate:\n" << best.str() << "\n";

    if (!out_dir.empty()) {
        const std::string path = out_dir + "/run_result.json";
        if (!write_file(path, result_json.str() + "\n")) {
            std::cerr << "error: cannot write " << path << "\n";
            return kExitRuntime;
        }
        std::cout << "\nrun result written to " << path << "\n";
    }
    return kExitOk;
}

int cmd_run(const std::string& task_arg, const std::string& config_path, const GaFlags& flags,
            const std::string& out_dir) {
    TaskHandle task;
    mga_status status = load_task(task_arg, task);
    if (status != MGA_OK) return fail(status);

    json doc;
    BackendSetHandle set;
    status = load_backends(config_path, set, doc);
    if (status != MGA_OK) return status == MGA_ERR_IO || status == MGA_ERR_CONFIG
                                     ? kExitConfig
                                     : fail(status);

    std::string context_json = "{}";
    if (doc.contains("context")) context_json = doc["context"].dump();

    std::vector<mga_backend*> generators;
    for (size_t i = 0; i < mga_backend_set_generator_count(set.ptr); ++i)
        generators.push_back(mga_backend_set_generator(set.ptr, i));

    mga_ga_config config = flags.to_config();
    RunResultHandle result;
    status = mga_run(&config, generators.data(), generators.size(),
                     mga_backend_set_evaluator(set.ptr), task.ptr, context_json.c_str(),
                     &result.ptr);
    if (status != MGA_OK) return fail(status);
    return print_run(result.ptr, out_dir);
}

int32_t bench_progress(const char* condition, const char* row_id, int32_t correct,
                       size_t completed, size_t total, void*) {
    std::cerr << "[" << completed << "/" << total << "] " << condition << " / " << row_id << ": "
              << (correct ? "correct" : "incorrect") << "\n";
    return g_interrupted ? 1 : 0;
}

int cmd_bench(const std::string& task_arg, const std::string& config_path,
              const std::string& conditions_arg, const GaFlags& flags,
              const std::string& out_dir) {
    TaskHandle task;
    mga_status status = load_task(task_arg, task);
    if (status != MGA_OK) return fail(status);

    json doc;
    BackendSetHandle set;
    status = load_backends(config_path, set, doc);
    if (status != MGA_OK) return status == MGA_ERR_IO || status == MGA_ERR_CONFIG
                                     ? kExitConfig
                                     : fail(status);

    if (!doc.contains("dataset") || !doc["dataset"].is_object() ||
        !doc["dataset"].contains("path")) {
        std::cerr << "error: config file needs a dataset section: {\"dataset\": {\"path\": ..., "
                     "\"kind\": ...}}\n";
        return kExitConfig;
    }
    const std::string dataset_path = doc["dataset"]["path"].get<std::string>();
    const std::string kind = doc["dataset"].value("kind", std::string(mga_taskspec_id(task.ptr)));
    const std::string store_path = doc.value("example_store", "");

    const size_t generator_count = mga_backend_set_generator_count(set.ptr);
    std::vector<mga_backend*> all;
    for (size_t i = 0; i < generator_count; ++i)
        all.push_back(mga_backend_set_generator(set.ptr, i));

    // Conditions: comma list of generator names, or "all" for the full pool.
    std::vector<mga_condition*> conditions;
    auto cleanup = [&conditions] {
        for (auto* c : conditions) mga_condition_free(c);
    };
    std::stringstream names(conditions_arg);
    std::string name;
    while (std::getline(names, name, ',')) {
        if (name.empty()) continue;
        mga_condition* condition = nullptr;
        if (name == "all") {
            status = mga_condition_new("all", all.data(), all.size(), &condition);
        } else {
            mga_backend* match = nullptr;
            for (auto* g : all)
                if (name == mga_backend_name(g)) match = g;
            if (!match) {
                std::cerr << "error: condition '" << name << "' names no configured generator\n";
                cleanup();
                return kExitConfig;
            }
            status = mga_condition_new(name.c_str(), &match, 1, &condition);
        }
        if (status != MGA_OK) {
            cleanup();
            return fail(status);
        }
        conditions.push_back(condition);
    }
    if (conditions.empty()) {
        std::cerr << "error: --conditions named no conditions\n";
        return kExitConfig;
    }

    std::signal(SIGINT, on_interrupt);
    mga_ga_config config = flags.to_config();
    OwnedString report;
    status = mga_benchmark_run(dataset_path.c_str(), kind.c_str(), conditions.data(),
                               conditions.size(), mga_backend_set_evaluator(set.ptr), task.ptr,
                               &config, out_dir.c_str(), flags.parallel,
                               store_path.empty() ? nullptr : store_path.c_str(), bench_progress,
                               nullptr, &report.ptr);
    cleanup();
    if (status == MGA_ERR_CANCELLED) {
        std::cerr << "interrupted; completed rows are checkpointed under " << out_dir << "\n";
        return kExitRuntime;
    }
    if (status != MGA_OK) return fail(status);

    bool ok = false;
    const std::string table = read_file(out_dir + "/report.txt", ok);
    if (ok) std::cout << table;
    std::cout << "report written to " << out_dir << "/report.json\n";
    return kExitOk;
}

int cmd_validate(const std::string& task_arg, const std::string& config_path) {
    TaskHandle task;
    mga_status status = load_task(task_arg, task);
    if (status != MGA_OK) return fail(status);
    std::cout << "task '" << mga_taskspec_id(task.ptr) << "' is valid\n";

    if (!config_path.empty()) {
        json doc;
        BackendSetHandle set;
        status = load_backends(config_path, set, doc);
        if (status != MGA_OK)
            return status == MGA_ERR_IO || status == MGA_ERR_CONFIG ? kExitConfig : fail(status);
        std::cout << "backend config is valid (" << mga_backend_set_generator_count(set.ptr)
                  << " generators + evaluator)\n";
    }
    return kExitOk;
}

int cmd_inspect(const std::string& path) {
    bool ok = false;
    const std::string text = read_file(path, ok);
    if (!ok) {
        std::cerr << "error: cannot read run result '" << path << "'\n";
        return kExitConfig;
    }
    OwnedString lineage;
    mga_status status = mga_lineage_render(text.c_str(), &lineage.ptr);
    if (status != MGA_OK) return fail(status);
    std::cout << lineage.str();
    return kExitOk;
}

// Offline end-to-end demo on scripted fixtures: five generators' worth of
// behaviour compressed into three, no sockets anywhere.
int cmd_demo(std::uint64_t seed) {
    TaskHandle task;
    mga_status status = mga_taskspec_bundled("gpqa", &task.ptr);
    if (status != MGA_OK) return fail(status);

    struct BackendHolder {
        mga_backend* ptr = nullptr;
        ~BackendHolder() { mga_backend_free(ptr); }
    };

    auto queue_backend = [](const char* name, std::vector<const char*> replies,
                            BackendHolder& out) {
        return mga_backend_scripted_queue(name, replies.data(), replies.size(), &out.ptr);
    };

    BackendHolder alpha, beta, gamma, evaluator;
    if (queue_backend("demo-alpha", {"The correct answer is A"}, alpha) != MGA_OK ||
        queue_backend("demo-beta", {"The correct answer is B"}, beta) != MGA_OK ||
        queue_backend("demo-gamma", {"The correct answer is C"}, gamma) != MGA_OK)
        return fail(MGA_ERR_UNKNOWN);
    // Scoring replies for the three seeds, then three crossover children,
    // then the score of the one child whose content is new.
    if (queue_backend("demo-evaluator",
                      {"0.70", "0.40", "0.10", "The correct answer is A",
                       "The correct answer is D", "The correct answer is A", "0.90"},
                      evaluator) != MGA_OK)
        return fail(MGA_ERR_UNKNOWN);

    const char* context_json = R"({
        "question": "Which gas dominates Earth's atmosphere?",
        "first_choice": "Nitrogen",
        "second_choice": "Oxygen",
        "third_choice": "Argon",
        "fourth_choice": "Carbon dioxide"
    })";

    mga_ga_config config;
    mga_ga_config_defaults(&config);
    config.max_generations = 2;
    config.rng_seed = seed;

    mga_backend* generators[] = {alpha.ptr, beta.ptr, gamma.ptr};
    RunResultHandle result;
    status = mga_run(&config, generators, 3, evaluator.ptr, task.ptr, context_json, &result.ptr);
    if (status != MGA_OK) return fail(status);

    OwnedString result_json;
    status = mga_run_result_to_json(result.ptr, &result_json.ptr);
    if (status != MGA_OK) return fail(status);

    OwnedString summary, lineage;
    if (mga_summary_render(result_json.ptr, &summary.ptr) != MGA_OK ||
        mga_lineage_render(result_json.ptr, &lineage.ptr) != MGA_OK)
        return fail(MGA_ERR_UNKNOWN);

    std::cout << "offline demo: 3 scripted generators, scripted evaluator, 2 generations\n\n";
    std::cout << summary.str() << "\n" << lineage.str();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-source genetic optimization over LLM-generated candidates"};
    app.require_subcommand(1);

    std::string task_arg, config_path, conditions_arg = "all";
    std::string run_out_dir, bench_out_dir = "bench_out";
    std::string inspect_path;
    GaFlags flags;

    CLI::App* run = app.add_subcommand("run", "execute one optimization run");
    run->add_option("--task", task_arg, "task config path or bundled:<name>")->required();
    run->add_option("--config", config_path, "backends + context config file")->required();
    run->add_option("--out-dir", run_out_dir, "where to save run_result.json (omit to skip)");
    flags.attach(run);

    CLI::App* bench = app.add_subcommand("bench", "benchmark seeding conditions over a dataset");
    bench->add_option("--task", task_arg, "task config path or bundled:<name>")->required();
    bench->add_option("--config", config_path, "backends + dataset config file")->required();
    bench->add_option("--conditions", conditions_arg,
                      "comma list of generator names and/or 'all'");
    bench->add_option("--out-dir", bench_out_dir, "directory for report + checkpoints");
    flags.attach(bench);

    CLI::App* validate = app.add_subcommand("validate", "validate configs without network calls");
    validate->add_option("--task", task_arg, "task config path or bundled:<name>")->required();
    validate->add_option("--config", config_path, "backend config file (optional)");

    CLI::App* inspect = app.add_subcommand("inspect", "render a saved run's lineage tree");
    inspect->add_option("run_result", inspect_path, "run_result.json written by 'run'")
        ->required();

    CLI::App* demo = app.add_subcommand("demo", "offline end-to-end demo on scripted fixtures");
    demo->add_option("--seed", flags.seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints usage, returns 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (run->parsed()) return cmd_run(task_arg, config_path, flags, run_out_dir);
    if (bench->parsed()) return cmd_bench(task_arg, config_path, conditions_arg, flags, bench_out_dir);
    if (validate->parsed()) return cmd_validate(task_arg, config_path);
    if (inspect->parsed()) return cmd_inspect(inspect_path);
    if (demo->parsed()) return cmd_demo(flags.seed);
    return kExitUsage;
}
