#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace multiga {

enum class AnswerRuleKind {
    free_text,
    marker,        // solutions must open with a marker line, e.g. "SOLUTION:"
    choice_letter, // answers carry a letter after a marker phrase
};

struct AnswerRule {
    AnswerRuleKind kind = AnswerRuleKind::free_text;
    std::string pattern;  // marker string or letter-marker phrase
    bool operator==(const AnswerRule&) const = default;
};

struct RetrievalConfig {
    std::string store_path;  // may be empty: supplied at run time
    int n_pos = 3;
    int n_neg = 3;
    bool operator==(const RetrievalConfig&) const = default;
};

/// A task definition loaded from a JSON config file: the three prompt
/// template pairs, the declared placeholder names, answer extraction rules,
/// and optional few-shot retrieval settings. Immutable after load; safe for
/// unrestricted concurrent reads.
struct TaskSpec {
    std::string task_id;

    std::string init_system;
    std::string init_user;
    std::string crossover_system;
    std::string crossover_user;
    std::string eval_system;
    std::string eval_user;

    /// Placeholder receiving the candidate's content in the eval template
    /// (task-dependent: "sql", "plan", "candidate_answer", ...).
    std::string candidate_placeholder;

    std::set<std::string> placeholder_schema;
    AnswerRule answer_rule;
    std::optional<RetrievalConfig> retrieval;

    /// Placeholders referenced by one template (subset of the schema).
    std::set<std::string> placeholders_of(const std::string& tmpl) const;

    std::string to_json() const;

    bool operator==(const TaskSpec&) const = default;
};

/// Loads and fully validates a task config file. Every template section must
/// be present, every placeholder referenced by a template must be declared,
/// and the crossover user template must reference both parent slots.
TaskSpec load_taskspec(const std::string& path);

/// Parses a task config from JSON text (same validation as load_taskspec).
TaskSpec parse_taskspec(const std::string& json_text, const std::string& origin_label);

/// One of the four tasks shipped with the library: "sql", "meeting", "gpqa",
/// "bbq". Throws Error{config} for an unknown name.
TaskSpec bundled_taskspec(const std::string& name);

const std::vector<std::string>& bundled_task_names();

/// Raw JSON text of a bundled task config (exactly what tasks/<name>.json
/// contains).
const std::string& bundled_taskspec_json(const std::string& name);

}  // namespace multiga
