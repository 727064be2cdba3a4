#include "multiga/taskspec.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "multiga/errors.hpp"
#include "multiga/template.hpp"

namespace multiga {

namespace detail {
// Defined in the generated bundled_tasks.cpp; returns nullptr for unknown
// names.
const std::string* bundled_task_json(const std::string& name);
}  // namespace detail

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const json& require(const json& parent, const char* key, const std::string& origin) {
    auto it = parent.find(key);
    if (it == parent.end())
        throw Error(ErrorKind::schema, origin + ": missing section '" + key + "'");
    return *it;
}

std::string require_string(const json& parent, const char* key, const std::string& origin) {
    const json& v = require(parent, key, origin);
    if (!v.is_string())
        throw Error(ErrorKind::schema, origin + ": section '" + key + "' must be a string");
    return v.get<std::string>();
}

AnswerRuleKind answer_kind_from(const std::string& name, const std::string& origin) {
    if (name == "free_text") return AnswerRuleKind::free_text;
    if (name == "marker") return AnswerRuleKind::marker;
    if (name == "choice_letter") return AnswerRuleKind::choice_letter;
    throw Error(ErrorKind::schema, origin + ": unknown answer_rule.kind '" + name + "'");
}

const char* answer_kind_name(AnswerRuleKind kind) {
    switch (kind) {
        case AnswerRuleKind::free_text: return "free_text";
        case AnswerRuleKind::marker: return "marker";
        case AnswerRuleKind::choice_letter: return "choice_letter";
    }
    return "free_text";
}

}  // namespace

std::set<std::string> TaskSpec::placeholders_of(const std::string& tmpl) const {
    return scan_placeholders(tmpl);
}

TaskSpec parse_taskspec(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::schema, origin + ": not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::schema, origin + ": top level must be an object");

    TaskSpec spec;
    spec.task_id = require_string(doc, "task_id", origin);

    const json& templates = require(doc, "templates", origin);
    const json& init = require(templates, "init", origin + ".templates");
    const json& crossover = require(templates, "crossover", origin + ".templates");
    const json& eval = require(templates, "eval", origin + ".templates");
    spec.init_system = require_string(init, "system", origin + ".templates.init");
    spec.init_user = require_string(init, "user", origin + ".templates.init");
    spec.crossover_system = require_string(crossover, "system", origin + ".templates.crossover");
    spec.crossover_user = require_string(crossover, "user", origin + ".templates.crossover");
    spec.eval_system = require_string(eval, "system", origin + ".templates.eval");
    spec.eval_user = require_string(eval, "user", origin + ".templates.eval");
    spec.candidate_placeholder = eval.value("candidate_placeholder", "candidate_answer");

    const json& placeholders = require(doc, "placeholders", origin);
    if (!placeholders.is_array())
        throw Error(ErrorKind::schema, origin + ": 'placeholders' must be an array");
    for (const auto& p : placeholders) {
        if (!p.is_string())
            throw Error(ErrorKind::schema, origin + ": placeholder names must be strings");
        spec.placeholder_schema.insert(p.get<std::string>());
    }

    const json& rule = require(doc, "answer_rule", origin);
    spec.answer_rule.kind = answer_kind_from(require_string(rule, "kind", origin + ".answer_rule"),
                                             origin + ".answer_rule");
    spec.answer_rule.pattern = rule.value("pattern", "");
    if (spec.answer_rule.kind != AnswerRuleKind::free_text && spec.answer_rule.pattern.empty())
        throw Error(ErrorKind::schema, origin + ": answer_rule of kind '" +
                                           std::string(answer_kind_name(spec.answer_rule.kind)) +
                                           "' requires a pattern");

    if (doc.contains("retrieval") && !doc["retrieval"].is_null()) {
        const json& retrieval = doc["retrieval"];
        RetrievalConfig rc;
        rc.store_path = retrieval.value("store_path", "");
        rc.n_pos = retrieval.value("n_pos", 3);
        rc.n_neg = retrieval.value("n_neg", 3);
        if (rc.n_pos < 0 || rc.n_neg < 0)
            throw Error(ErrorKind::schema, origin + ": retrieval counts must be >= 0");
        spec.retrieval = rc;
    }

    // Every placeholder a template references must be declared.
    const std::pair<const char*, const std::string*> sections[] = {
        {"templates.init.system", &spec.init_system},
        {"templates.init.user", &spec.init_user},
        {"templates.crossover.system", &spec.crossover_system},
        {"templates.crossover.user", &spec.crossover_user},
        {"templates.eval.system", &spec.eval_system},
        {"templates.eval.user", &spec.eval_user},
    };
    for (const auto& [label, text] : sections) {
        for (const auto& name : scan_placeholders(*text)) {
            if (!spec.placeholder_schema.count(name))
                throw Error(ErrorKind::schema, origin + ": " + label +
                                                   " references undeclared placeholder '" + name +
                                                   "'");
        }
    }

    const auto crossover_refs = scan_placeholders(spec.crossover_user);
    if (!crossover_refs.count("parent_1") || !crossover_refs.count("parent_2"))
        throw Error(ErrorKind::schema,
                    origin + ": crossover user template must reference both parent_1 and parent_2");

    if (!scan_placeholders(spec.eval_user).count(spec.candidate_placeholder))
        throw Error(ErrorKind::schema, origin + ": eval user template does not reference the "
                                                "candidate placeholder '" +
                                           spec.candidate_placeholder + "'");

    return spec;
}

TaskSpec load_taskspec(const std::string& path) {
    return parse_taskspec(read_file(path), path);
}

std::string TaskSpec::to_json() const {
    json doc;
    doc["task_id"] = task_id;
    doc["templates"]["init"] = {{"system", init_system}, {"user", init_user}};
    doc["templates"]["crossover"] = {{"system", crossover_system}, {"user", crossover_user}};
    doc["templates"]["eval"] = {{"system", eval_system},
                                {"user", eval_user},
                                {"candidate_placeholder", candidate_placeholder}};
    doc["placeholders"] = json::array();
    for (const auto& p : placeholder_schema) doc["placeholders"].push_back(p);
    doc["answer_rule"] = {{"kind", answer_kind_name(answer_rule.kind)}};
    if (!answer_rule.pattern.empty()) doc["answer_rule"]["pattern"] = answer_rule.pattern;
    if (retrieval) {
        doc["retrieval"] = {{"store_path", retrieval->store_path},
                            {"n_pos", retrieval->n_pos},
                            {"n_neg", retrieval->n_neg}};
    }
    return doc.dump(2);
}

const std::vector<std::string>& bundled_task_names() {
    static const std::vector<std::string> names = {"sql", "meeting", "gpqa", "bbq"};
    return names;
}

const std::string& bundled_taskspec_json(const std::string& name) {
    const std::string* text = detail::bundled_task_json(name);
    if (!text)
        throw Error(ErrorKind::config,
                    "unknown bundled task '" + name + "' (expected sql, meeting, gpqa or bbq)");
    return *text;
}

TaskSpec bundled_taskspec(const std::string& name) {
    return parse_taskspec(bundled_taskspec_json(name), "bundled:" + name);
}

}  // namespace multiga
