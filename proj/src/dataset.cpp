#include "multiga/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "multiga/errors.hpp"

namespace multiga {

namespace {

using nlohmann::json;

std::string constraints_text(const std::vector<MeetingConstraint>& constraints) {
    std::ostringstream out;
    for (const auto& c : constraints) {
        out << "- " << c.person << ": at " << c.location << " from "
            << format_clock(c.window_start) << " to " << format_clock(c.window_end)
            << ", minimum " << c.min_duration << " minutes.\n";
    }
    return out.str();
}

std::string matrix_text(const TravelMatrix& dist) {
    std::ostringstream out;
    for (const auto& [from, row] : dist)
        for (const auto& [to, minutes] : row)
            if (from != to) out << "- " << from << " to " << to << ": " << minutes << " minutes.\n";
    return out.str();
}

std::string reject(const std::string& row_id, std::size_t line_no, const std::string& why) {
    return "row '" + (row_id.empty() ? "line " + std::to_string(line_no) : row_id) +
           "' rejected: " + why;
}

}  // namespace

TaskKind task_kind_from_string(const std::string& name) {
    if (name == "sql") return TaskKind::sql;
    if (name == "meeting") return TaskKind::meeting;
    if (name == "gpqa") return TaskKind::gpqa;
    if (name == "bbq") return TaskKind::bbq;
    throw Error(ErrorKind::config,
                "unknown task kind '" + name + "' (expected sql, meeting, gpqa or bbq)");
}

const char* to_string(TaskKind kind) {
    switch (kind) {
        case TaskKind::sql: return "sql";
        case TaskKind::meeting: return "meeting";
        case TaskKind::gpqa: return "gpqa";
        case TaskKind::bbq: return "bbq";
    }
    return "sql";
}

DatasetLoadReport load_dataset(const std::string& path, TaskKind kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open dataset: " + path);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    DatasetLoadReport report;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json row = json::parse(line, nullptr, false);
        if (row.is_discarded() || !row.is_object())
            throw Error(ErrorKind::schema,
                        path + ":" + std::to_string(line_no) + ": malformed JSON line");

        DatasetRow out;
        out.task_kind = kind;
        out.row_id = row.value("row_id", "");
        if (out.row_id.empty()) {
            report.warnings.push_back(reject("", line_no, "missing row_id"));
            continue;
        }
        if (!row.contains("gold") || !row["gold"].is_object()) {
            report.warnings.push_back(reject(out.row_id, line_no, "missing gold"));
            continue;
        }
        const json& gold = row["gold"];

        try {
            switch (kind) {
                case TaskKind::sql: {
                    if (!row.contains("query") || !row["query"].is_string())
                        throw Error(ErrorKind::schema, "missing query");
                    SqlGold g;
                    g.sql = gold.value("sql", "");
                    if (g.sql.empty()) throw Error(ErrorKind::schema, "gold.sql missing");
                    g.db_path = gold.value("db_path", "");
                    if (g.db_path.empty()) throw Error(ErrorKind::schema, "gold.db_path missing");
                    if (!std::filesystem::path(g.db_path).is_absolute())
                        g.db_path = (base / g.db_path).string();
                    out.gold = g;

                    const std::string query = row["query"].get<std::string>();
                    out.context_bindings.set("query", query);
                    out.context_bindings.set("user_query", query);
                    for (const char* field :
                         {"db_schema", "evidence", "ie_extracted", "current_date",
                          "output_example"})
                        out.context_bindings.set(field, row.value(field, ""));
                    break;
                }
                case TaskKind::meeting: {
                    if (!row.contains("constraints") || !row["constraints"].is_array())
                        throw Error(ErrorKind::schema, "missing constraints array");
                    for (const auto& c : row["constraints"]) {
                        MeetingConstraint mc;
                        mc.person = c.at("person").get<std::string>();
                        mc.location = c.at("location").get<std::string>();
                        mc.window_start = parse_clock(c.at("window_start").get<std::string>());
                        mc.window_end = parse_clock(c.at("window_end").get<std::string>());
                        mc.min_duration = c.at("min_minutes").get<int>();
                        out.constraints.push_back(std::move(mc));
                    }
                    if (!row.contains("dist_matrix") || !row["dist_matrix"].is_object())
                        throw Error(ErrorKind::schema, "missing dist_matrix object");
                    for (const auto& [from, cells] : row["dist_matrix"].items())
                        for (const auto& [to, minutes] : cells.items())
                            out.dist[from][to] = minutes.get<int>();
                    if (!gold.contains("optimal_meetings"))
                        throw Error(ErrorKind::schema, "gold.optimal_meetings missing");
                    out.gold = MeetingGold{gold["optimal_meetings"].get<int>()};

                    std::string description = row.value("description", "");
                    std::string ctext = constraints_text(out.constraints);
                    if (!description.empty()) ctext = description + "\n" + ctext;
                    out.context_bindings.set("constraints", ctext);
                    out.context_bindings.set("dist_matrix", matrix_text(out.dist));
                    break;
                }
                case TaskKind::gpqa: {
                    if (!row.contains("question") || !row["question"].is_string())
                        throw Error(ErrorKind::schema, "missing question");
                    out.choices = row.value("choices", std::vector<std::string>{});
                    if (out.choices.size() != 4)
                        throw Error(ErrorKind::schema, "gpqa rows need exactly 4 choices");
                    const std::string letter = gold.value("letter", "");
                    if (letter.size() != 1 || letter[0] < 'A' || letter[0] > 'D')
                        throw Error(ErrorKind::schema, "gold.letter must be one of A-D");
                    out.gold = LetterGold{letter[0]};

                    out.context_bindings.set("question", row["question"].get<std::string>());
                    out.context_bindings.set("first_choice", out.choices[0]);
                    out.context_bindings.set("second_choice", out.choices[1]);
                    out.context_bindings.set("third_choice", out.choices[2]);
                    out.context_bindings.set("fourth_choice", out.choices[3]);
                    break;
                }
                case TaskKind::bbq: {
                    if (!row.contains("question") || !row["question"].is_string())
                        throw Error(ErrorKind::schema, "missing question");
                    out.choices = row.value("choices", std::vector<std::string>{});
                    if (out.choices.size() != 3)
                        throw Error(ErrorKind::schema, "bbq rows need exactly 3 choices");
                    if (!gold.contains("index")) throw Error(ErrorKind::schema, "gold.index missing");
                    const int index = gold["index"].get<int>();
                    if (index < 0 || index > 2)
                        throw Error(ErrorKind::schema, "gold.index must lie in 0..2");
                    out.gold = IndexGold{index};

                    out.context_bindings.set("setting", row.value("setting", ""));
                    out.context_bindings.set("question", row["question"].get<std::string>());
                    out.context_bindings.set("first_choice", out.choices[0]);
                    out.context_bindings.set("second_choice", out.choices[1]);
                    out.context_bindings.set("third_choice", out.choices[2]);
                    break;
                }
            }
        } catch (const Error& e) {
            report.warnings.push_back(reject(out.row_id, line_no, e.what()));
            continue;
        } catch (const json::exception& e) {
            report.warnings.push_back(reject(out.row_id, line_no, e.what()));
            continue;
        }
        report.rows.push_back(std::move(out));
    }
    if (report.rows.empty())
        report.warnings.push_back("dataset '" + path + "' yielded no rows");
    return report;
}

}  // namespace multiga
