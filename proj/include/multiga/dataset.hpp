#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "multiga/meeting_plan.hpp"
#include "multiga/template.hpp"

namespace multiga {

enum class TaskKind { sql, meeting, gpqa, bbq };

TaskKind task_kind_from_string(const std::string& name);
const char* to_string(TaskKind kind);

struct SqlGold {
    std::string sql;
    std::string db_path;  // resolved relative to the dataset file
};
struct MeetingGold {
    int optimal_meetings = 0;
};
struct LetterGold {
    char letter = 'A';  // A-D
};
struct IndexGold {
    int index = 0;  // 0-2
};

using Gold = std::variant<SqlGold, MeetingGold, LetterGold, IndexGold>;

/// One benchmark instance: the template bindings for prompting plus the
/// ground truth needed to score the run's best candidate.
struct DatasetRow {
    std::string row_id;
    TaskKind task_kind = TaskKind::sql;
    TemplateContext context_bindings;
    Gold gold;

    // Structured fields kept alongside the text bindings where the scorer
    // needs them.
    std::vector<MeetingConstraint> constraints;  // meeting rows
    TravelMatrix dist;                           // meeting rows
    std::vector<std::string> choices;            // gpqa (4) / bbq (3) rows
};

struct DatasetLoadReport {
    std::vector<DatasetRow> rows;
    std::vector<std::string> warnings;  // rejected rows, empty-file note
};

/// Loads a JSON-lines dataset, one row object per line. A malformed line is
/// an error naming the line number; a structurally valid row missing its
/// gold (or other required fields) is rejected with a reason in the report.
DatasetLoadReport load_dataset(const std::string& path, TaskKind kind);

}  // namespace multiga
