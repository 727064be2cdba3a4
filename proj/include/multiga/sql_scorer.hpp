#pragma once

#include <string>
#include <string_view>

namespace multiga {

struct SqlScore {
    bool correct = false;
    std::string error;  // execution error captured from the predicted query
};

/// Execution accuracy: runs both queries against the database and compares
/// result multisets, ignoring row order; predicted rows are projected to the
/// gold query's column count. A failing predicted query is incorrect with
/// the error captured; a failing GOLD query is a data defect and throws.
/// Access is serialized per database file.
SqlScore score_sql(std::string_view predicted_sql, std::string_view gold_sql,
                   const std::string& db_path);

/// Executes one query and renders its result as text (for eval prompts),
/// truncated to max_chars. Errors render as "Error: ...".
std::string execute_sql_for_prompt(std::string_view sql, const std::string& db_path,
                                   std::size_t max_chars = 2000);

}  // namespace multiga
