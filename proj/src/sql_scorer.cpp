#include "multiga/sql_scorer.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <variant>
#include <vector>

#include <sqlite3.h>

#include "multiga/errors.hpp"

namespace multiga {

namespace {

// score_sql may run from concurrent benchmark rows; serialize per db file.
std::mutex& db_mutex(const std::string& path) {
    static std::mutex registry_mutex;
    static std::map<std::string, std::mutex> registry;
    std::lock_guard lock(registry_mutex);
    return registry[path];
}

struct DbHandle {
    sqlite3* db = nullptr;
    explicit DbHandle(const std::string& path) {
        if (sqlite3_open_v2(path.c_str(), &db, SQLITE_OPEN_READONLY, nullptr) != SQLITE_OK) {
            std::string msg = db ? sqlite3_errmsg(db) : "out of memory";
            if (db) sqlite3_close(db);
            db = nullptr;
            throw Error(ErrorKind::io, "cannot open database '" + path + "': " + msg);
        }
    }
    ~DbHandle() {
        if (db) sqlite3_close(db);
    }
};

// A cell normalized for comparison: integers and floats compare numerically.
using Cell = std::variant<std::nullptr_t, double, std::string>;
using Row = std::vector<Cell>;

struct QueryResult {
    std::vector<Row> rows;
    int columns = 0;
};

QueryResult execute(sqlite3* db, std::string_view sql) {
    sqlite3_stmt* stmt = nullptr;
    const std::string text(sql);
    if (sqlite3_prepare_v2(db, text.c_str(), -1, &stmt, nullptr) != SQLITE_OK) {
        std::string msg = sqlite3_errmsg(db);
        throw Error(ErrorKind::parse, msg);
    }
    QueryResult result;
    result.columns = sqlite3_column_count(stmt);
    int rc;
    while ((rc = sqlite3_step(stmt)) == SQLITE_ROW) {
        Row row;
        row.reserve(result.columns);
        for (int c = 0; c < result.columns; ++c) {
            switch (sqlite3_column_type(stmt, c)) {
                case SQLITE_NULL: row.emplace_back(nullptr); break;
                case SQLITE_INTEGER:
                    row.emplace_back(static_cast<double>(sqlite3_column_int64(stmt, c)));
                    break;
                case SQLITE_FLOAT: row.emplace_back(sqlite3_column_double(stmt, c)); break;
                default:
                    row.emplace_back(std::string(
                        reinterpret_cast<const char*>(sqlite3_column_text(stmt, c))));
                    break;
            }
        }
        result.rows.push_back(std::move(row));
    }
    if (rc != SQLITE_DONE) {
        std::string msg = sqlite3_errmsg(db);
        sqlite3_finalize(stmt);
        throw Error(ErrorKind::parse, msg);
    }
    sqlite3_finalize(stmt);
    return result;
}

// Multiset comparison after projecting both sides to n_columns.
bool rows_equal_as_multisets(std::vector<Row> a, std::vector<Row> b, int n_columns) {
    auto project = [n_columns](std::vector<Row>& rows) {
        for (auto& row : rows)
            if (row.size() > static_cast<std::size_t>(n_columns))
                row.resize(static_cast<std::size_t>(n_columns));
    };
    project(a);
    project(b);
    if (a.size() != b.size()) return false;
    auto key = [](const Row& row) {
        std::string k;
        for (const auto& cell : row) {
            if (std::holds_alternative<std::nullptr_t>(cell)) {
                k += "\x01N";
            } else if (const auto* num = std::get_if<double>(&cell)) {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "\x01#%.17g", *num);
                k += buf;
            } else {
                k += "\x01S" + std::get<std::string>(cell);
            }
        }
        return k;
    };
    std::vector<std::string> ka, kb;
    ka.reserve(a.size());
    kb.reserve(b.size());
    for (const auto& row : a) ka.push_back(key(row));
    for (const auto& row : b) kb.push_back(key(row));
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    return ka == kb;
}

std::string cell_text(const Cell& cell) {
    if (std::holds_alternative<std::nullptr_t>(cell)) return "NULL";
    if (const auto* num = std::get_if<double>(&cell)) {
        char buf[40];
        if (*num == static_cast<std::int64_t>(*num))
            std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(*num));
        else
            std::snprintf(buf, sizeof(buf), "%g", *num);
        return buf;
    }
    return std::get<std::string>(cell);
}

}  // namespace

SqlScore score_sql(std::string_view predicted_sql, std::string_view gold_sql,
                   const std::string& db_path) {
    std::lock_guard lock(db_mutex(db_path));
    DbHandle handle(db_path);

    QueryResult gold;
    try {
        gold = execute(handle.db, gold_sql);
    } catch (const Error& e) {
        // A broken gold query is a defect in the benchmark data, not a
        // wrong prediction; fail loudly.
        throw Error(ErrorKind::data,
                    "gold query failed on '" + db_path + "': " + e.what());
    }

    SqlScore score;
    QueryResult predicted;
    try {
        predicted = execute(handle.db, predicted_sql);
    } catch (const Error& e) {
        score.correct = false;
        score.error = e.what();
        return score;
    }
    if (predicted.columns < gold.columns) {
        score.correct = false;
        return score;
    }
    score.correct = rows_equal_as_multisets(std::move(predicted.rows), std::move(gold.rows),
                                            gold.columns);
    return score;
}

std::string execute_sql_for_prompt(std::string_view sql, const std::string& db_path,
                                   std::size_t max_chars) {
    std::lock_guard lock(db_mutex(db_path));
    std::ostringstream out;
    bool clipped = false;
    try {
        DbHandle handle(db_path);
        QueryResult result = execute(handle.db, sql);
        out << result.rows.size() << " row(s)\n";
        for (const auto& row : result.rows) {
            if (out.tellp() >= 0 && static_cast<std::size_t>(out.tellp()) > max_chars) {
                clipped = true;
                break;
            }
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out << " | ";
                out << cell_text(row[c]);
            }
            out << "\n";
        }
    } catch (const Error& e) {
        return std::string("Error: ") + e.what();
    }
    std::string text = out.str();
    if (text.size() > max_chars) {
        text.resize(max_chars);
        clipped = true;
    }
    if (clipped) text += "\n... (truncated)";
    return text;
}

}  // namespace multiga
