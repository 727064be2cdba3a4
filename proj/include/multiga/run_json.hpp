#pragma once

#include <string>

#include "multiga/types.hpp"

namespace multiga {

/// Stable JSON form of a run's audit trail (sorted keys, no wall-clock
/// fields): two runs with identical inputs serialize byte-identically.
std::string run_result_to_json(const RunResult& result);

RunResult run_result_from_json(const std::string& json_text);

/// Text tree of the lineage: candidates per generation with origin, score,
/// retirement, and parent links for each crossover child.
std::string render_lineage(const RunResult& result);

/// Per-generation one-line summary (population, best, parents, children,
/// retirements) plus the outcome line.
std::string render_summary(const RunResult& result);

}  // namespace multiga
