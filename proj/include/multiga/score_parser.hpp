#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace multiga {

/// Fitness parsing for the "Respond with only a single float" contract:
/// strip whitespace and code fences, take the FIRST decimal literal, clamp
/// to [0,1], round to two decimals. Throws Error{parse} when the reply
/// carries no decimal literal at all.
double parse_fitness(std::string_view reply);

/// Non-throwing variant.
std::optional<double> try_parse_fitness(std::string_view reply);

struct SanitizedReply {
    std::string text;
    /// Set when the task requires a leading marker and the reply lacks it.
    bool marker_missing = false;
};

/// Strips surrounding code fences / markdown wrappers and trims whitespace.
/// When required_marker is non-empty, everything before its first occurrence
/// is dropped; an absent marker is flagged, not fatal (the candidate is kept
/// and the evaluator will punish it). Idempotent.
SanitizedReply sanitize_solution(std::string_view reply, std::string_view required_marker = {});

}  // namespace multiga
