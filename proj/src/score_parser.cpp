#include "multiga/score_parser.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "multiga/errors.hpp"

namespace multiga {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Removes one surrounding ``` fence layer (with optional language tag after
// the opening fence). Returns true when a layer was removed.
bool strip_fence_layer(std::string_view& s) {
    if (s.size() < 6 || s.substr(0, 3) != "```") return false;
    if (s.substr(s.size() - 3) != "```") return false;
    std::string_view inner = s.substr(3, s.size() - 6);
    // Drop the language tag: everything up to the first newline if the tag
    // line holds no spaces (e.g. "sql", "json").
    auto nl = inner.find('\n');
    if (nl != std::string_view::npos) {
        std::string_view tag = trim(inner.substr(0, nl));
        if (tag.find(' ') == std::string_view::npos) inner.remove_prefix(nl + 1);
    }
    s = trim(inner);
    return true;
}

std::string_view strip_fences(std::string_view s) {
    s = trim(s);
    while (strip_fence_layer(s)) {
    }
    return s;
}

}  // namespace

std::optional<double> try_parse_fitness(std::string_view reply) {
    std::string_view s = strip_fences(reply);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        const bool digit = std::isdigit(static_cast<unsigned char>(c));
        const bool dot_then_digit = c == '.' && i + 1 < s.size() &&
                                    std::isdigit(static_cast<unsigned char>(s[i + 1]));
        if (!digit && !dot_then_digit) continue;

        std::size_t start = i;
        // A sign directly before the literal belongs to it.
        if (start > 0 && (s[start - 1] == '-' || s[start - 1] == '+')) --start;
        std::size_t end = i;
        bool seen_dot = false;
        while (end < s.size()) {
            if (std::isdigit(static_cast<unsigned char>(s[end]))) {
                ++end;
            } else if (s[end] == '.' && !seen_dot && end + 1 < s.size() &&
                       std::isdigit(static_cast<unsigned char>(s[end + 1]))) {
                seen_dot = true;
                ++end;
            } else {
                break;
            }
        }
        const std::string literal(s.substr(start, end - start));
        const double value = std::strtod(literal.c_str(), nullptr);
        const double clamped = std::clamp(value, 0.0, 1.0);
        return std::round(clamped * 100.0) / 100.0;
    }
    return std::nullopt;
}

double parse_fitness(std::string_view reply) {
    auto score = try_parse_fitness(reply);
    if (!score)
        throw Error(ErrorKind::parse, "fitness reply carries no decimal literal: \"" +
                                          std::string(reply.substr(0, 80)) + "\"");
    return *score;
}

SanitizedReply sanitize_solution(std::string_view reply, std::string_view required_marker) {
    SanitizedReply out;
    std::string_view s = strip_fences(reply);
    if (!required_marker.empty()) {
        auto pos = s.find(required_marker);
        if (pos == std::string_view::npos) {
            out.marker_missing = true;
        } else {
            s = s.substr(pos);
        }
    }
    out.text = std::string(s);
    return out;
}

}  // namespace multiga
