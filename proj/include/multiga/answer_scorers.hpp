#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "multiga/backend.hpp"

namespace multiga {

struct LetterScore {
    bool correct = false;
    char extracted = 0;        // 0 when nothing parsed
    bool unparsable = false;   // marker or letter absent
    bool format_deviant = false;  // letter found but reply carries extra text
};

/// Extracts the letter after the LAST "The correct answer is" occurrence
/// (case-insensitive) and compares against the gold letter. Trailing prose
/// after the letter is tolerated but flagged.
LetterScore score_gpqa(std::string_view reply, char gold_letter);

struct ChoiceScore {
    bool correct = false;
    int mapped_index = -1;
    bool unparsable = false;
    bool used_extractor = false;  // stage-2 evaluator call was needed
};

/// Maps a free-text reply onto one of three options: first by normalized
/// substring match on the option texts, then, if that is not decisive, by a
/// single extraction call to the evaluator asking which option the reply
/// asserts (expects 0/1/2 back).
ChoiceScore score_bbq(std::string_view reply, const std::vector<std::string>& choices,
                      int gold_index, const BackendHandle& extractor);

/// Lowercases, expands n't contractions, strips punctuation, collapses
/// whitespace (exposed for tests).
std::string normalize_for_match(std::string_view text);

}  // namespace multiga
