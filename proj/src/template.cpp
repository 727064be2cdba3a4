#include "multiga/template.hpp"

#include <cctype>

#include "multiga/errors.hpp"

namespace multiga {

namespace {

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Parses an identifier at position i; returns its length (0 if none).
std::size_t ident_length(std::string_view s, std::size_t i) {
    if (i >= s.size() || !ident_start(s[i])) return 0;
    std::size_t j = i + 1;
    while (j < s.size() && ident_char(s[j])) ++j;
    return j - i;
}

// Recognizes a {name} or {{name}} token at position i. On a match, fills
// name and the token's total length.
bool match_token(std::string_view s, std::size_t i, std::string& name, std::size_t& length) {
    if (s[i] != '{') return false;
    const bool doubled = i + 1 < s.size() && s[i + 1] == '{';
    const std::size_t name_pos = i + (doubled ? 2 : 1);
    const std::size_t n = ident_length(s, name_pos);
    if (n == 0) return false;
    const std::size_t close = name_pos + n;
    if (doubled) {
        if (close + 1 < s.size() && s[close] == '}' && s[close + 1] == '}') {
            name.assign(s.substr(name_pos, n));
            length = n + 4;
            return true;
        }
        return false;
    }
    if (close < s.size() && s[close] == '}') {
        name.assign(s.substr(name_pos, n));
        length = n + 2;
        return true;
    }
    return false;
}

}  // namespace

std::set<std::string> scan_placeholders(std::string_view tmpl) {
    std::set<std::string> names;
    std::string name;
    std::size_t length = 0;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (tmpl[i] != '{') continue;
        if (match_token(tmpl, i, name, length)) {
            names.insert(name);
            i += length - 1;
        }
    }
    return names;
}

std::string render(std::string_view tmpl, const TemplateContext& context) {
    std::string out;
    out.reserve(tmpl.size());
    std::string name;
    std::size_t length = 0;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{' && match_token(tmpl, i, name, length)) {
            auto it = context.bindings.find(name);
            if (it == context.bindings.end())
                throw Error(ErrorKind::render, "no binding for placeholder '" + name + "'");
            // Substituted values are appended as-is and never re-scanned.
            out += it->second;
            i += length;
            continue;
        }
        out += tmpl[i];
        ++i;
    }
    return out;
}

}  // namespace multiga
