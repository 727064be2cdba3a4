#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

namespace multiga {

/// Placeholder bindings for one render. Values are plain text; rendering is
/// single-pass, so braces inside a substituted value stay literal.
struct TemplateContext {
    std::map<std::string, std::string> bindings;

    bool has(const std::string& name) const { return bindings.count(name) > 0; }
    void set(std::string name, std::string value) { bindings[std::move(name)] = std::move(value); }
};

/// Identifier-like placeholder names referenced by a template, both {name}
/// and the double-braced {{name}} spelling.
std::set<std::string> scan_placeholders(std::string_view tmpl);

/// Single-pass substitution of {name} and {{name}} tokens. Every referenced
/// placeholder must be bound; a missing binding throws Error{render} naming
/// it. Brace runs that are not identifier-like tokens pass through verbatim.
std::string render(std::string_view tmpl, const TemplateContext& context);

}  // namespace multiga
