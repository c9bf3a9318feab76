#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace mhsense::gateway {

using Bindings = std::map<std::string, std::string>;

// A prompt body with `<slot>` placeholders. Slot names are lowercase
// snake_case identifiers; any other angle-bracketed text in the body (model
// output format descriptions such as `<score>`... that happen to be
// undeclared) is left untouched by rendering.
struct PromptTemplate {
    std::string name;
    std::string body;
    std::vector<std::string> required_slots;
};

// Deterministic single-pass substitution. Every required slot must be bound
// (MissingSlot otherwise); bound names are replaced wherever `<name>` occurs.
std::string render_template(const PromptTemplate& tmpl, const Bindings& bindings);

// One prompt file = one system/user prompt pair sharing a slot list.
struct PromptFile {
    std::string name;
    std::vector<std::string> slots;
    PromptTemplate system;
    PromptTemplate user;
};

// Parses the on-disk format:
//   # slots: a b c        (optional header lines before the first section)
//   ### SYSTEM
//   ...body...
//   ### USER
//   ...body...
PromptFile parse_prompt_file(const std::string& name, const std::string& content);

// Loads every *.txt directly inside `dir` (assets live in subdirectories and
// are handled by PromptAssets).
class PromptLibrary {
public:
    explicit PromptLibrary(const std::filesystem::path& dir);

    const PromptFile& get(const std::string& name) const;
    bool contains(const std::string& name) const { return files_.count(name) > 0; }
    std::vector<std::string> names() const;

private:
    std::map<std::string, PromptFile> files_;
};

// Stable digest of a binding set; scripted backends key exact replies on
// (template name, binding digest).
std::string binding_digest(const Bindings& bindings);

}  // namespace mhsense::gateway
