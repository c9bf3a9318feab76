#include "mhsense/gateway/template.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "mhsense/errors.hpp"
#include "mhsense/util.hpp"

namespace mhsense::gateway {

namespace {

bool is_slot_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

std::string render_template(const PromptTemplate& tmpl, const Bindings& bindings) {
    for (const auto& slot : tmpl.required_slots) {
        if (!bindings.count(slot)) throw MissingSlot(slot);
    }
    const std::string& body = tmpl.body;
    std::string out;
    out.reserve(body.size());
    std::size_t i = 0;
    while (i < body.size()) {
        if (body[i] != '<') {
            out.push_back(body[i++]);
            continue;
        }
        std::size_t j = i + 1;
        while (j < body.size() && is_slot_char(body[j])) ++j;
        if (j > i + 1 && j < body.size() && body[j] == '>') {
            const std::string name = body.substr(i + 1, j - i - 1);
            auto it = bindings.find(name);
            if (it != bindings.end()) {
                out += it->second;
                i = j + 1;
                continue;
            }
        }
        out.push_back(body[i++]);
    }
    return out;
}

PromptFile parse_prompt_file(const std::string& name, const std::string& content) {
    PromptFile file;
    file.name = name;

    enum class Section { Header, System, User };
    Section section = Section::Header;
    std::string system_body, user_body;
    bool saw_system = false, saw_user = false;

    for (const auto& line : split_lines(content)) {
        const std::string trimmed = trim(line);
        if (trimmed == "### SYSTEM") {
            section = Section::System;
            saw_system = true;
            continue;
        }
        if (trimmed == "### USER") {
            section = Section::User;
            saw_user = true;
            continue;
        }
        switch (section) {
            case Section::Header:
                if (trimmed.rfind("# slots:", 0) == 0) {
                    std::istringstream ss(trimmed.substr(8));
                    std::string slot;
                    while (ss >> slot) file.slots.push_back(slot);
                }
                break;
            case Section::System:
                system_body += line;
                system_body += '\n';
                break;
            case Section::User:
                user_body += line;
                user_body += '\n';
                break;
        }
    }
    if (!saw_system || !saw_user)
        throw ConfigError("prompt file '" + name + "' needs ### SYSTEM and ### USER sections");

    // Trailing newline runs are an artifact of the file format, not the prompt.
    auto chomp = [](std::string& s) {
        while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    };
    chomp(system_body);
    chomp(user_body);

    auto required_in = [&](const std::string& body) {
        std::vector<std::string> present;
        for (const auto& slot : file.slots) {
            if (body.find("<" + slot + ">") != std::string::npos) present.push_back(slot);
        }
        return present;
    };
    file.system = PromptTemplate{name + ".system", system_body, required_in(system_body)};
    file.user = PromptTemplate{name + ".user", user_body, required_in(user_body)};

    // Every declared slot must appear somewhere in the pair.
    for (const auto& slot : file.slots) {
        const std::string token = "<" + slot + ">";
        if (system_body.find(token) == std::string::npos &&
            user_body.find(token) == std::string::npos)
            throw ConfigError("prompt file '" + name + "' declares unused slot '" + slot + "'");
    }
    return file;
}

PromptLibrary::PromptLibrary(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("prompt directory not found: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        std::ifstream in(entry.path());
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string name = entry.path().stem().string();
        files_.emplace(name, parse_prompt_file(name, buf.str()));
    }
    if (files_.empty()) throw ConfigError("no prompt templates in " + dir.string());
}

const PromptFile& PromptLibrary::get(const std::string& name) const {
    auto it = files_.find(name);
    if (it == files_.end()) throw ConfigError("unknown prompt template: " + name);
    return it->second;
}

std::vector<std::string> PromptLibrary::names() const {
    std::vector<std::string> out;
    out.reserve(files_.size());
    for (const auto& [name, _] : files_) out.push_back(name);
    return out;
}

std::string binding_digest(const Bindings& bindings) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [k, v] : bindings) {  // std::map iterates in key order
        h = fnv1a64(k, h);
        h = fnv1a64("=", h);
        h = fnv1a64(v, h);
        h = fnv1a64("\x1f", h);
    }
    return hex64(h);
}

}  // namespace mhsense::gateway
